//! Declarative Monte Carlo studies: coverage, CDF accuracy and timing.
//!
//! Seeds: cell `c` uses `mix(seed, c)`; replication `r` of that cell samples
//! its network from `mix(cell_seed, r)`. The population truth uses stream
//! [`TRUTH_STREAM`] of the cell seed, and bootstrap resampling uses stream
//! [`BOOTSTRAP_STREAM`] of the replication seed.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bootstrap::{bootstrap_from_analysis, ecdf_sorted, interval_from_draws};
use crate::census::{triangle_profile, Target};
use crate::graph::SignedAdjacency;
use crate::graphon::{
    population_moments, sample_network, GraphonError, GraphonSpec, SpecFile, MIN_MOMENT_BUDGET,
};
use crate::inference::{
    delta_draw, edgeworth_cdf, normal_cdf, EdgeworthCoefficients, InferenceError, Method,
    TargetAnalysis,
};
use crate::rng::mix;

/// Stream tag of the population truth under a cell seed.
pub const TRUTH_STREAM: u64 = u64::MAX;
/// Stream tag of bootstrap resampling under a replication seed.
pub const BOOTSTRAP_STREAM: u64 = u64::MAX - 1;
/// Points of the CDF comparison grid on [-4, 4].
pub const CDF_GRID_POINTS: usize = 512;
/// Confidence of the DKW band reported next to CDF distances.
pub const DKW_CONFIDENCE: f64 = 0.95;

#[derive(Error, Debug)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error(transparent)]
    Graphon(#[from] GraphonError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error("every replication is degenerate for n = {n}, target {target}, method {method}")]
    AllDegenerate {
        n: usize,
        target: Target,
        method: Method,
    },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Coverage,
    Cdf,
    Timing,
}

/// One graphon parameter swept over a list of values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    pub param: String,
    pub values: Vec<f64>,
}

fn default_name() -> String {
    "experiment".to_string()
}
fn default_level() -> f64 {
    0.95
}
fn default_methods() -> Vec<Method> {
    vec![Method::Edgeworth, Method::Normal]
}
fn default_targets() -> Vec<Target> {
    vec![Target::Balanced]
}
fn default_truth_budget() -> u64 {
    10_000_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub study: StudyKind,
    pub graphon: SpecFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<ParamGrid>,
    pub n_grid: Vec<usize>,
    /// Networks per cell (truth sample size for the CDF study).
    pub replications: usize,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_targets")]
    pub targets: Vec<Target>,
    #[serde(default = "default_truth_budget")]
    pub truth_budget: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub c_delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap_replicates: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.n_grid.is_empty() {
            return bad("n_grid is empty".into());
        }
        if let Some(&n) = self.n_grid.iter().find(|&&n| n < 3) {
            return bad(format!("node count {n} is below 3"));
        }
        if let Some(g) = &self.grid {
            if g.values.is_empty() {
                return bad(format!("grid for {:?} is empty", g.param));
            }
        }
        if self.methods.is_empty() {
            return bad("methods is empty".into());
        }
        if self.targets.is_empty() {
            return bad("targets is empty".into());
        }
        let wants_bootstrap = self.methods.contains(&Method::Bootstrap);
        if wants_bootstrap != self.bootstrap_replicates.is_some() {
            return bad(
                "bootstrap_replicates must be set exactly when bootstrap is a method".into(),
            );
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level {} must lie in (0, 1)", self.level));
        }
        if !(self.c_delta >= 0.0 && self.c_delta.is_finite()) {
            return bad(format!(
                "c_delta {} must be finite and nonnegative",
                self.c_delta
            ));
        }
        if self.truth_budget < MIN_MOMENT_BUDGET {
            return bad(format!("truth_budget must be at least {MIN_MOMENT_BUDGET}"));
        }
        for cell in self.cells() {
            cell.spec()?;
        }
        Ok(())
    }

    /// Grid cells in output order: parameter values outer, node counts inner.
    pub fn cells(&self) -> Vec<Cell> {
        let values: Vec<Option<f64>> = match &self.grid {
            Some(g) => g.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        };
        let mut cells = Vec::new();
        for value in values {
            for &n in &self.n_grid {
                let mut graphon = self.graphon.clone();
                if let (Some(g), Some(v)) = (&self.grid, value) {
                    graphon.params.insert(g.param.clone(), v);
                }
                let index = cells.len() as u64;
                cells.push(Cell {
                    index,
                    seed: mix(self.seed, index),
                    n,
                    param: self
                        .grid
                        .as_ref()
                        .map(|g| g.param.clone())
                        .unwrap_or_default(),
                    param_value: value,
                    graphon,
                });
            }
        }
        cells
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub index: u64,
    pub seed: u64,
    pub n: usize,
    pub param: String,
    pub param_value: Option<f64>,
    pub graphon: SpecFile,
}

impl Cell {
    pub fn spec(&self) -> Result<GraphonSpec, GraphonError> {
        self.graphon.resolve(Some(self.n))
    }

    pub fn replication_seed(&self, r: u64) -> u64 {
        mix(self.seed, r)
    }

    pub fn network(&self, spec: &GraphonSpec, r: u64) -> Result<SignedAdjacency, GraphonError> {
        sample_network(spec, self.n, self.replication_seed(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageRow {
    pub study: String,
    pub n: usize,
    pub param: String,
    pub param_value: Option<f64>,
    pub rho: f64,
    pub method: Method,
    pub target: Target,
    pub replications: usize,
    pub valid: usize,
    pub degenerate: usize,
    pub coverage: f64,
    pub coverage_se: f64,
    pub mean_length: f64,
    pub mean_estimate: f64,
    pub true_value: f64,
    pub realized_density: f64,
    pub realized_negative_fraction: f64,
    pub wall_time_s: f64,
}

/// Interval `(lower, upper, estimate)` for one target and method.
type Outcome = Option<(f64, f64, f64)>;

struct Replication {
    density: f64,
    negative_fraction: Option<f64>,
    /// Indexed `[target][method]`.
    outcomes: Vec<Vec<Outcome>>,
    /// Seconds per method, including the shared census and analysis.
    seconds: Vec<f64>,
}

fn density_and_sign(adj: &SignedAdjacency) -> (f64, Option<f64>) {
    let n = adj.n() as f64;
    let edges = adj.edge_count();
    let negative = adj.edges().filter(|e| e.2 < 0).count();
    let density = edges as f64 / (n * (n - 1.0) / 2.0);
    (density, (edges > 0).then(|| negative as f64 / edges as f64))
}

fn run_replication(
    config: &ExperimentConfig,
    cell: &Cell,
    spec: &GraphonSpec,
    r: u64,
) -> Result<Replication, HarnessError> {
    let adj = cell.network(spec, r)?;
    let rep_seed = cell.replication_seed(r);
    let (density, negative_fraction) = density_and_sign(&adj);
    let start = Instant::now();
    let profile = triangle_profile(&adj);
    let shared = start.elapsed().as_secs_f64();
    let mut seconds = vec![shared; config.methods.len()];
    let mut outcomes = Vec::with_capacity(config.targets.len());
    for &target in &config.targets {
        let start = Instant::now();
        let analysis = match TargetAnalysis::new(&profile, target) {
            Ok(a) => a,
            Err(e) if e.is_degenerate() => {
                outcomes.push(vec![None; config.methods.len()]);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let coef = analysis.coefficients(config.c_delta)?;
        let delta = delta_draw(&coef, rep_seed);
        let shared = start.elapsed().as_secs_f64();
        let mut row = Vec::with_capacity(config.methods.len());
        for (k, &method) in config.methods.iter().enumerate() {
            let start = Instant::now();
            let interval = match method {
                Method::Edgeworth => Some(analysis.interval(&coef, config.level, delta)?),
                Method::Normal => {
                    let normal = EdgeworthCoefficients {
                        c_delta: coef.c_delta,
                        delta_variance: coef.delta_variance,
                        ..EdgeworthCoefficients::normal(coef.n)
                    };
                    Some(analysis.interval(&normal, config.level, delta)?)
                }
                Method::Bootstrap => {
                    let b = config.bootstrap_replicates.unwrap_or_default();
                    match bootstrap_from_analysis(
                        &adj,
                        &analysis,
                        b,
                        mix(rep_seed, BOOTSTRAP_STREAM),
                    ) {
                        Ok(dist) => Some(interval_from_draws(&dist, config.level)),
                        Err(e) if e.is_degenerate() => None,
                        Err(e) => return Err(e.into()),
                    }
                }
            };
            seconds[k] += shared + start.elapsed().as_secs_f64();
            row.push(interval.map(|(lo, hi)| (lo, hi, analysis.estimate())));
        }
        outcomes.push(row);
    }
    Ok(Replication {
        density,
        negative_fraction,
        outcomes,
        seconds,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

pub fn run_coverage(config: &ExperimentConfig) -> Result<Vec<CoverageRow>, HarnessError> {
    config.validate()?;
    let mut rows = Vec::new();
    for cell in config.cells() {
        let spec = cell.spec()?;
        let truth = population_moments(&spec, config.truth_budget, mix(cell.seed, TRUTH_STREAM))?;
        let reps: Vec<Replication> = (0..config.replications as u64)
            .into_par_iter()
            .map(|r| run_replication(config, &cell, &spec, r))
            .collect::<Result<_, _>>()?;
        let density = mean(reps.iter().map(|r| r.density));
        let negative = mean(reps.iter().filter_map(|r| r.negative_fraction));
        for (t, &target) in config.targets.iter().enumerate() {
            let true_value = truth.ratio(target);
            for (k, &method) in config.methods.iter().enumerate() {
                let valid: Vec<(f64, f64, f64)> =
                    reps.iter().filter_map(|r| r.outcomes[t][k]).collect();
                if valid.is_empty() {
                    return Err(HarnessError::AllDegenerate {
                        n: cell.n,
                        target,
                        method,
                    });
                }
                let m = valid.len() as f64;
                let covered = valid
                    .iter()
                    .filter(|(lo, hi, _)| *lo <= true_value && true_value <= *hi)
                    .count() as f64;
                let coverage = covered / m;
                rows.push(CoverageRow {
                    study: config.name.clone(),
                    n: cell.n,
                    param: cell.param.clone(),
                    param_value: cell.param_value,
                    rho: spec.rho(),
                    method,
                    target,
                    replications: config.replications,
                    valid: valid.len(),
                    degenerate: config.replications - valid.len(),
                    coverage,
                    coverage_se: (coverage * (1.0 - coverage) / m).sqrt(),
                    mean_length: mean(valid.iter().map(|(lo, hi, _)| hi - lo)),
                    mean_estimate: mean(valid.iter().map(|v| v.2)),
                    true_value,
                    realized_density: density,
                    realized_negative_fraction: negative,
                    wall_time_s: reps.iter().map(|r| r.seconds[k]).sum(),
                });
            }
        }
    }
    Ok(rows)
}

/// Evenly spaced grid of [`CDF_GRID_POINTS`] points on [-4, 4].
pub fn cdf_grid() -> Vec<f64> {
    let m = CDF_GRID_POINTS - 1;
    (0..CDF_GRID_POINTS)
        .map(|k| -4.0 + 8.0 * k as f64 / m as f64)
        .collect()
}

/// Half-width of the DKW band for an empirical CDF of `m` draws.
pub fn dkw_bound(m: usize, confidence: f64) -> f64 {
    ((2.0 / (1.0 - confidence)).ln() / (2.0 * m as f64)).sqrt()
}

/// Largest absolute difference between two curves on a common grid.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfSummaryRow {
    pub study: String,
    pub n: usize,
    pub param: String,
    pub param_value: Option<f64>,
    pub rho: f64,
    pub target: Target,
    pub method: Method,
    pub truth_replications: usize,
    pub valid: usize,
    pub degenerate: usize,
    pub sup_distance: f64,
    pub dkw_bound: f64,
    pub true_value: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CdfCurveRow {
    pub n: usize,
    pub param_value: Option<f64>,
    pub target: Target,
    pub x: f64,
    pub truth: f64,
    pub edgeworth: Option<f64>,
    pub normal: Option<f64>,
    pub bootstrap: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CdfStudy {
    pub summary: Vec<CdfSummaryRow>,
    pub curves: Vec<CdfCurveRow>,
}

/// Simulated distribution of the studentized statistic against its approximations.
///
/// The truth is the empirical CDF of `(estimate - w) / S_hat` over the cell's
/// replications. The Edgeworth curve uses the coefficients, and the bootstrap
/// resamples the network, of the first non-degenerate replication.
pub fn run_cdf_study(config: &ExperimentConfig) -> Result<CdfStudy, HarnessError> {
    config.validate()?;
    let grid = cdf_grid();
    let mut study = CdfStudy::default();
    for cell in config.cells() {
        let spec = cell.spec()?;
        let truth = population_moments(&spec, config.truth_budget, mix(cell.seed, TRUTH_STREAM))?;
        for &target in &config.targets {
            let w = truth.ratio(target);
            let stats: Vec<Option<f64>> = (0..config.replications as u64)
                .into_par_iter()
                .map(|r| -> Result<Option<f64>, HarnessError> {
                    let adj = cell.network(&spec, r)?;
                    match TargetAnalysis::from_network(&adj, target) {
                        Ok(a) => Ok(Some(a.studentize(w))),
                        Err(e) if e.is_degenerate() => Ok(None),
                        Err(e) => Err(e.into()),
                    }
                })
                .collect::<Result<_, _>>()?;
            let mut sorted: Vec<f64> = stats.iter().flatten().copied().collect();
            let valid = sorted.len();
            let Some(observed_r) = stats.iter().position(Option::is_some) else {
                return Err(HarnessError::AllDegenerate {
                    n: cell.n,
                    target,
                    method: config.methods[0],
                });
            };
            sorted.sort_by(f64::total_cmp);
            let truth_curve: Vec<f64> = grid.iter().map(|&x| ecdf_sorted(&sorted, x)).collect();

            let observed_adj = cell.network(&spec, observed_r as u64)?;
            let start = Instant::now();
            let observed = TargetAnalysis::from_network(&observed_adj, target)?;
            let coef = observed.coefficients(0.0)?;
            let analysis_time = start.elapsed().as_secs_f64();

            let mut curves: Vec<(Method, Vec<f64>, f64)> = Vec::new();
            for &method in &config.methods {
                let start = Instant::now();
                let curve: Vec<f64> = match method {
                    Method::Edgeworth => grid.iter().map(|&x| edgeworth_cdf(x, &coef)).collect(),
                    Method::Normal => grid.iter().map(|&x| normal_cdf(x)).collect(),
                    Method::Bootstrap => {
                        let dist = bootstrap_from_analysis(
                            &observed_adj,
                            &observed,
                            config.bootstrap_replicates.unwrap_or_default(),
                            mix(cell.replication_seed(observed_r as u64), BOOTSTRAP_STREAM),
                        )?;
                        let draws = dist.sorted();
                        grid.iter().map(|&x| ecdf_sorted(&draws, x)).collect()
                    }
                };
                let elapsed = analysis_time + start.elapsed().as_secs_f64();
                curves.push((method, curve, elapsed));
            }

            for (method, curve, elapsed) in &curves {
                study.summary.push(CdfSummaryRow {
                    study: config.name.clone(),
                    n: cell.n,
                    param: cell.param.clone(),
                    param_value: cell.param_value,
                    rho: spec.rho(),
                    target,
                    method: *method,
                    truth_replications: config.replications,
                    valid,
                    degenerate: config.replications - valid,
                    sup_distance: sup_distance(curve, &truth_curve),
                    dkw_bound: dkw_bound(valid, DKW_CONFIDENCE),
                    true_value: w,
                    a_hat: coef.a_hat,
                    b_hat: coef.b_hat,
                    c_hat: coef.c_hat,
                    wall_time_s: *elapsed,
                });
            }
            let pick = |m: Method, k: usize| curves.iter().find(|c| c.0 == m).map(|c| c.1[k]);
            for (k, &x) in grid.iter().enumerate() {
                study.curves.push(CdfCurveRow {
                    n: cell.n,
                    param_value: cell.param_value,
                    target,
                    x,
                    truth: truth_curve[k],
                    edgeworth: pick(Method::Edgeworth, k),
                    normal: pick(Method::Normal, k),
                    bootstrap: pick(Method::Bootstrap, k),
                });
            }
        }
    }
    Ok(study)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingRow {
    pub study: String,
    pub n: usize,
    pub param: String,
    pub param_value: Option<f64>,
    pub method: Method,
    pub target: Target,
    pub replications: usize,
    pub degenerate: usize,
    pub total_s: f64,
    pub mean_s: f64,
}

/// Serial wall-clock time of each method, from census to interval, on the
/// cell's replication networks.
pub fn run_timing(config: &ExperimentConfig) -> Result<Vec<TimingRow>, HarnessError> {
    config.validate()?;
    let mut rows = Vec::new();
    for cell in config.cells() {
        let spec = cell.spec()?;
        let networks: Vec<SignedAdjacency> = (0..config.replications as u64)
            .map(|r| cell.network(&spec, r))
            .collect::<Result<_, _>>()?;
        for &target in &config.targets {
            for &method in &config.methods {
                let mut total = 0.0;
                let mut degenerate = 0;
                for (r, adj) in networks.iter().enumerate() {
                    let start = Instant::now();
                    let ok =
                        time_one(config, adj, target, method, cell.replication_seed(r as u64))?;
                    total += start.elapsed().as_secs_f64();
                    if !ok {
                        degenerate += 1;
                    }
                }
                rows.push(TimingRow {
                    study: config.name.clone(),
                    n: cell.n,
                    param: cell.param.clone(),
                    param_value: cell.param_value,
                    method,
                    target,
                    replications: config.replications,
                    degenerate,
                    total_s: total,
                    mean_s: total / config.replications as f64,
                });
            }
        }
    }
    Ok(rows)
}

fn time_one(
    config: &ExperimentConfig,
    adj: &SignedAdjacency,
    target: Target,
    method: Method,
    seed: u64,
) -> Result<bool, HarnessError> {
    let analysis = match TargetAnalysis::from_network(adj, target) {
        Ok(a) => a,
        Err(e) if e.is_degenerate() => return Ok(false),
        Err(e) => return Err(e.into()),
    };
    let result = match method {
        Method::Edgeworth => {
            let coef = analysis.coefficients(config.c_delta)?;
            analysis.interval(&coef, config.level, delta_draw(&coef, seed))
        }
        Method::Normal => analysis.interval(
            &EdgeworthCoefficients::normal(analysis.n()),
            config.level,
            0.0,
        ),
        Method::Bootstrap => bootstrap_from_analysis(
            adj,
            &analysis,
            config.bootstrap_replicates.unwrap_or_default(),
            mix(seed, BOOTSTRAP_STREAM),
        )
        .map(|d| interval_from_draws(&d, config.level)),
    };
    match result {
        Ok(_) => Ok(true),
        Err(e) if e.is_degenerate() => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Long-format row for plotting tools.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotRow {
    pub study: String,
    pub n: usize,
    pub param: String,
    pub param_value: Option<f64>,
    pub target: Target,
    pub series: String,
    pub x: Option<f64>,
    pub metric: String,
    pub value: f64,
}

pub fn coverage_plot_rows(rows: &[CoverageRow]) -> Vec<PlotRow> {
    rows.iter()
        .flat_map(|r| {
            [
                ("coverage", r.coverage),
                ("coverage_se", r.coverage_se),
                ("mean_length", r.mean_length),
                ("true_value", r.true_value),
            ]
            .map(|(metric, value)| PlotRow {
                study: r.study.clone(),
                n: r.n,
                param: r.param.clone(),
                param_value: r.param_value,
                target: r.target,
                series: r.method.to_string(),
                x: None,
                metric: metric.to_string(),
                value,
            })
        })
        .collect()
}

pub fn cdf_plot_rows(study: &str, param: &str, curves: &[CdfCurveRow]) -> Vec<PlotRow> {
    let mut out = Vec::new();
    for c in curves {
        let series = [
            ("truth", Some(c.truth)),
            ("edgeworth", c.edgeworth),
            ("normal", c.normal),
            ("bootstrap", c.bootstrap),
        ];
        for (name, value) in series {
            if let Some(value) = value {
                out.push(PlotRow {
                    study: study.to_string(),
                    n: c.n,
                    param: param.to_string(),
                    param_value: c.param_value,
                    target: c.target,
                    series: name.to_string(),
                    x: Some(c.x),
                    metric: "cdf".to_string(),
                    value,
                });
            }
        }
    }
    out
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the configured study and writes its CSV files into `dir`.
pub fn run_to_dir(
    config: &ExperimentConfig,
    dir: &Path,
    plot_data: bool,
) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&Path) -> Result<(), HarnessError>| {
        let path = dir.join(name);
        f(&path)?;
        written.push(path);
        Ok::<(), HarnessError>(())
    };
    match config.study {
        StudyKind::Coverage => {
            let rows = run_coverage(config)?;
            emit("coverage.csv", &|p| write_csv(p, &rows))?;
            if plot_data {
                emit("coverage_long.csv", &|p| {
                    write_csv(p, &coverage_plot_rows(&rows))
                })?;
            }
        }
        StudyKind::Cdf => {
            let study = run_cdf_study(config)?;
            emit("cdf_summary.csv", &|p| write_csv(p, &study.summary))?;
            emit("cdf_curves.csv", &|p| write_csv(p, &study.curves))?;
            if plot_data {
                let param = config.grid.as_ref().map(|g| g.param.as_str()).unwrap_or("");
                let long = cdf_plot_rows(&config.name, param, &study.curves);
                emit("cdf_long.csv", &|p| write_csv(p, &long))?;
            }
        }
        StudyKind::Timing => {
            let rows = run_timing(config)?;
            emit("timing.csv", &|p| write_csv(p, &rows))?;
        }
    }
    Ok(written)
}
