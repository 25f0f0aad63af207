//! Sparse signed graphon model: specification, built-in graphons, network
//! sampling, and population balance moments.
//!
//! A network with `n` nodes is drawn by giving each node a latent position
//! `X_i ~ U[0, 1]`, connecting each pair independently with probability
//! `rho * F(X_i, X_j)`, and making each present edge negative with probability
//! `s * G(X_i, X_j)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Sign, SignedAdjacency};
use crate::rng::{mix, StreamRng};

/// Symmetric function on the unit square.
pub type PairFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Smallest Monte Carlo budget accepted by [`population_moments`].
pub const MIN_MOMENT_BUDGET: u64 = 1_000;

/// Latent triples per deterministic work unit in [`population_moments`].
const MOMENT_CHUNK: u64 = 1 << 16;

/// Densities reported for the sparse grid `rho = n^(-1/k)`, `k = 3..=6`, at `n = 160`.
/// Only `k = 3` follows from `F = 1`; the others are recorded for comparison.
pub const SPARSE_GRID_REPORTED_DENSITIES: [(u32, f64); 4] =
    [(3, 0.184), (4, 0.264), (5, 0.336), (6, 0.520)];

#[derive(Error, Debug)]
pub enum GraphonError {
    #[error("{which} scale {value} must lie in (0, 1]")]
    Scale { which: &'static str, value: f64 },
    #[error("{which} graphon is not symmetric at ({x}, {y})")]
    Asymmetric { which: &'static str, x: f64, y: f64 },
    #[error("{which} probability {value} at ({x}, {y}) is outside [0, 1]")]
    Probability {
        which: &'static str,
        x: f64,
        y: f64,
        value: f64,
    },
    #[error("unknown built-in graphon {0:?}")]
    UnknownBuiltin(String),
    #[error("built-in graphon {name:?} requires parameter {param:?}")]
    MissingParameter { name: String, param: &'static str },
    #[error("built-in graphon {name:?} does not take parameter {param:?}")]
    UnexpectedParameter { name: String, param: String },
    #[error("invalid parameter {param:?} = {value}")]
    InvalidParameter { param: &'static str, value: f64 },
    #[error("node count must be at least 1")]
    NoNodes,
    #[error("Monte Carlo budget {0} is below the minimum of {MIN_MOMENT_BUDGET}")]
    BudgetTooSmall(u64),
    #[error("triangle probability is zero; balance ratios are undefined")]
    NoTriangles,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The quadruple `(F, G, rho, s)`.
#[derive(Clone)]
pub struct GraphonSpec {
    name: String,
    edge: PairFn,
    sign: PairFn,
    rho: f64,
    s: f64,
}

impl fmt::Debug for GraphonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphonSpec")
            .field("name", &self.name)
            .field("rho", &self.rho)
            .field("s", &self.s)
            .finish_non_exhaustive()
    }
}

fn probe_points() -> Vec<(f64, f64)> {
    let mut pts = vec![(0.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.25), (1.0, 0.4)];
    let mut rng = StreamRng::new(0x5EED_F00D);
    pts.extend((0..256).map(|_| (rng.uniform(), rng.uniform())));
    pts
}

impl GraphonSpec {
    /// Builds a spec, probing `F` and `G` for symmetry and the scaled
    /// probabilities for range on a fixed set of points.
    pub fn new(
        name: impl Into<String>,
        edge: PairFn,
        sign: PairFn,
        rho: f64,
        s: f64,
    ) -> Result<Self, GraphonError> {
        for (which, value) in [("edge", rho), ("sign", s)] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(GraphonError::Scale { which, value });
            }
        }
        let spec = GraphonSpec {
            name: name.into(),
            edge,
            sign,
            rho,
            s,
        };
        for (x, y) in probe_points() {
            for (which, f) in [("edge", &spec.edge), ("sign", &spec.sign)] {
                if (f(x, y) - f(y, x)).abs() > 1e-12 {
                    return Err(GraphonError::Asymmetric { which, x, y });
                }
            }
            spec.edge_probability(x, y)?;
            spec.negative_probability(x, y)?;
        }
        Ok(spec)
    }

    /// Constant-probability spec: `rho * F = p_edge`, `s * G = p_negative`.
    pub fn constant(p_edge: f64, p_negative: f64) -> Result<Self, GraphonError> {
        let f: PairFn = Arc::new(move |_, _| p_edge);
        let g: PairFn = Arc::new(move |_, _| p_negative);
        Self::new("constant", f, g, 1.0, 1.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Same graphon with a different edge scale.
    pub fn with_rho(&self, rho: f64) -> Result<Self, GraphonError> {
        Self::new(
            self.name.clone(),
            self.edge.clone(),
            self.sign.clone(),
            rho,
            self.s,
        )
    }

    /// Same graphon with a different sign scale.
    pub fn with_s(&self, s: f64) -> Result<Self, GraphonError> {
        Self::new(
            self.name.clone(),
            self.edge.clone(),
            self.sign.clone(),
            self.rho,
            s,
        )
    }

    /// `rho * F(x, y)`, checked to lie in [0, 1].
    #[inline]
    pub fn edge_probability(&self, x: f64, y: f64) -> Result<f64, GraphonError> {
        let p = self.rho * (self.edge)(x, y);
        check_probability("edge", x, y, p)
    }

    /// `s * G(x, y)`, checked to lie in [0, 1].
    #[inline]
    pub fn negative_probability(&self, x: f64, y: f64) -> Result<f64, GraphonError> {
        let p = self.s * (self.sign)(x, y);
        check_probability("sign", x, y, p)
    }
}

#[inline]
fn check_probability(which: &'static str, x: f64, y: f64, p: f64) -> Result<f64, GraphonError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(GraphonError::Probability {
            which,
            x,
            y,
            value: p,
        })
    }
}

/// `2 cos(x^2 + y^2) / 3 + 0.3`
pub fn cosine_sign(x: f64, y: f64) -> f64 {
    2.0 * (x * x + y * y).cos() / 3.0 + 0.3
}

/// `1 / (1 + exp(alpha (x - 0.4)(y - 0.4)))`
pub fn logistic_sign(alpha: f64, x: f64, y: f64) -> f64 {
    1.0 / (1.0 + (alpha * (x - 0.4) * (y - 0.4)).exp())
}

/// Names accepted by [`builtin_spec`].
pub const BUILTIN_NAMES: [&str; 3] = ["const-cos", "logistic-balance", "sparse-const"];

/// Built-in graphons used by the simulation studies.
///
/// * `const-cos`: `rho F = edge` (default 0.8), `s G = 2cos(x^2+y^2)/3 + 0.3`.
/// * `logistic-balance`: `rho F = edge` (default 0.8),
///   `s G = 1/(1 + exp(alpha (x-0.4)(y-0.4)))`; requires `alpha`.
/// * `sparse-const`: `F = 1`, `rho = n^(-1/k)`, cosine sign part; requires `k` and `n`.
///
/// Every built-in also accepts `n` (ignored unless needed).
pub fn builtin_spec(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<GraphonSpec, GraphonError> {
    let allowed: &[&str] = match name {
        "const-cos" => &["edge", "n"],
        "logistic-balance" => &["alpha", "edge", "n"],
        "sparse-const" => &["k", "n"],
        other => return Err(GraphonError::UnknownBuiltin(other.to_string())),
    };
    if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(GraphonError::UnexpectedParameter {
            name: name.to_string(),
            param: bad.clone(),
        });
    }
    let require = |param: &'static str| {
        params
            .get(param)
            .copied()
            .ok_or_else(|| GraphonError::MissingParameter {
                name: name.to_string(),
                param,
            })
    };
    let one: PairFn = Arc::new(|_, _| 1.0);
    let cos: PairFn = Arc::new(cosine_sign);
    match name {
        "const-cos" => {
            let edge = params.get("edge").copied().unwrap_or(0.8);
            GraphonSpec::new(name, one, cos, edge, 1.0)
        }
        "logistic-balance" => {
            let alpha = require("alpha")?;
            if !alpha.is_finite() {
                return Err(GraphonError::InvalidParameter {
                    param: "alpha",
                    value: alpha,
                });
            }
            let edge = params.get("edge").copied().unwrap_or(0.8);
            let g: PairFn = Arc::new(move |x, y| logistic_sign(alpha, x, y));
            GraphonSpec::new(name, one, g, edge, 1.0)
        }
        _ => {
            let k = require("k")?;
            let n = require("n")?;
            if k.is_nan() || k <= 0.0 {
                return Err(GraphonError::InvalidParameter {
                    param: "k",
                    value: k,
                });
            }
            if n.is_nan() || n < 1.0 {
                return Err(GraphonError::InvalidParameter {
                    param: "n",
                    value: n,
                });
            }
            GraphonSpec::new(name, one, cos, n.powf(-1.0 / k), 1.0)
        }
    }
}

/// JSON spec file: `{name, params, rho, s, n}`; `rho` and `s` override the
/// built-in scales when present.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl SpecFile {
    /// Resolves the graphon for a network of `n` nodes (`n` is passed to
    /// built-ins that need it unless `params` already fixes it).
    pub fn resolve(&self, n: Option<usize>) -> Result<GraphonSpec, GraphonError> {
        let mut params = self.params.clone();
        if self.name == "sparse-const" && !params.contains_key("n") {
            if let Some(n) = n.or(self.n) {
                params.insert("n".to_string(), n as f64);
            }
        }
        let mut spec = builtin_spec(&self.name, &params)?;
        if let Some(rho) = self.rho {
            spec = spec.with_rho(rho)?;
        }
        if let Some(s) = self.s {
            spec = spec.with_s(s)?;
        }
        Ok(spec)
    }
}

/// Draws `A ~ G(n, F, G, rho, s)`. Deterministic in `(spec, n, seed)`.
pub fn sample_network(
    spec: &GraphonSpec,
    n: usize,
    seed: u64,
) -> Result<SignedAdjacency, GraphonError> {
    sample_network_with_latent(spec, n, seed).map(|(adj, _)| adj)
}

/// As [`sample_network`], also returning the latent positions.
///
/// Draw order: `X_0..X_{n-1}`, then for each pair `i < j` in row-major order
/// one uniform for presence and, if present, one uniform for the sign.
pub fn sample_network_with_latent(
    spec: &GraphonSpec,
    n: usize,
    seed: u64,
) -> Result<(SignedAdjacency, Vec<f64>), GraphonError> {
    if n == 0 {
        return Err(GraphonError::NoNodes);
    }
    let mut rng = StreamRng::new(seed);
    let latent: Vec<f64> = (0..n).map(|_| rng.uniform()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (latent[i], latent[j]);
            let p = spec.edge_probability(x, y)?;
            if rng.uniform() < p {
                let q = spec.negative_probability(x, y)?;
                let sign = if rng.uniform() < q {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                edges.push((i, j, sign));
            }
        }
    }
    Ok((SignedAdjacency::from_edges(n, edges)?, latent))
}

/// Probability that a triangle whose edges are negative with probabilities
/// `s` is balanced (has an even number of negative edges).
#[inline]
pub fn balanced_probability(s: [f64; 3]) -> f64 {
    (1.0 + (1.0 - 2.0 * s[0]) * (1.0 - 2.0 * s[1]) * (1.0 - 2.0 * s[2])) / 2.0
}

/// Probabilities of 0, 1, 2 and 3 negative edges (triangle types 1..4).
#[inline]
pub fn type_probabilities(s: [f64; 3]) -> [f64; 4] {
    let c = [1.0 - s[0], 1.0 - s[1], 1.0 - s[2]];
    [
        c[0] * c[1] * c[2],
        s[0] * c[1] * c[2] + c[0] * s[1] * c[2] + c[0] * c[1] * s[2],
        c[0] * s[1] * s[2] + s[0] * c[1] * s[2] + s[0] * s[1] * c[2],
        s[0] * s[1] * s[2],
    ]
}

/// Population triangle probabilities and balance ratios.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PopulationMoments {
    /// Expected balanced-triangle probability `u_n`.
    pub u: f64,
    /// Expected triangle probability `v_n`.
    pub v: f64,
    /// `u / v`, the expected proportion of balanced triangles.
    pub w: f64,
    /// Expected proportion of each triangle type among triangles.
    pub w_t: [f64; 4],
    pub mc_se: MonteCarloSe,
    pub budget: u64,
}

impl PopulationMoments {
    /// Ratio for a target: `w` for balanced, `w_t[t-1]` for type `t`.
    pub fn ratio(&self, target: crate::census::Target) -> f64 {
        match target.type_index() {
            None => self.w,
            Some(t) => self.w_t[t],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloSe {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub w_t: [f64; 4],
}

#[derive(Clone, Copy, Default)]
struct MomentSums {
    count: u64,
    v: f64,
    v2: f64,
    // index 0: balanced, 1..=4: types
    num: [f64; 5],
    num2: [f64; 5],
    cross: [f64; 5],
}

impl MomentSums {
    fn merge(&mut self, o: &MomentSums) {
        self.count += o.count;
        self.v += o.v;
        self.v2 += o.v2;
        for k in 0..5 {
            self.num[k] += o.num[k];
            self.num2[k] += o.num2[k];
            self.cross[k] += o.cross[k];
        }
    }
}

/// Monte Carlo over latent triples with the exact conditional sign law.
///
/// The budget is split into fixed chunks, each with its own derived stream and
/// summed in chunk order, so the result does not depend on the thread count.
pub fn population_moments(
    spec: &GraphonSpec,
    budget: u64,
    seed: u64,
) -> Result<PopulationMoments, GraphonError> {
    if budget < MIN_MOMENT_BUDGET {
        return Err(GraphonError::BudgetTooSmall(budget));
    }
    let chunks = budget.div_ceil(MOMENT_CHUNK);
    let partial: Vec<Result<MomentSums, GraphonError>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = MOMENT_CHUNK.min(budget - c * MOMENT_CHUNK);
            let mut rng = StreamRng::new(mix(seed, c));
            let mut acc = MomentSums::default();
            for _ in 0..len {
                let x = [rng.uniform(), rng.uniform(), rng.uniform()];
                let pairs = [(0, 1), (1, 2), (0, 2)];
                let mut pe = 1.0;
                let mut s = [0.0; 3];
                for (k, &(a, b)) in pairs.iter().enumerate() {
                    pe *= spec.edge_probability(x[a], x[b])?;
                    s[k] = spec.negative_probability(x[a], x[b])?;
                }
                let types = type_probabilities(s);
                let vals = [
                    balanced_probability(s),
                    types[0],
                    types[1],
                    types[2],
                    types[3],
                ];
                acc.count += 1;
                acc.v += pe;
                acc.v2 += pe * pe;
                for (k, &val) in vals.iter().enumerate() {
                    let u = pe * val;
                    acc.num[k] += u;
                    acc.num2[k] += u * u;
                    acc.cross[k] += u * pe;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = MomentSums::default();
    for p in partial {
        total.merge(&p?);
    }

    let m = total.count as f64;
    let v = total.v / m;
    if v <= 0.0 {
        return Err(GraphonError::NoTriangles);
    }
    let se_mean = |sum: f64, sum2: f64| ((sum2 / m - (sum / m).powi(2)).max(0.0) / m).sqrt();
    // delta method: var(u/v) ~ E[(U - r V)^2] / (m v^2)
    let se_ratio = |k: usize, r: f64| {
        let e = total.num2[k] / m - 2.0 * r * total.cross[k] / m + r * r * total.v2 / m;
        (e.max(0.0) / m).sqrt() / v
    };
    let u = total.num[0] / m;
    let w = u / v;
    let mut w_t = [0.0; 4];
    let mut w_t_se = [0.0; 4];
    for t in 0..4 {
        w_t[t] = total.num[t + 1] / m / v;
        w_t_se[t] = se_ratio(t + 1, w_t[t]);
    }
    Ok(PopulationMoments {
        u,
        v,
        w,
        w_t,
        mc_se: MonteCarloSe {
            u: se_mean(total.num[0], total.num2[0]),
            v: se_mean(total.v, total.v2),
            w: se_ratio(0, w),
            w_t: w_t_se,
        },
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn degenerate_probabilities() {
        let full = GraphonSpec::constant(1.0, 0.0).unwrap();
        let adj = sample_network(&full, 4, 9).unwrap();
        assert_eq!(adj.edge_count(), 6);
        assert!(adj.edges().all(|(_, _, s)| s == 1));

        let empty = GraphonSpec::constant(0.0, 0.5).unwrap();
        assert_eq!(sample_network(&empty, 30, 9).unwrap().edge_count(), 0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = builtin_spec("const-cos", &BTreeMap::new()).unwrap();
        let a = sample_network(&spec, 50, 17).unwrap();
        let b = sample_network(&spec, 50, 17).unwrap();
        let c = sample_network(&spec, 50, 18).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn builtin_formulas() {
        let cos = builtin_spec("const-cos", &BTreeMap::new()).unwrap();
        assert!((cos.negative_probability(0.0, 0.0).unwrap() - (2.0 / 3.0 + 0.3)).abs() < 1e-15);
        assert_eq!(cos.edge_probability(0.3, 0.9).unwrap(), 0.8);

        let flat = builtin_spec("logistic-balance", &params(&[("alpha", 0.0)])).unwrap();
        for (x, y) in [(0.0, 0.0), (0.1, 0.9), (1.0, 1.0)] {
            assert_eq!(flat.negative_probability(x, y).unwrap(), 0.5);
        }
        let sharp = builtin_spec("logistic-balance", &params(&[("alpha", 1e4)])).unwrap();
        assert!(sharp.negative_probability(1.0, 1.0).unwrap() < 1e-12);
        assert!(sharp.negative_probability(0.0, 1.0).unwrap() > 1.0 - 1e-12);

        let sparse = builtin_spec("sparse-const", &params(&[("k", 3.0), ("n", 160.0)])).unwrap();
        assert!((sparse.rho() - 160f64.powf(-1.0 / 3.0)).abs() < 1e-15);
        assert!((sparse.rho() - 0.1842).abs() < 1e-4);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            builtin_spec("nope", &BTreeMap::new()),
            Err(GraphonError::UnknownBuiltin(_))
        ));
        assert!(matches!(
            builtin_spec("logistic-balance", &BTreeMap::new()),
            Err(GraphonError::MissingParameter { param: "alpha", .. })
        ));
        assert!(matches!(
            builtin_spec("sparse-const", &params(&[("k", 3.0)])),
            Err(GraphonError::MissingParameter { param: "n", .. })
        ));
        assert!(matches!(
            builtin_spec("const-cos", &params(&[("alpah", 1.0)])),
            Err(GraphonError::UnexpectedParameter { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_graphons() {
        let asym: PairFn = Arc::new(|x, _| x);
        let one: PairFn = Arc::new(|_, _| 1.0);
        assert!(matches!(
            GraphonSpec::new("a", asym, one.clone(), 1.0, 1.0),
            Err(GraphonError::Asymmetric { which: "edge", .. })
        ));
        let big: PairFn = Arc::new(|_, _| 1.5);
        assert!(matches!(
            GraphonSpec::new("b", one.clone(), big, 1.0, 1.0),
            Err(GraphonError::Probability { which: "sign", .. })
        ));
        assert!(matches!(
            GraphonSpec::new("c", one.clone(), one.clone(), 0.0, 1.0),
            Err(GraphonError::Scale { which: "edge", .. })
        ));
        assert!(GraphonSpec::new("d", one.clone(), one, 0.5, 1.0).is_ok());
    }

    #[test]
    fn spec_file_resolution() {
        let file: SpecFile =
            serde_json::from_str(r#"{"name":"sparse-const","params":{"k":4},"n":160}"#).unwrap();
        let spec = file.resolve(None).unwrap();
        assert!((spec.rho() - 160f64.powf(-0.25)).abs() < 1e-15);
        let spec = file.resolve(Some(80)).unwrap();
        assert!((spec.rho() - 80f64.powf(-0.25)).abs() < 1e-15);

        let file: SpecFile =
            serde_json::from_str(r#"{"name":"const-cos","params":{},"rho":0.5,"s":0.5}"#).unwrap();
        let spec = file.resolve(None).unwrap();
        assert_eq!(spec.edge_probability(0.1, 0.2).unwrap(), 0.5);
        assert!(
            (spec.negative_probability(0.0, 0.0).unwrap() - 0.5 * (2.0 / 3.0 + 0.3)).abs() < 1e-15
        );

        assert!(serde_json::from_str::<SpecFile>(r#"{"name":"x","bogus":1}"#).is_err());
    }

    #[test]
    fn moments_all_positive() {
        let spec = GraphonSpec::constant(0.7, 0.0).unwrap();
        let m = population_moments(&spec, 5_000, 1).unwrap();
        assert_eq!(m.w, 1.0);
        assert_eq!(m.w_t, [1.0, 0.0, 0.0, 0.0]);
        assert!((m.v - 0.343).abs() < 1e-12);
    }

    #[test]
    fn moments_fair_signs() {
        // Exact binomial law with p = 1/2: (1, 3, 3, 1) / 8.
        let spec = GraphonSpec::constant(0.3, 0.5).unwrap();
        let m = population_moments(&spec, 5_000, 1).unwrap();
        assert!((m.w - 0.5).abs() < 1e-12);
        let expect = [0.125, 0.375, 0.375, 0.125];
        for (w, e) in m.w_t.iter().zip(expect) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn moments_invariants() {
        let spec = builtin_spec("const-cos", &BTreeMap::new()).unwrap();
        let m = population_moments(&spec, 200_000, 3).unwrap();
        assert!(0.0 <= m.u && m.u <= m.v && m.v <= 1.0);
        assert!((m.w_t.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((m.w - (m.w_t[0] + m.w_t[2])).abs() < 1e-12);
        assert!(m.mc_se.w > 0.0 && m.mc_se.w < 1e-2);
        // constant edge part cancels: v is exactly 0.8^3
        assert!((m.v - 0.512).abs() < 1e-12);
    }

    #[test]
    fn moments_errors() {
        let spec = GraphonSpec::constant(0.5, 0.5).unwrap();
        assert!(matches!(
            population_moments(&spec, 999, 0),
            Err(GraphonError::BudgetTooSmall(999))
        ));
        let none: PairFn = Arc::new(|_, _| 0.0);
        let half: PairFn = Arc::new(|_, _| 0.5);
        let spec = GraphonSpec::new("none", none, half, 1.0, 1.0).unwrap();
        assert!(matches!(
            population_moments(&spec, 1_000, 0),
            Err(GraphonError::NoTriangles)
        ));
    }

    #[test]
    fn reflection_symmetric_graphon_gives_identical_moments() {
        let f: PairFn = Arc::new(|x, y| 0.5 + 0.4 * ((x - 0.5) * (y - 0.5)).abs());
        let g: PairFn = Arc::new(|x, y| 0.2 + 0.6 * ((x - 0.5).powi(2) + (y - 0.5).powi(2)));
        let (f2, g2) = (f.clone(), g.clone());
        let reflected = GraphonSpec::new(
            "reflected",
            Arc::new(move |x, y| f2(1.0 - x, 1.0 - y)),
            Arc::new(move |x, y| g2(1.0 - x, 1.0 - y)),
            1.0,
            1.0,
        )
        .unwrap();
        let spec = GraphonSpec::new("base", f, g, 1.0, 1.0).unwrap();
        let a = population_moments(&spec, 20_000, 5).unwrap();
        let b = population_moments(&reflected, 20_000, 5).unwrap();
        assert!((a.w - b.w).abs() < 1e-12);
        for t in 0..4 {
            assert!((a.w_t[t] - b.w_t[t]).abs() < 1e-12);
        }
    }
}
