//! Studentized inference for balance ratios: moments, projections, variance,
//! Edgeworth-corrected confidence intervals and tests.

mod edgeworth;
mod projections;

use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use edgeworth::{
    cornish_fisher_quantile, edgeworth_cdf, edgeworth_coefficients, normal_cdf, normal_pdf,
    normal_quantile, EdgeworthCoefficients,
};
pub use projections::{
    bracket_n_s2, projections, sample_moments, variance_estimator, Moments, PairTerms, Projections,
    VarianceEstimate,
};

use crate::census::{triangle_profile, Target, TriangleProfile};
use crate::graph::{summarize, GraphError, SignedAdjacency};
use crate::rng::StreamRng;

/// Default perturbation constant when the perturbation is switched on.
pub const DEFAULT_C_DELTA: f64 = 0.1;

/// Stream tag of the perturbation draw under a report seed.
pub const DELTA_STREAM: u64 = 0xDE17A;

#[derive(Error, Debug)]
pub enum InferenceError {
    #[error("need at least 3 nodes, got {n}")]
    TooFewNodes { n: usize },
    #[error("network has no triangles")]
    NoTriangles,
    #[error("degenerate variance: every first-order projection is zero")]
    DegenerateVariance,
    #[error("level {0} must lie in (0, 1)")]
    InvalidLevel(f64),
    #[error("alpha {0} must lie in (0, 1)")]
    InvalidAlpha(f64),
    #[error("c_delta {0} must be finite and nonnegative")]
    InvalidCDelta(f64),
    #[error("negative fraction {0} must lie in [0, 1]")]
    InvalidFraction(f64),
    #[error("null value {0} must be finite")]
    InvalidNull(f64),
    #[error("method {0} is not available for this operation")]
    UnsupportedMethod(Method),
    #[error("bootstrap needs at least {min} replicates, got {got}")]
    TooFewReplicates { got: usize, min: usize },
    #[error("{degenerate} of {total} bootstrap replicates are degenerate")]
    TooManyDegenerate { degenerate: usize, total: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl InferenceError {
    /// True for failures caused by the data lacking triangles or variance.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            InferenceError::NoTriangles
                | InferenceError::DegenerateVariance
                | InferenceError::TooManyDegenerate { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Edgeworth,
    Normal,
    Bootstrap,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Edgeworth, Method::Normal, Method::Bootstrap];

    pub fn name(self) -> &'static str {
        match self {
            Method::Edgeworth => "edgeworth",
            Method::Normal => "normal",
            Method::Bootstrap => "bootstrap",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                format!("unknown method {s:?} (expected edgeworth, normal or bootstrap)")
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternative {
    #[serde(rename = "greater")]
    Greater,
    #[serde(rename = "less")]
    Less,
    #[serde(rename = "two-sided")]
    TwoSided,
}

impl Alternative {
    pub fn name(self) -> &'static str {
        match self {
            Alternative::Greater => "greater",
            Alternative::Less => "less",
            Alternative::TwoSided => "two-sided",
        }
    }

    /// Greater for the balanced ratio, two-sided for a single type.
    pub fn default_for(target: Target) -> Self {
        match target {
            Target::Balanced => Alternative::Greater,
            _ => Alternative::TwoSided,
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Alternative {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            "two-sided" | "two_sided" => Ok(Alternative::TwoSided),
            _ => Err(format!(
                "unknown alternative {s:?} (expected greater, less or two-sided)"
            )),
        }
    }
}

/// Reference values for balance ratios.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Baselines {
    pub baseline50: f64,
    pub baseline25: f64,
    pub adjusted_balanced: f64,
    pub adjusted_type1: f64,
    pub adjusted_type2: f64,
    pub adjusted_type3: f64,
    pub adjusted_type4: f64,
}

impl Baselines {
    /// Sign-shuffling value for a target at this negative fraction.
    pub fn adjusted(&self, target: Target) -> f64 {
        match target {
            Target::Balanced => self.adjusted_balanced,
            Target::Type1 => self.adjusted_type1,
            Target::Type2 => self.adjusted_type2,
            Target::Type3 => self.adjusted_type3,
            Target::Type4 => self.adjusted_type4,
        }
    }

    pub fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("baseline50", self.baseline50),
            ("baseline25", self.baseline25),
            ("adjusted_balanced", self.adjusted_balanced),
            ("adjusted_type1", self.adjusted_type1),
            ("adjusted_type2", self.adjusted_type2),
            ("adjusted_type3", self.adjusted_type3),
            ("adjusted_type4", self.adjusted_type4),
        ]
    }
}

pub fn baselines(s: f64) -> Result<Baselines, InferenceError> {
    if !(0.0..=1.0).contains(&s) {
        return Err(InferenceError::InvalidFraction(s));
    }
    let c = 1.0 - s;
    let t1 = c * c * c;
    let t3 = 3.0 * s * s * c;
    Ok(Baselines {
        baseline50: 0.5,
        baseline25: 0.25,
        adjusted_balanced: t1 + t3,
        adjusted_type1: t1,
        adjusted_type2: 3.0 * s * c * c,
        adjusted_type3: t3,
        adjusted_type4: s * s * s,
    })
}

/// Baselines at the network's own negative-edge fraction.
pub fn network_baselines(adj: &SignedAdjacency) -> Result<Baselines, InferenceError> {
    let summary = summarize(adj)?;
    baselines(summary.negative_fraction.unwrap_or(0.0))
}

/// Moments, projections and variance of one target on one network.
#[derive(Clone, Debug)]
pub struct TargetAnalysis {
    pub target: Target,
    pub moments: Moments,
    pub projections: Projections,
    pub variance: VarianceEstimate,
}

impl TargetAnalysis {
    pub fn new(profile: &TriangleProfile, target: Target) -> Result<Self, InferenceError> {
        let moments = sample_moments(&profile.census)?;
        let projections = projections(&profile.census, &profile.nodes, &profile.pairs, target)?;
        let variance = variance_estimator(&projections)?;
        Ok(TargetAnalysis {
            target,
            moments,
            projections,
            variance,
        })
    }

    pub fn from_network(adj: &SignedAdjacency, target: Target) -> Result<Self, InferenceError> {
        Self::new(&triangle_profile(adj), target)
    }

    pub fn n(&self) -> usize {
        self.moments.n
    }

    pub fn estimate(&self) -> f64 {
        self.moments.estimate(self.target)
    }

    pub fn s_hat(&self) -> f64 {
        self.variance.s_hat
    }

    pub fn coefficients(&self, c_delta: f64) -> Result<EdgeworthCoefficients, InferenceError> {
        edgeworth_coefficients(&self.projections, c_delta)
    }

    /// `(estimate - value) / S_hat`.
    pub fn studentize(&self, value: f64) -> f64 {
        (self.estimate() - value) / self.s_hat()
    }

    /// Interval from Cornish-Fisher quantiles of `coef`.
    pub fn interval(
        &self,
        coef: &EdgeworthCoefficients,
        level: f64,
        delta: f64,
    ) -> Result<(f64, f64), InferenceError> {
        check_level(level)?;
        let alpha = 1.0 - level;
        let hi = cornish_fisher_quantile(1.0 - alpha / 2.0, coef, delta)?;
        let lo = cornish_fisher_quantile(alpha / 2.0, coef, delta)?;
        let r = self.estimate();
        let s = self.s_hat();
        Ok((r - hi * s, r - lo * s))
    }
}

pub(crate) fn check_level(level: f64) -> Result<(), InferenceError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(InferenceError::InvalidLevel(level))
    }
}

/// Perturbation draw `sqrt(c_delta log(n) / n) Z`; zero when `c_delta = 0`.
pub fn delta_draw(coef: &EdgeworthCoefficients, seed: u64) -> f64 {
    if coef.delta_variance <= 0.0 {
        return 0.0;
    }
    let mut rng = StreamRng::stream(seed, DELTA_STREAM);
    let z: f64 = StandardNormal.sample(&mut rng);
    coef.delta_variance.sqrt() * z
}

/// p-value of the studentized statistic under `cdf`.
pub fn p_value(statistic: f64, alternative: Alternative, cdf: impl Fn(f64) -> f64) -> f64 {
    let lower = cdf(statistic).clamp(0.0, 1.0);
    let upper = 1.0 - lower;
    match alternative {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * lower.min(upper)).clamp(0.0, 1.0),
    }
}

#[derive(Clone, Debug)]
pub struct CiOptions {
    pub level: f64,
    pub target: Target,
    pub method: Method,
    pub c_delta: f64,
    pub seed: u64,
    /// Bootstrap replicate count.
    pub replicates: usize,
}

impl Default for CiOptions {
    fn default() -> Self {
        CiOptions {
            level: 0.95,
            target: Target::Balanced,
            method: Method::Edgeworth,
            c_delta: 0.0,
            seed: 0,
            replicates: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InferenceReport {
    pub target: Target,
    pub n: usize,
    #[serde(rename = "U_hat")]
    pub u_hat: f64,
    #[serde(rename = "V_hat")]
    pub v_hat: f64,
    pub estimate: f64,
    #[serde(rename = "S_hat")]
    pub s_hat: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    pub c_delta: f64,
    pub delta_draw: f64,
    pub level: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub method: Method,
    pub p_values: PValues,
    pub baselines: Baselines,
}

/// p-values against the reference baselines of a target.
///
/// Balanced: one-sided (greater) against 0.5 and the adjusted baseline.
/// Single types: two-sided against the adjusted baseline, and against 0.25 for type 2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PValues {
    pub alternative: Alternative,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline50: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline25: Option<f64>,
    pub adjusted: f64,
}

/// Report for a method whose interval comes from elsewhere (the bootstrap).
pub(crate) fn assemble_report(
    analysis: &TargetAnalysis,
    coef: &EdgeworthCoefficients,
    base: Baselines,
    opts: &CiOptions,
    delta: f64,
    interval: (f64, f64),
    cdf: impl Fn(f64) -> f64,
) -> InferenceReport {
    let target = analysis.target;
    let alternative = Alternative::default_for(target);
    let p = |c: f64| p_value(analysis.studentize(c) + delta, alternative, &cdf);
    let p_values = PValues {
        alternative,
        baseline50: (target == Target::Balanced).then(|| p(base.baseline50)),
        baseline25: (target == Target::Type2).then(|| p(base.baseline25)),
        adjusted: p(base.adjusted(target)),
    };
    InferenceReport {
        target,
        n: analysis.n(),
        u_hat: analysis.projections.u_hat,
        v_hat: analysis.projections.v_hat,
        estimate: analysis.estimate(),
        s_hat: analysis.s_hat(),
        a_hat: coef.a_hat,
        b_hat: coef.b_hat,
        c_hat: coef.c_hat,
        c_delta: coef.c_delta,
        delta_draw: delta,
        level: opts.level,
        ci_lower: interval.0,
        ci_upper: interval.1,
        method: opts.method,
        p_values,
        baselines: base,
    }
}

/// Full pipeline from a network to a confidence-interval report.
///
/// The reported coefficients are the empirical ones for every method; the
/// normal method builds its interval and p-values with them set to zero.
pub fn confidence_interval(
    adj: &SignedAdjacency,
    opts: &CiOptions,
) -> Result<InferenceReport, InferenceError> {
    check_level(opts.level)?;
    if opts.method == Method::Bootstrap {
        return crate::bootstrap::bootstrap_ci(adj, opts);
    }
    let analysis = TargetAnalysis::from_network(adj, opts.target)?;
    let coef = analysis.coefficients(opts.c_delta)?;
    let base = network_baselines(adj)?;
    let delta = delta_draw(&coef, opts.seed);
    let used = match opts.method {
        Method::Edgeworth => coef,
        _ => EdgeworthCoefficients {
            delta_variance: coef.delta_variance,
            c_delta: coef.c_delta,
            ..EdgeworthCoefficients::normal(coef.n)
        },
    };
    let interval = analysis.interval(&used, opts.level, delta)?;
    Ok(assemble_report(
        &analysis,
        &coef,
        base,
        opts,
        delta,
        interval,
        |x| edgeworth_cdf(x, &used),
    ))
}

/// Null value of a test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NullValue {
    /// Sign-shuffling baseline at the network's negative fraction.
    Adjusted,
    Value(f64),
}

impl FromStr for NullValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "adjusted" {
            return Ok(NullValue::Adjusted);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(NullValue::Value(v)),
            _ => Err(format!("null must be 'adjusted' or a number, got {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TestOptions {
    pub target: Target,
    pub null: NullValue,
    pub alternative: Alternative,
    pub method: Method,
    pub c_delta: f64,
    pub seed: u64,
}

impl Default for TestOptions {
    fn default() -> Self {
        TestOptions {
            target: Target::Balanced,
            null: NullValue::Value(0.5),
            alternative: Alternative::Greater,
            method: Method::Edgeworth,
            c_delta: 0.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestReport {
    pub target: Target,
    pub n: usize,
    pub null: String,
    pub null_value: f64,
    pub alternative: Alternative,
    pub method: Method,
    pub estimate: f64,
    #[serde(rename = "S_hat")]
    pub s_hat: f64,
    pub statistic: f64,
    pub delta_draw: f64,
    pub p_value: f64,
}

pub fn balance_test(
    adj: &SignedAdjacency,
    opts: &TestOptions,
) -> Result<TestReport, InferenceError> {
    let analysis = TargetAnalysis::from_network(adj, opts.target)?;
    let (null, null_value) = match opts.null {
        NullValue::Adjusted => (
            "adjusted".to_string(),
            network_baselines(adj)?.adjusted(opts.target),
        ),
        NullValue::Value(v) if v.is_finite() => ("value".to_string(), v),
        NullValue::Value(v) => return Err(InferenceError::InvalidNull(v)),
    };
    let coef = match opts.method {
        Method::Edgeworth => analysis.coefficients(opts.c_delta)?,
        Method::Normal => EdgeworthCoefficients {
            c_delta: opts.c_delta,
            delta_variance: analysis.coefficients(opts.c_delta)?.delta_variance,
            ..EdgeworthCoefficients::normal(analysis.n())
        },
        Method::Bootstrap => return Err(InferenceError::UnsupportedMethod(Method::Bootstrap)),
    };
    let delta = delta_draw(&coef, opts.seed);
    let statistic = analysis.studentize(null_value) + delta;
    Ok(TestReport {
        target: opts.target,
        n: analysis.n(),
        null,
        null_value,
        alternative: opts.alternative,
        method: opts.method,
        estimate: analysis.estimate(),
        s_hat: analysis.s_hat(),
        statistic,
        delta_draw: delta,
        p_value: p_value(statistic, opts.alternative, |x| edgeworth_cdf(x, &coef)),
    })
}
