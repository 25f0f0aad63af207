//! Node-resampling bootstrap of the studentized balance ratio.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::{triangle_profile, Target};
use crate::graph::{Sign, SignedAdjacency};
use crate::inference::{
    assemble_report, check_level, network_baselines, CiOptions, InferenceError, InferenceReport,
    TargetAnalysis,
};
use crate::rng::{mix, StreamRng};

/// Smallest replicate count accepted by [`bootstrap_distribution`].
pub const MIN_REPLICATES: usize = 100;

/// An observed network viewed as the graphon it induces on its own nodes.
#[derive(Clone, Copy, Debug)]
pub struct EmpiricalGraphon<'a> {
    pub source: &'a SignedAdjacency,
}

impl<'a> EmpiricalGraphon<'a> {
    pub fn new(source: &'a SignedAdjacency) -> Self {
        EmpiricalGraphon { source }
    }

    /// Draws `n` node indices uniformly with replacement.
    pub fn draw_indices(&self, seed: u64) -> Vec<usize> {
        let n = self.source.n();
        let mut rng = StreamRng::new(seed);
        (0..n).map(|_| rng.index(n)).collect()
    }
}

/// Network on positions `0..idx.len()` with entry `(a, b) = A[idx[a]][idx[b]]`,
/// and zero where `idx[a] == idx[b]`.
pub fn resample_with_indices(adj: &SignedAdjacency, idx: &[usize]) -> SignedAdjacency {
    let mut copies: Vec<Vec<u32>> = vec![Vec::new(); adj.n()];
    for (a, &u) in idx.iter().enumerate() {
        copies[u].push(a as u32);
    }
    let mut edges = Vec::new();
    for (a, &u) in idx.iter().enumerate() {
        for (v, s) in adj.neighbors(u) {
            for &b in &copies[v] {
                if (b as usize) > a {
                    edges.push((a, b as usize, Sign::from_value(s).expect("stored sign")));
                }
            }
        }
    }
    SignedAdjacency::from_edges(idx.len(), edges).expect("resampled edges are valid")
}

pub fn resample_network(egraphon: &EmpiricalGraphon<'_>, seed: u64) -> SignedAdjacency {
    resample_with_indices(egraphon.source, &egraphon.draw_indices(seed))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapDistribution {
    pub target: Target,
    pub replicates: usize,
    pub seed: u64,
    pub estimate: f64,
    pub s_hat: f64,
    /// Studentized statistics of the non-degenerate replicates, in replicate order.
    pub draws: Vec<f64>,
    pub degenerate: usize,
}

impl BootstrapDistribution {
    /// Sorted copy of the draws.
    pub fn sorted(&self) -> Vec<f64> {
        let mut d = self.draws.clone();
        d.sort_by(f64::total_cmp);
        d
    }

    /// Linear-interpolation quantile of the draws.
    pub fn quantile(&self, p: f64) -> f64 {
        quantile_sorted(&self.sorted(), p)
    }

    /// Empirical CDF of the draws.
    pub fn cdf(&self, x: f64) -> f64 {
        ecdf_sorted(&self.sorted(), x)
    }

    /// One draw per line under a `draw` header.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["draw"])?;
        for d in &self.draws {
            w.write_record([format!("{d:.17e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Quantile of sorted data with linear interpolation between order statistics.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Fraction of sorted data at or below `x`.
pub fn ecdf_sorted(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&d| d <= x) as f64 / sorted.len() as f64
}

pub fn bootstrap_distribution(
    adj: &SignedAdjacency,
    target: Target,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapDistribution, InferenceError> {
    let observed = TargetAnalysis::from_network(adj, target)?;
    bootstrap_from_analysis(adj, &observed, replicates, seed)
}

pub(crate) fn bootstrap_from_analysis(
    adj: &SignedAdjacency,
    observed: &TargetAnalysis,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapDistribution, InferenceError> {
    if replicates < MIN_REPLICATES {
        return Err(InferenceError::TooFewReplicates {
            got: replicates,
            min: MIN_REPLICATES,
        });
    }
    let target = observed.target;
    let estimate = observed.estimate();
    let egraphon = EmpiricalGraphon::new(adj);
    let results: Vec<Option<f64>> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let star = resample_network(&egraphon, mix(seed, r));
            match TargetAnalysis::new(&triangle_profile(&star), target) {
                Ok(a) => Some((a.estimate() - estimate) / a.s_hat()),
                Err(e) if e.is_degenerate() => None,
                Err(e) => panic!("unexpected bootstrap failure: {e}"),
            }
        })
        .collect();
    let draws: Vec<f64> = results.iter().flatten().copied().collect();
    let degenerate = replicates - draws.len();
    if draws.is_empty() || 2 * degenerate > replicates {
        return Err(InferenceError::TooManyDegenerate {
            degenerate,
            total: replicates,
        });
    }
    Ok(BootstrapDistribution {
        target,
        replicates,
        seed,
        estimate,
        s_hat: observed.s_hat(),
        draws,
        degenerate,
    })
}

/// Studentized percentile interval `(r - t*_{1-a/2} S, r - t*_{a/2} S)`.
pub fn interval_from_draws(dist: &BootstrapDistribution, level: f64) -> (f64, f64) {
    let sorted = dist.sorted();
    let alpha = 1.0 - level;
    let hi = quantile_sorted(&sorted, 1.0 - alpha / 2.0);
    let lo = quantile_sorted(&sorted, alpha / 2.0);
    (
        dist.estimate - hi * dist.s_hat,
        dist.estimate - lo * dist.s_hat,
    )
}

pub fn bootstrap_ci(
    adj: &SignedAdjacency,
    opts: &CiOptions,
) -> Result<InferenceReport, InferenceError> {
    check_level(opts.level)?;
    let analysis = TargetAnalysis::from_network(adj, opts.target)?;
    let coef = analysis.coefficients(0.0)?;
    let base = network_baselines(adj)?;
    let dist = bootstrap_from_analysis(adj, &analysis, opts.replicates, opts.seed)?;
    let interval = interval_from_draws(&dist, opts.level);
    let sorted = dist.sorted();
    let opts = CiOptions {
        method: crate::inference::Method::Bootstrap,
        c_delta: 0.0,
        ..opts.clone()
    };
    Ok(assemble_report(
        &analysis,
        &coef,
        base,
        &opts,
        0.0,
        interval,
        |x| ecdf_sorted(&sorted, x),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphError;

    fn sample() -> SignedAdjacency {
        SignedAdjacency::from_rows(&[
            vec![0, 1, 1, -1, 0],
            vec![1, 0, 1, 1, 1],
            vec![1, 1, 0, -1, 1],
            vec![-1, 1, -1, 0, -1],
            vec![0, 1, 1, -1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn identity_resample_is_original() {
        let adj = sample();
        let idx: Vec<usize> = (0..adj.n()).collect();
        assert_eq!(resample_with_indices(&adj, &idx), adj);
    }

    #[test]
    fn all_equal_indices_give_empty_graph() {
        let adj = sample();
        let out = resample_with_indices(&adj, &[2, 2, 2]);
        assert_eq!(out.n(), 3);
        assert_eq!(out.edge_count(), 0);
    }

    #[test]
    fn duplicates_copy_rows() {
        let adj = sample();
        let out = resample_with_indices(&adj, &[0, 0, 1, 3, 3]);
        assert_eq!(out.sign(0, 1), 0);
        assert_eq!(out.sign(3, 4), 0);
        assert_eq!(out.sign(0, 2), 1);
        assert_eq!(out.sign(1, 2), 1);
        assert_eq!(out.sign(0, 3), -1);
        assert_eq!(out.sign(2, 4), 1);
        let validated: Result<(), GraphError> = out.validate();
        assert!(validated.is_ok());
    }

    #[test]
    fn quantiles_interpolate() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&s, 0.0), 1.0);
        assert_eq!(quantile_sorted(&s, 1.0), 4.0);
        assert_eq!(quantile_sorted(&s, 0.5), 2.5);
        assert_eq!(ecdf_sorted(&s, 2.0), 0.5);
        assert_eq!(ecdf_sorted(&s, 0.0), 0.0);
    }

    #[test]
    fn symmetric_draws_give_symmetric_interval() {
        let dist = BootstrapDistribution {
            target: Target::Balanced,
            replicates: 4,
            seed: 0,
            estimate: 0.7,
            s_hat: 0.1,
            draws: vec![-2.0, -1.0, 1.0, 2.0],
            degenerate: 0,
        };
        let (lo, hi) = interval_from_draws(&dist, 0.9);
        assert!(((0.7 - lo) - (hi - 0.7)).abs() < 1e-15);
    }

    #[test]
    fn too_few_replicates() {
        assert!(matches!(
            bootstrap_distribution(&sample(), Target::Balanced, 10, 0),
            Err(InferenceError::TooFewReplicates { .. })
        ));
    }
}
