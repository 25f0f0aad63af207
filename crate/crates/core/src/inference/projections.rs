//! Sample moments, empirical Hoeffding projections and the variance estimator.
//!
//! For a target with per-node counts `b_i` (target triangles at `i`), per-node
//! triangle counts `t_i`, totals `B` and `T`, `K = C(n,3)` and `C = C(n-1,2)`:
//!
//! ```text
//! U = B/K, V = T/K
//! g1(i) = b_i/C - U                 f1(i) = t_i/C - V
//! q1(i) = g1(i)/V - U f1(i)/V^2 = n (T b_i - B t_i) / (3 T^2)
//! p1(i) = f1(i)/V               = n t_i / (3 T) - 1
//! g2(i,j) = pb_ij/(n-2) - U - g1(i) - g1(j)   (f2 likewise with pt_ij, V, f1)
//! q2(i,j) = g2/V - U f2/V^2     = n(n-1)(T pb_ij - B pt_ij)/(6 T^2) - q1(i) - q1(j)
//! ```
//!
//! The closed forms on the right are evaluated with exact integer numerators,
//! so a vanishing `q1` is detected exactly rather than up to rounding.

use serde::Serialize;

use super::InferenceError;
use crate::census::{NodeProjection, PairProjection, Target, TriangleCensus};

/// `C(n, k)` as a float.
pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Triangle frequencies normalized by `C(n, 3)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub n: usize,
    /// Balanced-triangle frequency.
    pub u_hat: f64,
    /// Triangle frequency.
    pub v_hat: f64,
    /// Per-type frequencies.
    pub u_hat_t: [f64; 4],
    /// `u_hat / v_hat`.
    pub ratio: f64,
    /// Per-type proportions among triangles.
    pub ratio_t: [f64; 4],
}

impl Moments {
    /// Numerator frequency for a target.
    pub fn numerator(&self, target: Target) -> f64 {
        match target.type_index() {
            None => self.u_hat,
            Some(t) => self.u_hat_t[t],
        }
    }

    pub fn estimate(&self, target: Target) -> f64 {
        match target.type_index() {
            None => self.ratio,
            Some(t) => self.ratio_t[t],
        }
    }
}

pub fn sample_moments(census: &TriangleCensus) -> Result<Moments, InferenceError> {
    let n = census.n;
    if n < 3 {
        return Err(InferenceError::TooFewNodes { n });
    }
    if census.total == 0 {
        return Err(InferenceError::NoTriangles);
    }
    let k = binom(n, 3);
    let t = census.total as f64;
    Ok(Moments {
        n,
        u_hat: census.balanced as f64 / k,
        v_hat: t / k,
        u_hat_t: census.by_type.map(|c| c as f64 / k),
        ratio: census.balanced as f64 / t,
        ratio_t: census.by_type.map(|c| c as f64 / t),
    })
}

/// Second-order projection `q2(i, j)` for every pair, stored as its edge part
/// plus the first-order terms.
#[derive(Clone, Debug)]
pub struct PairTerms {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    edge_term: Vec<f64>,
    q1: Vec<f64>,
}

impl PairTerms {
    /// `q2(i, j)`; zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.edge_part(i, j) - self.q1[i] - self.q1[j]
    }

    /// The part of `q2(i, j)` carried by third-node counts; zero off the edge support.
    pub fn edge_part(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let row = &self.cols[self.offsets[a]..self.offsets[a + 1]];
        match row.binary_search(&(b as u32)) {
            Ok(p) => self.edge_term[self.offsets[a] + p],
            Err(_) => 0.0,
        }
    }

    /// Edge-support entries `(i, j, edge_part)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.offsets[i]..self.offsets[i + 1])
                .map(move |p| (i, self.cols[p] as usize, self.edge_term[p]))
        })
    }

    /// Full symmetric `n x n` array of `q2` (row-major, zero diagonal).
    pub fn dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out[i * n + j] = -self.q1[i] - self.q1[j];
                }
            }
        }
        for (i, j, e) in self.edges() {
            out[i * n + j] += e;
            out[j * n + i] += e;
        }
        out
    }
}

/// Empirical projections for one target.
#[derive(Clone, Debug)]
pub struct Projections {
    pub target: Target,
    pub n: usize,
    /// Target numerator frequency (balanced or type-t).
    pub u_hat: f64,
    /// Triangle frequency.
    pub v_hat: f64,
    pub g1: Vec<f64>,
    pub f1: Vec<f64>,
    pub q1: Vec<f64>,
    pub p1: Vec<f64>,
    pub q2: PairTerms,
    /// Mean of `q1^2`.
    pub xi1_sq: f64,
    /// True when every `q1(i)` is exactly zero.
    pub degenerate: bool,
    target_counts: Vec<u64>,
    triangle_counts: Vec<u64>,
}

impl Projections {
    /// Per-node target counts `b_i`.
    pub fn target_counts(&self) -> &[u64] {
        &self.target_counts
    }

    /// Per-node triangle counts `t_i`.
    pub fn triangle_counts(&self) -> &[u64] {
        &self.triangle_counts
    }
}

pub fn projections(
    census: &TriangleCensus,
    nodes: &NodeProjection,
    pairs: &PairProjection,
    target: Target,
) -> Result<Projections, InferenceError> {
    let n = census.n;
    if n < 3 {
        return Err(InferenceError::TooFewNodes { n });
    }
    if census.total == 0 {
        return Err(InferenceError::NoTriangles);
    }
    let nf = n as f64;
    let k = binom(n, 3);
    let c = binom(n - 1, 2);
    let big_t = census.total;
    let big_b = census.count(target);
    let (tf, bf) = (big_t as f64, big_b as f64);
    let u_hat = bf / k;
    let v_hat = tf / k;

    let b = nodes.counts(target);
    let t = nodes.total.clone();
    let scale1 = nf / (3.0 * tf * tf);
    let mut degenerate = true;
    let q1: Vec<f64> = b
        .iter()
        .zip(&t)
        .map(|(&bi, &ti)| {
            let num = i128::from(big_t) * i128::from(bi) - i128::from(big_b) * i128::from(ti);
            if num != 0 {
                degenerate = false;
            }
            num as f64 * scale1
        })
        .collect();
    let p1: Vec<f64> = t
        .iter()
        .map(|&ti| nf * ti as f64 / (3.0 * tf) - 1.0)
        .collect();
    let g1: Vec<f64> = b.iter().map(|&bi| bi as f64 / c - u_hat).collect();
    let f1: Vec<f64> = t.iter().map(|&ti| ti as f64 / c - v_hat).collect();

    let scale2 = nf * (nf - 1.0) / (6.0 * tf * tf);
    let (offsets, cols) = pairs.layout();
    let edge_term: Vec<f64> = pairs
        .iter()
        .map(|(_, _, counts)| {
            let pb = target.select(counts);
            let pt: u64 = counts.iter().sum();
            let num = i128::from(big_t) * i128::from(pb) - i128::from(big_b) * i128::from(pt);
            num as f64 * scale2
        })
        .collect();

    let xi1_sq = q1.iter().map(|q| q * q).sum::<f64>() / nf;
    Ok(Projections {
        target,
        n,
        u_hat,
        v_hat,
        g1,
        f1,
        q2: PairTerms {
            n,
            offsets: offsets.to_vec(),
            cols: cols.to_vec(),
            edge_term,
            q1: q1.clone(),
        },
        q1,
        p1,
        xi1_sq,
        degenerate,
        target_counts: b,
        triangle_counts: t,
    })
}

/// `S_hat` together with both evaluations of `n S_hat^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceEstimate {
    pub s_hat: f64,
    /// `9 xi1^2`.
    pub n_s2: f64,
    /// Direct per-node bracket form of `n S_hat^2`.
    pub n_s2_bracket: f64,
}

/// `n S_hat^2` from per-node sums of `h_target/V - U h_triangle/V^2`, normalized by `C(n-1, 2)`.
pub fn bracket_n_s2(p: &Projections) -> (f64, f64) {
    let nf = p.n as f64;
    let c = binom(p.n - 1, 2);
    let (u, v) = (p.u_hat, p.v_hat);
    let mut value = 0.0;
    let mut magnitude = 0.0;
    for (&bi, &ti) in p.target_counts.iter().zip(&p.triangle_counts) {
        let first = bi as f64 / (c * v);
        let second = u * ti as f64 / (c * v * v);
        value += (first - second).powi(2);
        magnitude += (first.abs() + second.abs()).powi(2);
    }
    (9.0 * value / nf, 9.0 * magnitude / nf)
}

/// `S_hat^2 = 9 xi1^2 / n`, cross-checked against the bracket form.
pub fn variance_estimator(p: &Projections) -> Result<VarianceEstimate, InferenceError> {
    if p.degenerate || p.xi1_sq <= 0.0 {
        return Err(InferenceError::DegenerateVariance);
    }
    let n_s2 = 9.0 * p.xi1_sq;
    let (bracket, magnitude) = bracket_n_s2(p);
    assert!(
        (n_s2 - bracket).abs() <= 1e-9 * magnitude.max(n_s2),
        "variance forms disagree: {n_s2} vs {bracket}"
    );
    Ok(VarianceEstimate {
        s_hat: (n_s2 / p.n as f64).sqrt(),
        n_s2,
        n_s2_bracket: bracket,
    })
}
