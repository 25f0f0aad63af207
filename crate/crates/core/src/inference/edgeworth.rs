//! Empirical Edgeworth expansion for the studentized balance ratio.

use serde::Serialize;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use super::projections::Projections;
use super::InferenceError;

fn standard_normal() -> Normal {
    Normal::standard()
}

pub fn normal_cdf(x: f64) -> f64 {
    standard_normal().cdf(x)
}

pub fn normal_pdf(x: f64) -> f64 {
    standard_normal().pdf(x)
}

/// Standard normal quantile; `p` must lie in (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    standard_normal().inverse_cdf(p)
}

/// Coefficients of the one-term expansion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeworthCoefficients {
    pub n: usize,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    pub c_delta: f64,
    /// Variance of the smoothing perturbation, `c_delta log(n) / n`.
    pub delta_variance: f64,
}

impl EdgeworthCoefficients {
    /// Coefficients that reduce the expansion to the normal limit.
    pub fn normal(n: usize) -> Self {
        EdgeworthCoefficients {
            n,
            a_hat: 0.0,
            b_hat: 0.0,
            c_hat: 0.0,
            c_delta: 0.0,
            delta_variance: 0.0,
        }
    }

    /// `a(x^2/3 + 1/6) + b(x^2 + 1) - 3 c x^2`.
    pub fn polynomial(&self, x: f64) -> f64 {
        let x2 = x * x;
        self.a_hat * (x2 / 3.0 + 1.0 / 6.0) + self.b_hat * (x2 + 1.0) - 3.0 * self.c_hat * x2
    }
}

/// Third-order coefficients from the projections.
///
/// `b_hat` uses `sum_{i<j} q1_i q1_j q2_ij = sum_edges q1_i q1_j e_ij - sum_{i<j} q1_i q1_j (q1_i + q1_j)`,
/// where the last sum equals `(sum q1^2)(sum q1) - sum q1^3`.
pub fn edgeworth_coefficients(
    p: &Projections,
    c_delta: f64,
) -> Result<EdgeworthCoefficients, InferenceError> {
    if !(c_delta >= 0.0 && c_delta.is_finite()) {
        return Err(InferenceError::InvalidCDelta(c_delta));
    }
    if p.degenerate || p.xi1_sq <= 0.0 {
        return Err(InferenceError::DegenerateVariance);
    }
    let nf = p.n as f64;
    let xi = p.xi1_sq.sqrt();
    let xi3 = xi * xi * xi;
    let q = &p.q1;

    let (s1, s2, s3) = q.iter().fold((0.0, 0.0, 0.0), |(a, b, c), &x| {
        (a + x, b + x * x, c + x * x * x)
    });
    let edge_sum: f64 = p.q2.edges().map(|(i, j, e)| q[i] * q[j] * e).sum();
    let pair_sum = edge_sum - (s2 * s1 - s3);

    let a_hat = s3 / nf / xi3;
    let b_hat = pair_sum / (nf * (nf - 1.0) / 2.0) / xi3;
    let c_hat = q.iter().zip(&p.p1).map(|(a, b)| a * b).sum::<f64>() / nf / xi;
    Ok(EdgeworthCoefficients {
        n: p.n,
        a_hat,
        b_hat,
        c_hat,
        c_delta,
        delta_variance: c_delta * nf.ln() / nf,
    })
}

/// `G(x) = Phi(x) + phi(x) poly(x) / sqrt(n)`, clamped to [0, 1].
pub fn edgeworth_cdf(x: f64, coef: &EdgeworthCoefficients) -> f64 {
    if !x.is_finite() {
        return normal_cdf(x);
    }
    let g = normal_cdf(x) + normal_pdf(x) * coef.polynomial(x) / (coef.n as f64).sqrt();
    g.clamp(0.0, 1.0)
}

/// Cornish-Fisher quantile `z_alpha - poly(z_alpha)/sqrt(n) - delta`.
pub fn cornish_fisher_quantile(
    alpha: f64,
    coef: &EdgeworthCoefficients,
    delta: f64,
) -> Result<f64, InferenceError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(InferenceError::InvalidAlpha(alpha));
    }
    let z = normal_quantile(alpha);
    Ok(z - coef.polynomial(z) / (coef.n as f64).sqrt() - delta)
}
