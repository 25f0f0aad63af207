//! Straight-from-definition reference computations over node triples.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use signbal_core::{Sign, SignedAdjacency, Target};

/// Random signed graph with edge probability `density` and negative probability `negative`.
pub fn random_graph(n: usize, density: f64, negative: f64, seed: u64) -> SignedAdjacency {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                let sign = if rng.random::<f64>() < negative {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                edges.push((i, j, sign));
            }
        }
    }
    SignedAdjacency::from_edges(n, edges).unwrap()
}

/// The suite of small graphs: n = 3..=12 over density and sign grids, four seeds each.
pub fn small_suite() -> Vec<SignedAdjacency> {
    let mut out = Vec::new();
    let mut seed = 1u64;
    for n in 3..=12 {
        for &density in &[0.1, 0.4, 0.7, 1.0] {
            for &negative in &[0.0, 0.3, 0.7, 1.0] {
                for _ in 0..4 {
                    out.push(random_graph(n, density, negative, seed));
                    seed += 1;
                }
            }
        }
    }
    out
}

pub fn matrix(adj: &SignedAdjacency) -> Vec<Vec<i8>> {
    let n = adj.n();
    (0..n)
        .map(|i| (0..n).map(|j| adj.sign(i, j)).collect())
        .collect()
}

/// Triangle type index (0..4) of `{i, j, k}`, or `None` when not a triangle.
pub fn triangle_type(a: &[Vec<i8>], i: usize, j: usize, k: usize) -> Option<usize> {
    let e = [a[i][j], a[j][k], a[i][k]];
    if e.contains(&0) {
        return None;
    }
    Some(e.iter().filter(|&&s| s < 0).count())
}

fn indicator(a: &[Vec<i8>], i: usize, j: usize, k: usize, target: Target) -> (f64, f64) {
    match triangle_type(a, i, j, k) {
        None => (0.0, 0.0),
        Some(t) => {
            let hit = match target {
                Target::Balanced => t == 0 || t == 2,
                Target::Type1 => t == 0,
                Target::Type2 => t == 1,
                Target::Type3 => t == 2,
                Target::Type4 => t == 3,
            };
            (if hit { 1.0 } else { 0.0 }, 1.0)
        }
    }
}

/// Exhaustive census: totals by type, per-node counts by type, per-pair counts by type.
pub struct Enumeration {
    pub by_type: [u64; 4],
    pub nodes: Vec<[u64; 4]>,
    pub pairs: Vec<Vec<[u64; 4]>>,
}

pub fn enumerate(adj: &SignedAdjacency) -> Enumeration {
    let a = matrix(adj);
    let n = adj.n();
    let mut e = Enumeration {
        by_type: [0; 4],
        nodes: vec![[0; 4]; n],
        pairs: vec![vec![[0; 4]; n]; n],
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(t) = triangle_type(&a, i, j, k) {
                    e.by_type[t] += 1;
                    for v in [i, j, k] {
                        e.nodes[v][t] += 1;
                    }
                    for (u, v) in [(i, j), (j, k), (i, k)] {
                        e.pairs[u][v][t] += 1;
                        e.pairs[v][u][t] += 1;
                    }
                }
            }
        }
    }
    e
}

/// Every inference quantity computed from its definition.
#[derive(Debug)]
pub struct Reference {
    pub u: f64,
    pub v: f64,
    pub g1: Vec<f64>,
    pub f1: Vec<f64>,
    pub q1: Vec<f64>,
    pub p1: Vec<f64>,
    pub q2: Vec<Vec<f64>>,
    pub s_hat: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `None` when there are no triangles.
pub fn reference(adj: &SignedAdjacency, target: Target) -> Option<Reference> {
    let a = matrix(adj);
    let n = adj.n();
    let nf = n as f64;
    let triples = nf * (nf - 1.0) * (nf - 2.0) / 6.0;
    let (mut su, mut sv) = (0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (h, t) = indicator(&a, i, j, k, target);
                su += h;
                sv += t;
            }
        }
    }
    if sv == 0.0 {
        return None;
    }
    let u = su / triples;
    let v = sv / triples;

    // conditional means given one node: average over the other two
    let mut g1 = vec![0.0; n];
    let mut f1 = vec![0.0; n];
    for i in 0..n {
        let (mut sh, mut st, mut m) = (0.0, 0.0, 0.0);
        for j in 0..n {
            for k in j + 1..n {
                if j == i || k == i {
                    continue;
                }
                let (h, t) = indicator(&a, i, j, k, target);
                sh += h;
                st += t;
                m += 1.0;
            }
        }
        g1[i] = sh / m - u;
        f1[i] = st / m - v;
    }
    let q1: Vec<f64> = (0..n).map(|i| g1[i] / v - u * f1[i] / (v * v)).collect();
    let p1: Vec<f64> = f1.iter().map(|f| f / v).collect();

    let mut q2 = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (mut sh, mut st) = (0.0, 0.0);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let (h, t) = indicator(&a, i, j, k, target);
                sh += h;
                st += t;
            }
            let g2 = sh / (nf - 2.0) - u - g1[i] - g1[j];
            let f2 = st / (nf - 2.0) - v - f1[i] - f1[j];
            q2[i][j] = g2 / v - u * f2 / (v * v);
        }
    }

    let xi2 = q1.iter().map(|q| q * q).sum::<f64>() / nf;
    let xi = xi2.sqrt();
    let a_coef = q1.iter().map(|q| q * q * q).sum::<f64>() / nf / xi.powi(3);
    let mut pair_sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            pair_sum += q1[i] * q1[j] * q2[i][j];
        }
    }
    let b_coef = 2.0 * pair_sum / (nf * (nf - 1.0)) / xi.powi(3);
    let c_coef = q1.iter().zip(&p1).map(|(q, p)| q * p).sum::<f64>() / nf / xi;
    Some(Reference {
        u,
        v,
        g1,
        f1,
        q1,
        p1,
        q2,
        s_hat: (9.0 * xi2 / nf).sqrt(),
        a: a_coef,
        b: b_coef,
        c: c_coef,
    })
}

/// `max |x - y| / max(|y|_inf, floor)`.
pub fn rel_err(x: &[f64], y: &[f64], floor: f64) -> f64 {
    assert_eq!(x.len(), y.len());
    let scale = y.iter().fold(floor, |m, v| m.max(v.abs()));
    x.iter()
        .zip(y)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}

/// `|x - y| / max(1, |y|)`.
pub fn scalar_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

/// Compares census, node and pair projections of both engines against enumeration.
pub fn census_mismatch(adj: &SignedAdjacency) -> Option<String> {
    use signbal_core::census::{triangle_profile_with, Engine};
    let e = enumerate(adj);
    let n = adj.n();
    for engine in [Engine::BitRows, Engine::Intersection] {
        let p = triangle_profile_with(adj, engine);
        if p.census.by_type != e.by_type
            || p.census.total != e.by_type.iter().sum::<u64>()
            || p.census.balanced != e.by_type[0] + e.by_type[2]
        {
            return Some(format!(
                "{engine:?} census {:?} vs {:?}",
                p.census.by_type, e.by_type
            ));
        }
        if p.nodes.by_type != e.nodes {
            return Some(format!("{engine:?} node projection differs"));
        }
        let dense = p.pairs.dense();
        for i in 0..n {
            for j in 0..n {
                if dense[i * n + j] != e.pairs[i][j] {
                    return Some(format!("{engine:?} pair ({i},{j}) differs"));
                }
            }
        }
    }
    None
}

/// Largest discrepancy between the library and [`reference`], or `None` when
/// the library reports a degenerate input (which the reference must confirm).
pub fn inference_discrepancy(adj: &SignedAdjacency, target: Target) -> Result<Option<f64>, String> {
    use signbal_core::inference::{
        edgeworth_coefficients, projections, sample_moments, variance_estimator,
    };
    let profile = signbal_core::triangle_profile(adj);
    let reference = reference(adj, target);
    let moments = sample_moments(&profile.census);
    let (Ok(moments), Some(r)) = (moments, reference.as_ref()) else {
        return match (profile.census.total, reference) {
            (0, None) => Ok(None),
            _ => Err("triangle detection disagrees".into()),
        };
    };
    let p = projections(&profile.census, &profile.nodes, &profile.pairs, target)
        .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    worst = worst.max(scalar_err(moments.numerator(target), r.u));
    worst = worst.max(scalar_err(moments.v_hat, r.v));
    worst = worst.max(scalar_err(p.u_hat, r.u));
    worst = worst.max(rel_err(&p.g1, &r.g1, 1.0));
    worst = worst.max(rel_err(&p.f1, &r.f1, 1.0));
    worst = worst.max(rel_err(&p.q1, &r.q1, 1.0));
    worst = worst.max(rel_err(&p.p1, &r.p1, 1.0));
    let q2 = p.q2.dense();
    let flat: Vec<f64> = r.q2.iter().flatten().copied().collect();
    worst = worst.max(rel_err(&q2, &flat, 1.0));
    if p.degenerate {
        if r.q1.iter().any(|q| q.abs() > 1e-12) {
            return Err("library reports zero first-order terms, reference does not".into());
        }
        return Ok(Some(worst));
    }
    let v = variance_estimator(&p).map_err(|e| e.to_string())?;
    worst = worst.max(scalar_err(v.s_hat, r.s_hat));
    let c = edgeworth_coefficients(&p, 0.0).map_err(|e| e.to_string())?;
    worst = worst.max(scalar_err(c.a_hat, r.a));
    worst = worst.max(scalar_err(c.b_hat, r.b));
    worst = worst.max(scalar_err(c.c_hat, r.c));
    Ok(Some(worst))
}
