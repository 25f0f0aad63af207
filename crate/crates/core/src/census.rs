//! Triangle motif census by sign type.
//!
//! With `P` and `N` the positive and negative indicator matrices, every count
//! is a trace or an edge-gated entry of the products `PP`, `PN`, `NP`, `NN`:
//! e.g. `c1 = tr(P^3)/6 = sum_{i<j} P_ij (PP)_ij / 3`. The engine evaluates
//! those product entries only on the edge support, exactly, in integer
//! arithmetic: as popcounts of packed bit rows for densely stored graphs, and
//! as sorted neighbor-list intersections otherwise.
//!
//! Triangle types follow the number of negative edges: type 1 has none,
//! type 2 one, type 3 two, type 4 three. Types 1 and 3 are balanced.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{SignMatrices, SignedAdjacency};

/// Largest graph accepted by [`brute_force_census`] by default.
pub const DEFAULT_ORACLE_CAP: usize = 64;

#[derive(Error, Debug)]
pub enum CensusError {
    #[error("brute-force census is capped at n = {cap}, got n = {n}")]
    OracleCap { n: usize, cap: usize },
}

/// What is being counted: balanced triangles, or one triangle type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Balanced,
    Type1,
    Type2,
    Type3,
    Type4,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Balanced,
        Target::Type1,
        Target::Type2,
        Target::Type3,
        Target::Type4,
    ];

    /// Zero-based type index, `None` for [`Target::Balanced`].
    pub fn type_index(self) -> Option<usize> {
        match self {
            Target::Balanced => None,
            Target::Type1 => Some(0),
            Target::Type2 => Some(1),
            Target::Type3 => Some(2),
            Target::Type4 => Some(3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::Balanced => "balanced",
            Target::Type1 => "type1",
            Target::Type2 => "type2",
            Target::Type3 => "type3",
            Target::Type4 => "type4",
        }
    }

    /// Picks the target's count out of per-type counts.
    #[inline]
    pub fn select(self, by_type: [u64; 4]) -> u64 {
        match self.type_index() {
            None => by_type[0] + by_type[2],
            Some(t) => by_type[t],
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "balanced" => Ok(Target::Balanced),
            "type1" => Ok(Target::Type1),
            "type2" => Ok(Target::Type2),
            "type3" => Ok(Target::Type3),
            "type4" => Ok(Target::Type4),
            _ => Err(format!(
                "unknown target {s:?} (expected balanced or type1..type4)"
            )),
        }
    }
}

/// Type of a triangle with `negatives` negative edges (0..=3), as a zero-based index.
#[inline]
pub fn type_of(negatives: usize) -> usize {
    negatives
}

/// Whole-graph triangle counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriangleCensus {
    pub n: usize,
    pub total: u64,
    /// Counts of types 1..4 (0..3 negative edges).
    pub by_type: [u64; 4],
    /// `by_type[0] + by_type[2]`.
    pub balanced: u64,
}

impl TriangleCensus {
    pub fn count(&self, target: Target) -> u64 {
        target.select(self.by_type)
    }
}

/// Per-node triangle counts (each triangle counted at each of its three nodes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeProjection {
    pub total: Vec<u64>,
    pub balanced: Vec<u64>,
    pub by_type: Vec<[u64; 4]>,
}

impl NodeProjection {
    pub fn n(&self) -> usize {
        self.total.len()
    }

    pub fn count(&self, i: usize, target: Target) -> u64 {
        target.select(self.by_type[i])
    }

    pub fn counts(&self, target: Target) -> Vec<u64> {
        self.by_type.iter().map(|&c| target.select(c)).collect()
    }
}

/// Per-pair counts over third nodes: entry `(i, j)` counts the `k` such that
/// `{i, j, k}` is a triangle of each type.
///
/// Entries vanish off the edge support, so only edges are stored (compressed
/// rows over `j > i`); [`PairProjection::dense`] materializes the full
/// symmetric array on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProjection {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    counts: Vec<[u32; 4]>,
}

impl PairProjection {
    pub fn n(&self) -> usize {
        self.n
    }

    /// CSR row offsets and column indices of the stored pairs.
    pub(crate) fn layout(&self) -> (&[usize], &[u32]) {
        (&self.offsets, &self.cols)
    }

    /// Number of stored (edge) pairs.
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return None;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let row = &self.cols[self.offsets[a]..self.offsets[a + 1]];
        row.binary_search(&(b as u32))
            .ok()
            .map(|p| self.offsets[a] + p)
    }

    /// Per-type counts for the pair `(i, j)`.
    pub fn by_type(&self, i: usize, j: usize) -> [u64; 4] {
        self.position(i, j)
            .map(|p| self.counts[p].map(u64::from))
            .unwrap_or([0; 4])
    }

    pub fn triangles(&self, i: usize, j: usize) -> u64 {
        self.by_type(i, j).iter().sum()
    }

    pub fn count(&self, i: usize, j: usize, target: Target) -> u64 {
        target.select(self.by_type(i, j))
    }

    /// Stored pairs `(i, j, per-type counts)` with `i < j`, in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, [u64; 4])> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.offsets[i]..self.offsets[i + 1])
                .map(move |p| (i, self.cols[p] as usize, self.counts[p].map(u64::from)))
        })
    }

    /// Full symmetric `n x n` array of per-type counts (row-major).
    pub fn dense(&self) -> Vec<[u64; 4]> {
        let mut out = vec![[0u64; 4]; self.n * self.n];
        for (i, j, c) in self.iter() {
            out[i * self.n + j] = c;
            out[j * self.n + i] = c;
        }
        out
    }
}

/// Census, node projection and pair projection from one pass over the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleProfile {
    pub census: TriangleCensus,
    pub nodes: NodeProjection,
    pub pairs: PairProjection,
}

/// How the edge-gated product entries are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Follow the adjacency storage: bit rows when dense, list intersection otherwise.
    Auto,
    /// Popcounts over packed rows of `P` and `N`.
    BitRows,
    /// Merge of sorted signed neighbor lists.
    Intersection,
}

#[inline]
fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Maps the four sign patterns of the third node (`++`, `+-`, `-+`, `--`
/// relative to `i` and `j`) and the sign of `(i, j)` to per-type counts.
#[inline]
fn classify(sign: i8, pp: u32, pn: u32, np: u32, nn: u32) -> [u32; 4] {
    if sign > 0 {
        [pp, pn + np, nn, 0]
    } else {
        [0, pp, pn + np, nn]
    }
}

fn rows_bitset(adj: &SignedAdjacency) -> Vec<Vec<(u32, [u32; 4])>> {
    let m = SignMatrices::from_adjacency(adj);
    (0..adj.n())
        .into_par_iter()
        .map(|i| {
            let (pi, ni) = (m.pos_row(i), m.neg_row(i));
            adj.neighbors(i)
                .filter(|&(j, _)| j > i)
                .map(|(j, s)| {
                    let (pj, nj) = (m.pos_row(j), m.neg_row(j));
                    let counts = classify(
                        s,
                        popcount_and(pi, pj),
                        popcount_and(pi, nj),
                        popcount_and(ni, pj),
                        popcount_and(ni, nj),
                    );
                    (j as u32, counts)
                })
                .collect()
        })
        .collect()
}

fn rows_intersection(adj: &SignedAdjacency) -> Vec<Vec<(u32, [u32; 4])>> {
    let lists: Vec<Vec<(usize, i8)>> = (0..adj.n()).map(|i| adj.neighbors(i).collect()).collect();
    (0..adj.n())
        .into_par_iter()
        .map(|i| {
            let li = &lists[i];
            li.iter()
                .filter(|&&(j, _)| j > i)
                .map(|&(j, s)| {
                    let lj = &lists[j];
                    let mut q = [0u32; 4]; // pp, pn, np, nn
                    let (mut a, mut b) = (0, 0);
                    while a < li.len() && b < lj.len() {
                        match li[a].0.cmp(&lj[b].0) {
                            std::cmp::Ordering::Less => a += 1,
                            std::cmp::Ordering::Greater => b += 1,
                            std::cmp::Ordering::Equal => {
                                let idx = usize::from(li[a].1 < 0) * 2 + usize::from(lj[b].1 < 0);
                                q[idx] += 1;
                                a += 1;
                                b += 1;
                            }
                        }
                    }
                    (j as u32, classify(s, q[0], q[1], q[2], q[3]))
                })
                .collect()
        })
        .collect()
}

/// Per-pair counts with an explicit engine choice.
pub fn pair_projection_with(adj: &SignedAdjacency, engine: Engine) -> PairProjection {
    let rows = match engine {
        Engine::BitRows => rows_bitset(adj),
        Engine::Intersection => rows_intersection(adj),
        Engine::Auto if adj.is_dense() => rows_bitset(adj),
        Engine::Auto => rows_intersection(adj),
    };
    let n = adj.n();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let total: usize = rows.iter().map(Vec::len).sum();
    let mut cols = Vec::with_capacity(total);
    let mut counts = Vec::with_capacity(total);
    for row in rows {
        for (j, c) in row {
            cols.push(j);
            counts.push(c);
        }
        offsets.push(cols.len());
    }
    PairProjection {
        n,
        offsets,
        cols,
        counts,
    }
}

pub fn pair_projection(adj: &SignedAdjacency) -> PairProjection {
    pair_projection_with(adj, Engine::Auto)
}

fn profile_from_pairs(pairs: PairProjection) -> TriangleProfile {
    let n = pairs.n();
    let mut by_type = vec![[0u64; 4]; n];
    let mut sums = [0u64; 4];
    for (i, j, c) in pairs.iter() {
        for t in 0..4 {
            by_type[i][t] += c[t];
            by_type[j][t] += c[t];
            sums[t] += c[t];
        }
    }
    // Each triangle is seen from both of its edges at a node, and from all three edges overall.
    for c in by_type.iter_mut() {
        for v in c.iter_mut() {
            debug_assert_eq!(*v % 2, 0);
            *v /= 2;
        }
    }
    let census_types = sums.map(|s| {
        debug_assert_eq!(s % 3, 0);
        s / 3
    });
    let nodes = NodeProjection {
        total: by_type.iter().map(|c| c.iter().sum()).collect(),
        balanced: by_type.iter().map(|c| c[0] + c[2]).collect(),
        by_type,
    };
    TriangleProfile {
        census: TriangleCensus {
            n,
            total: census_types.iter().sum(),
            by_type: census_types,
            balanced: census_types[0] + census_types[2],
        },
        nodes,
        pairs,
    }
}

/// Census together with node and pair projections.
pub fn triangle_profile(adj: &SignedAdjacency) -> TriangleProfile {
    profile_from_pairs(pair_projection(adj))
}

pub fn triangle_profile_with(adj: &SignedAdjacency, engine: Engine) -> TriangleProfile {
    profile_from_pairs(pair_projection_with(adj, engine))
}

pub fn census(adj: &SignedAdjacency) -> TriangleCensus {
    triangle_profile(adj).census
}

pub fn node_projection(adj: &SignedAdjacency) -> NodeProjection {
    triangle_profile(adj).nodes
}

/// Exhaustive-enumeration counts, used as the reference for the matrix path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceCensus {
    pub census: TriangleCensus,
    pub nodes: NodeProjection,
    /// Row-major `n x n` per-type pair counts.
    pub pairs: Vec<[u64; 4]>,
}

/// `O(n^3)` loop over all triples, classifying each triangle by its signs.
pub fn brute_force_census(adj: &SignedAdjacency) -> Result<BruteForceCensus, CensusError> {
    brute_force_census_capped(adj, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_census_capped(
    adj: &SignedAdjacency,
    cap: usize,
) -> Result<BruteForceCensus, CensusError> {
    let n = adj.n();
    if n > cap {
        return Err(CensusError::OracleCap { n, cap });
    }
    let a = adj.to_dense();
    let at = |i: usize, j: usize| a[i * n + j];
    let mut by_type = [0u64; 4];
    let mut balanced = 0u64;
    let mut nodes = vec![[0u64; 4]; n];
    let mut pairs = vec![[0u64; 4]; n * n];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = [at(i, j), at(j, k), at(i, k)];
                if s.contains(&0) {
                    continue;
                }
                let negatives = s.iter().filter(|&&x| x < 0).count();
                let t = type_of(negatives);
                by_type[t] += 1;
                if s.iter().map(|&x| i64::from(x)).product::<i64>() == 1 {
                    balanced += 1;
                }
                for v in [i, j, k] {
                    nodes[v][t] += 1;
                }
                for (u, v) in [(i, j), (j, k), (i, k)] {
                    pairs[u * n + v][t] += 1;
                    pairs[v * n + u][t] += 1;
                }
            }
        }
    }
    Ok(BruteForceCensus {
        census: TriangleCensus {
            n,
            total: by_type.iter().sum(),
            by_type,
            balanced,
        },
        nodes: NodeProjection {
            total: nodes.iter().map(|c| c.iter().sum()).collect(),
            balanced: nodes.iter().map(|c| c[0] + c[2]).collect(),
            by_type: nodes,
        },
        pairs,
    })
}
