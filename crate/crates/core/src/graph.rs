//! Signed adjacency matrices: storage, validation, edge-list I/O and summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

/// Node count at or below which adjacency is stored as a dense `n x n` array.
pub const DEFAULT_DENSE_THRESHOLD: usize = 10_000;

#[derive(Error, Debug)]
pub enum GraphError {
    #[error("line {line}: malformed edge line {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: invalid sign token {token:?} (expected +1, -1 or 1)")]
    BadSign { line: usize, token: String },
    #[error("line {line}: self-loop on node {node:?}")]
    SelfLoop { line: usize, node: String },
    #[error("line {line}: pair ({u}, {v}) repeated with a conflicting sign")]
    ConflictingSign { line: usize, u: String, v: String },
    #[error("line {line}: pair ({u}, {v}) repeated")]
    DuplicateEdge { line: usize, u: String, v: String },
    #[error("asymmetric entry: A[{i}][{j}] != A[{j}][{i}]")]
    Asymmetric { i: usize, j: usize },
    #[error("nonzero diagonal entry A[{i}][{i}]")]
    NonzeroDiagonal { i: usize },
    #[error("entry A[{i}][{j}] = {value} is outside {{-1, 0, 1}}")]
    Alphabet { i: usize, j: usize, value: i64 },
    #[error("expected {expected} entries, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("node index {index} out of range for n = {n}")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate node label {0:?}")]
    DuplicateLabel(String),
    #[error("edge proportion is undefined for n = {n} (< 2)")]
    TooFewNodes { n: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Sign of a present edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<i8>),
    Lists(Vec<Vec<(u32, i8)>>),
}

/// Symmetric signed adjacency matrix with zero diagonal and entries in {-1, 0, +1}.
///
/// Instances are always valid: every constructor checks the invariants. Small
/// graphs are stored densely, larger ones as sorted per-node neighbor lists;
/// the choice is invisible through the public API.
#[derive(Clone, Debug)]
pub struct SignedAdjacency {
    n: usize,
    storage: Storage,
    labels: Option<Vec<String>>,
}

/// Checks the adjacency invariants on a row-major `n x n` array.
///
/// Errors name the first violation found, scanning row by row.
pub fn validate(n: usize, entries: &[i64]) -> Result<(), GraphError> {
    if entries.len() != n * n {
        return Err(GraphError::Dimension {
            expected: n * n,
            got: entries.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let v = entries[i * n + j];
            if !(-1..=1).contains(&v) {
                return Err(GraphError::Alphabet { i, j, value: v });
            }
        }
    }
    for i in 0..n {
        if entries[i * n + i] != 0 {
            return Err(GraphError::NonzeroDiagonal { i });
        }
        for j in i + 1..n {
            if entries[i * n + j] != entries[j * n + i] {
                return Err(GraphError::Asymmetric { i, j });
            }
        }
    }
    Ok(())
}

impl SignedAdjacency {
    /// Builds from a row-major `n x n` array after validating it.
    pub fn from_dense(n: usize, entries: &[i64]) -> Result<Self, GraphError> {
        Self::from_dense_with(n, entries, DEFAULT_DENSE_THRESHOLD)
    }

    pub fn from_dense_with(
        n: usize,
        entries: &[i64],
        dense_threshold: usize,
    ) -> Result<Self, GraphError> {
        validate(n, entries)?;
        let edges = (0..n).flat_map(|i| {
            (i + 1..n)
                .filter_map(move |j| Sign::from_value(entries[i * n + j] as i8).map(|s| (i, j, s)))
        });
        Self::from_edges_with(n, edges, dense_threshold)
    }

    /// Builds from a square list of rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(GraphError::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_dense(n, &flat)
    }

    /// Builds from undirected signed edges. Identical repeats are merged; a
    /// pair repeated with both signs is an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        Self::from_edges_with(n, edges, DEFAULT_DENSE_THRESHOLD)
    }

    pub fn from_edges_with<I>(
        n: usize,
        edges: I,
        dense_threshold: usize,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut lists: Vec<Vec<(u32, i8)>> = vec![Vec::new(); n];
        for (u, v, s) in edges {
            for idx in [u, v] {
                if idx >= n {
                    return Err(GraphError::NodeOutOfRange { index: idx, n });
                }
            }
            if u == v {
                return Err(GraphError::NonzeroDiagonal { i: u });
            }
            lists[u].push((v as u32, s.value()));
            lists[v].push((u as u32, s.value()));
        }
        for (i, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
                let j = w[0].0 as usize;
                return Err(GraphError::ConflictingSign {
                    line: 0,
                    u: i.min(j).to_string(),
                    v: i.max(j).to_string(),
                });
            }
        }
        let storage = if n <= dense_threshold {
            let mut dense = vec![0i8; n * n];
            for (i, list) in lists.iter().enumerate() {
                for &(j, s) in list {
                    dense[i * n + j as usize] = s;
                }
            }
            Storage::Dense(dense)
        } else {
            Storage::Lists(lists)
        };
        Ok(SignedAdjacency {
            n,
            storage,
            labels: None,
        })
    }

    /// Attaches node labels (one per node, all distinct).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                expected: self.n,
                got: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of node `i`; unlabeled graphs use zero-padded indices so that
    /// lexicographic and numeric order agree.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => {
                let width = self.n.saturating_sub(1).to_string().len();
                format!("{i:0width$}")
            }
        }
    }

    /// Entry `A[i][j]`.
    pub fn sign(&self, i: usize, j: usize) -> i8 {
        match &self.storage {
            Storage::Dense(d) => d[i * self.n + j],
            Storage::Lists(l) => match l[i].binary_search_by_key(&(j as u32), |&(k, _)| k) {
                Ok(pos) => l[i][pos].1,
                Err(_) => 0,
            },
        }
    }

    /// Neighbors of `i` with edge signs, in increasing index order.
    pub fn neighbors(&self, i: usize) -> Neighbors<'_> {
        match &self.storage {
            Storage::Dense(d) => Neighbors::Dense {
                row: &d[i * self.n..(i + 1) * self.n],
                pos: 0,
            },
            Storage::Lists(l) => Neighbors::List(l[i].iter()),
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        match &self.storage {
            Storage::Dense(_) => self.neighbors(i).count(),
            Storage::Lists(l) => l[i].len(),
        }
    }

    /// Edges `(i, j, sign)` with `i < j`, in lexicographic index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, s)| (i, j, s))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Dense row-major copy of the entries.
    pub fn to_dense(&self) -> Vec<i8> {
        match &self.storage {
            Storage::Dense(d) => d.clone(),
            Storage::Lists(_) => {
                let mut d = vec![0i8; self.n * self.n];
                for (i, j, s) in self.edges() {
                    d[i * self.n + j] = s;
                    d[j * self.n + i] = s;
                }
                d
            }
        }
    }

    /// Re-checks every invariant against the stored data.
    pub fn validate(&self) -> Result<(), GraphError> {
        let d: Vec<i64> = self.to_dense().into_iter().map(i64::from).collect();
        validate(self.n, &d)
    }

    /// Returns a copy with every edge sign negated.
    pub fn flip_signs(&self) -> SignedAdjacency {
        let storage = match &self.storage {
            Storage::Dense(d) => Storage::Dense(d.iter().map(|&v| -v).collect()),
            Storage::Lists(l) => Storage::Lists(
                l.iter()
                    .map(|row| row.iter().map(|&(j, s)| (j, -s)).collect())
                    .collect(),
            ),
        };
        SignedAdjacency {
            n: self.n,
            storage,
            labels: self.labels.clone(),
        }
    }

    /// Relabels nodes: node `i` of `self` becomes node `perm[i]`. Labels move with their nodes.
    pub fn permute(&self, perm: &[usize]) -> Result<SignedAdjacency, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::Dimension {
                expected: self.n,
                got: perm.len(),
            });
        }
        let edges: Vec<_> = self
            .edges()
            .map(|(i, j, s)| (perm[i], perm[j], Sign::from_value(s).expect("nonzero")))
            .collect();
        let threshold = if self.is_dense() { usize::MAX } else { 0 };
        let mut out = SignedAdjacency::from_edges_with(self.n, edges, threshold)?;
        if let Some(labels) = &self.labels {
            let mut moved = vec![String::new(); self.n];
            for (i, l) in labels.iter().enumerate() {
                moved[perm[i]] = l.clone();
            }
            out = out.with_labels(moved)?;
        }
        Ok(out)
    }

    /// Bit-packed positive and negative indicator matrices.
    pub fn sign_matrices(&self) -> SignMatrices {
        SignMatrices::from_adjacency(self)
    }
}

/// Two adjacencies are equal when they have the same nodes, labels and signed edges,
/// whatever their storage.
impl PartialEq for SignedAdjacency {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.labels == other.labels && self.edges().eq(other.edges())
    }
}

impl Eq for SignedAdjacency {}

pub enum Neighbors<'a> {
    Dense { row: &'a [i8], pos: usize },
    List(std::slice::Iter<'a, (u32, i8)>),
}

impl Iterator for Neighbors<'_> {
    type Item = (usize, i8);

    fn next(&mut self) -> Option<(usize, i8)> {
        match self {
            Neighbors::Dense { row, pos } => {
                while *pos < row.len() {
                    let j = *pos;
                    *pos += 1;
                    if row[j] != 0 {
                        return Some((j, row[j]));
                    }
                }
                None
            }
            Neighbors::List(it) => it.next().map(|&(j, s)| (j as usize, s)),
        }
    }
}

/// The factorization `A = P - N` into positive and negative indicator matrices,
/// stored as packed bit rows.
#[derive(Clone, Debug)]
pub struct SignMatrices {
    n: usize,
    words: usize,
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl SignMatrices {
    pub fn from_adjacency(adj: &SignedAdjacency) -> Self {
        let n = adj.n();
        let words = n.div_ceil(64);
        let mut pos = vec![0u64; n * words];
        let mut neg = vec![0u64; n * words];
        for i in 0..n {
            for (j, s) in adj.neighbors(i) {
                let target = if s > 0 { &mut pos } else { &mut neg };
                target[i * words + j / 64] |= 1u64 << (j % 64);
            }
        }
        SignMatrices { n, words, pos, neg }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn pos(&self, i: usize, j: usize) -> bool {
        self.pos[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn neg(&self, i: usize, j: usize) -> bool {
        self.neg[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn pos_row(&self, i: usize) -> &[u64] {
        &self.pos[i * self.words..(i + 1) * self.words]
    }

    pub fn neg_row(&self, i: usize) -> &[u64] {
        &self.neg[i * self.words..(i + 1) * self.words]
    }
}

/// Density and sign composition of an observed network.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub negative_edges: usize,
    pub edge_proportion: f64,
    /// Fraction of present edges that are negative; `None` for an edgeless graph.
    pub negative_fraction: Option<f64>,
}

pub fn summarize(adj: &SignedAdjacency) -> Result<GraphSummary, GraphError> {
    let n = adj.n();
    if n < 2 {
        return Err(GraphError::TooFewNodes { n });
    }
    let (mut edges, mut negative) = (0usize, 0usize);
    for (_, _, s) in adj.edges() {
        edges += 1;
        if s < 0 {
            negative += 1;
        }
    }
    let pairs = n * (n - 1) / 2;
    Ok(GraphSummary {
        n,
        edges,
        negative_edges: negative,
        edge_proportion: edges as f64 / pairs as f64,
        negative_fraction: (edges > 0).then(|| negative as f64 / edges as f64),
    })
}

/// How repeated pairs in an edge list are treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DedupPolicy {
    /// Identical repeats are merged; conflicting signs are an error.
    #[default]
    MergeIdentical,
    /// Any repeated pair is an error.
    Strict,
}

#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub dedup: DedupPolicy,
    pub dense_threshold: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            dedup: DedupPolicy::MergeIdentical,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
        }
    }
}

fn parse_sign(token: &str, line: usize) -> Result<Sign, GraphError> {
    match token {
        "+1" | "1" => Ok(Sign::Positive),
        "-1" => Ok(Sign::Negative),
        _ => Err(GraphError::BadSign {
            line,
            token: token.to_string(),
        }),
    }
}

/// Parses a whitespace-separated signed edge list.
///
/// Each data line is `u v s` with `s` one of `+1`, `-1`, `1`; a line holding
/// a single token declares an (possibly isolated) node. Blank lines and lines
/// starting with `#` are skipped. Node labels are sorted lexicographically and
/// mapped to indices `0..n`.
pub fn parse_edge_list(text: &str, options: &ParseOptions) -> Result<SignedAdjacency, GraphError> {
    read_edge_list(text.as_bytes(), options)
}

pub fn read_edge_list<R: BufRead>(
    reader: R,
    options: &ParseOptions,
) -> Result<SignedAdjacency, GraphError> {
    let mut nodes: BTreeMap<String, usize> = BTreeMap::new();
    // (lo, hi) label pair -> (sign, first line)
    let mut pairs: BTreeMap<(String, String), (Sign, usize)> = BTreeMap::new();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            [u] => {
                nodes.entry((*u).to_string()).or_insert(0);
            }
            [u, v, s] => {
                let sign = parse_sign(s, line_no)?;
                if u == v {
                    return Err(GraphError::SelfLoop {
                        line: line_no,
                        node: (*u).to_string(),
                    });
                }
                let key = if u < v {
                    ((*u).to_string(), (*v).to_string())
                } else {
                    ((*v).to_string(), (*u).to_string())
                };
                nodes.entry(key.0.clone()).or_insert(0);
                nodes.entry(key.1.clone()).or_insert(0);
                if let Some(&(prev, _)) = pairs.get(&key) {
                    if prev != sign {
                        return Err(GraphError::ConflictingSign {
                            line: line_no,
                            u: key.0,
                            v: key.1,
                        });
                    }
                    if options.dedup == DedupPolicy::Strict {
                        return Err(GraphError::DuplicateEdge {
                            line: line_no,
                            u: key.0,
                            v: key.1,
                        });
                    }
                } else {
                    pairs.insert(key, (sign, line_no));
                }
            }
            _ => {
                return Err(GraphError::Malformed {
                    line: line_no,
                    content: line.clone(),
                })
            }
        }
    }

    for (index, slot) in nodes.values_mut().enumerate() {
        *slot = index;
    }
    let n = nodes.len();
    let edges = pairs
        .iter()
        .map(|((u, v), &(s, _))| (nodes[u], nodes[v], s));
    let adj = SignedAdjacency::from_edges_with(n, edges, options.dense_threshold)?;
    adj.with_labels(nodes.into_keys().collect())
}

/// Writes the edge-list form: isolated nodes first (one label per line), then
/// one `u v s` line per edge with `u < v` by label, sorted by `(u, v)`.
pub fn write_edge_list<W: Write>(adj: &SignedAdjacency, mut out: W) -> Result<(), GraphError> {
    let labels: Vec<String> = (0..adj.n()).map(|i| adj.label(i)).collect();
    let mut isolated: Vec<&str> = (0..adj.n())
        .filter(|&i| adj.degree(i) == 0)
        .map(|i| labels[i].as_str())
        .collect();
    isolated.sort_unstable();
    for l in isolated {
        writeln!(out, "{l}")?;
    }
    let mut rows: Vec<(&str, &str, i8)> = adj
        .edges()
        .map(|(i, j, s)| {
            let (a, b) = (labels[i].as_str(), labels[j].as_str());
            if a < b {
                (a, b, s)
            } else {
                (b, a, s)
            }
        })
        .collect();
    rows.sort_unstable();
    for (u, v, s) in rows {
        writeln!(out, "{u} {v} {}", if s > 0 { "+1" } else { "-1" })?;
    }
    Ok(())
}

pub fn to_edge_list_string(adj: &SignedAdjacency) -> String {
    let mut buf = Vec::new();
    write_edge_list(adj, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("labels are UTF-8")
}

impl fmt::Display for SignedAdjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_edge_list_string(self))
    }
}
