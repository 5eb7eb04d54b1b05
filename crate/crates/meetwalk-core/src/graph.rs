//! Digraphs, standard graph families, and their stochastic/rate matrices.
//!
//! Node indices are 0-based throughout the library; the file formats and the
//! CLI use 1-based labels and convert at the boundary (see [`crate::io`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Weighted digraph on nodes `0..n`.
///
/// Absence of an edge encodes weight zero: zero-weight edges are rejected,
/// as are duplicate `(src, dst)` pairs. Edges are kept sorted by
/// `(src, dst)` so structural equality is well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Digraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(src, dst, w) in &edges {
            if src >= n || dst >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) outside node range 1..={n}",
                    src + 1,
                    dst + 1
                )));
            }
            if w <= 0.0 || !w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has non-positive weight {w}; omit the edge instead",
                    src + 1,
                    dst + 1
                )));
            }
        }
        edges.sort_unstable_by_key(|a| (a.0, a.1));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0 + 1,
                w[0].1 + 1
            )));
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn out_neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges(node).iter().map(|e| e.1)
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.out_edges(node).len()
    }

    /// Edges leaving `node`: a contiguous slice, since edges are kept
    /// sorted by `(src, dst)`.
    fn out_edges(&self, node: usize) -> &[(usize, usize, f64)] {
        let lo = self.edges.partition_point(|e| e.0 < node);
        let hi = self.edges.partition_point(|e| e.0 <= node);
        &self.edges[lo..hi]
    }
}

/// A graph family from the comparison table, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Ring {
        n: usize,
    },
    Path {
        n: usize,
    },
    /// Center is node 0 (label 1).
    Star {
        n: usize,
    },
    /// Complete graph on the first `clique` nodes with a path of `tail`
    /// nodes attached to the last clique node.
    Lollipop {
        clique: usize,
        tail: usize,
    },
    /// Two `clique`-cliques joined by a path of `path` intermediate nodes
    /// (n = 2·clique + path). This is the 20-node "lollipop" of the
    /// comparison table: two 5-cliques bridged by a 10-node path.
    Barbell {
        clique: usize,
        path: usize,
    },
    /// `rows × cols` grid with 4-neighbor adjacency.
    Lattice {
        rows: usize,
        cols: usize,
    },
    /// `n` points uniform in the unit square, edge iff Euclidean distance
    /// is at most `radius`. Deterministic for a given `seed`.
    RandomGeometric {
        n: usize,
        radius: f64,
        seed: u64,
    },
}

/// Build a digraph of the given family. All families produce symmetric edge
/// sets (each undirected edge is stored as both directed arcs).
pub fn generate(family: &GraphFamily) -> Result<Digraph> {
    match *family {
        GraphFamily::Ring { n } => {
            if n < 1 {
                return Err(Error::InvalidParameter("ring: n must be >= 1".into()));
            }
            let mut edges = Vec::new();
            if n == 2 {
                edges.push((0, 1, 1.0));
                edges.push((1, 0, 1.0));
            } else if n > 2 {
                for i in 0..n {
                    let j = (i + 1) % n;
                    edges.push((i, j, 1.0));
                    edges.push((j, i, 1.0));
                }
            }
            Digraph::new(n, edges)
        }
        GraphFamily::Path { n } => {
            if n < 1 {
                return Err(Error::InvalidParameter("path: n must be >= 1".into()));
            }
            let mut edges = Vec::new();
            for i in 0..n.saturating_sub(1) {
                edges.push((i, i + 1, 1.0));
                edges.push((i + 1, i, 1.0));
            }
            Digraph::new(n, edges)
        }
        GraphFamily::Star { n } => {
            if n < 1 {
                return Err(Error::InvalidParameter("star: n must be >= 1".into()));
            }
            let mut edges = Vec::new();
            for leaf in 1..n {
                edges.push((0, leaf, 1.0));
                edges.push((leaf, 0, 1.0));
            }
            Digraph::new(n, edges)
        }
        GraphFamily::Lollipop { clique, tail } => {
            if clique < 1 {
                return Err(Error::InvalidParameter(
                    "lollipop: clique size must be >= 1".into(),
                ));
            }
            let n = clique + tail;
            let mut edges = Vec::new();
            for i in 0..clique {
                for j in (i + 1)..clique {
                    edges.push((i, j, 1.0));
                    edges.push((j, i, 1.0));
                }
            }
            // Tail hangs off the last clique node.
            for k in 0..tail {
                let a = if k == 0 { clique - 1 } else { clique + k - 1 };
                let b = clique + k;
                edges.push((a, b, 1.0));
                edges.push((b, a, 1.0));
            }
            Digraph::new(n, edges)
        }
        GraphFamily::Barbell { clique, path } => {
            if clique < 2 {
                return Err(Error::InvalidParameter(
                    "barbell: clique size must be >= 2".into(),
                ));
            }
            let n = 2 * clique + path;
            let mut edges = Vec::new();
            for base in [0, clique + path] {
                for i in base..base + clique {
                    for j in (i + 1)..base + clique {
                        edges.push((i, j, 1.0));
                        edges.push((j, i, 1.0));
                    }
                }
            }
            // Bridge path from the last node of the left clique to the
            // first node of the right clique.
            let mut prev = clique - 1;
            for k in 0..path {
                edges.push((prev, clique + k, 1.0));
                edges.push((clique + k, prev, 1.0));
                prev = clique + k;
            }
            edges.push((prev, clique + path, 1.0));
            edges.push((clique + path, prev, 1.0));
            Digraph::new(n, edges)
        }
        GraphFamily::Lattice { rows, cols } => {
            if rows < 1 || cols < 1 {
                return Err(Error::InvalidParameter(
                    "lattice: rows and cols must be >= 1".into(),
                ));
            }
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1), 1.0));
                        edges.push((id(r, c + 1), id(r, c), 1.0));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c), 1.0));
                        edges.push((id(r + 1, c), id(r, c), 1.0));
                    }
                }
            }
            Digraph::new(rows * cols, edges)
        }
        GraphFamily::RandomGeometric { n, radius, seed } => {
            if n < 1 {
                return Err(Error::InvalidParameter(
                    "random_geometric: n must be >= 1".into(),
                ));
            }
            if !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
                return Err(Error::InvalidParameter(format!(
                    "random_geometric: radius {radius} not in (0, sqrt(2)]"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
                .collect();
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let dx = points[i].0 - points[j].0;
                    let dy = points[i].1 - points[j].1;
                    if (dx * dx + dy * dy).sqrt() <= radius {
                        edges.push((i, j, 1.0));
                        edges.push((j, i, 1.0));
                    }
                }
            }
            Digraph::new(n, edges)
        }
    }
}

/// Row-stochastic matrix stored as sparse rows `(col, probability)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

/// Row-sum tolerance for stochastic/rate matrix validation.
pub const ROW_SUM_TOL: f64 = 1e-12;

impl TransitionMatrix {
    /// Validate and build from sparse rows. Entries must lie in `[0, 1]`,
    /// each row must sum to 1 within [`ROW_SUM_TOL`]. Zero entries are
    /// dropped; column indices are deduplicated by summing.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let mut clean = Vec::with_capacity(n);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for (j, p) in row {
                if j >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) outside dimension {n}",
                        i + 1,
                        j + 1
                    )));
                }
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) = {p} outside [0, 1]",
                        i + 1,
                        j + 1
                    )));
                }
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += p,
                    _ => merged.push((j, p)),
                }
            }
            merged.retain(|e| e.1 > 0.0);
            let sum: f64 = merged.iter().map(|e| e.1).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidMatrix(format!(
                    "row {} sums to {sum}, expected 1",
                    i + 1
                )));
            }
            clean.push(merged);
        }
        Ok(Self { n, rows: clean })
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let sparse = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &p)| p != 0.0)
                    .map(|(j, &p)| (j, p))
                    .collect()
            })
            .collect();
        Self::from_rows(n, sparse)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| vec![(i, 1.0)]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sparse row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |e| e.0)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n]; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                out[i][j] = p;
            }
        }
        out
    }

    /// Support adjacency: out-neighbor lists (entries > 0).
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.0).collect())
            .collect()
    }
}

/// Transition rate matrix: off-diagonal rates plus per-row exit rates, with
/// `q_ii = -exit(i)` so every row sums to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    n: usize,
    off: Vec<Vec<(usize, f64)>>,
    exit: Vec<f64>,
}

impl RateMatrix {
    /// Build from off-diagonal rows; the diagonal is derived as the negated
    /// row sum. Off-diagonal entries must be nonnegative and finite.
    pub fn from_off_diagonal(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "expected {n} rows, got {}",
                rows.len()
            )));
        }
        let mut off = Vec::with_capacity(n);
        let mut exit = Vec::with_capacity(n);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for (j, q) in row {
                if j >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({}, {}) outside dimension {n}",
                        i + 1,
                        j + 1
                    )));
                }
                if j == i {
                    return Err(Error::InvalidMatrix(format!(
                        "diagonal entry ({}, {}) must be derived, not supplied",
                        i + 1,
                        j + 1
                    )));
                }
                if q < 0.0 || !q.is_finite() {
                    return Err(Error::InvalidMatrix(format!(
                        "rate ({}, {}) = {q} must be nonnegative",
                        i + 1,
                        j + 1
                    )));
                }
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += q,
                    _ => merged.push((j, q)),
                }
            }
            merged.retain(|e| e.1 > 0.0);
            let total: f64 = merged.iter().map(|e| e.1).sum();
            off.push(merged);
            exit.push(total);
        }
        Ok(Self { n, off, exit })
    }

    /// Build from a dense matrix that includes the diagonal; validates that
    /// each row sums to zero within [`ROW_SUM_TOL`] (relative to the row's
    /// magnitude) and that off-diagonal entries are nonnegative.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut off = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {} is ragged", i + 1)));
            }
            let scale = row.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let sum: f64 = row.iter().sum();
            if sum.abs() > ROW_SUM_TOL * scale {
                return Err(Error::InvalidMatrix(format!(
                    "row {} sums to {sum}, expected 0",
                    i + 1
                )));
            }
            let mut r = Vec::new();
            for (j, &q) in row.iter().enumerate() {
                if j != i && q != 0.0 {
                    r.push((j, q));
                }
            }
            off.push(r);
        }
        Self::from_off_diagonal(n, off)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Off-diagonal sparse row `i`, sorted by column.
    pub fn off_diagonal(&self, i: usize) -> &[(usize, f64)] {
        &self.off[i]
    }

    /// Total exit rate of node `i` (`-q_ii`).
    pub fn exit_rate(&self, i: usize) -> f64 {
        self.exit[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            -self.exit[i]
        } else {
            self.off[i]
                .binary_search_by_key(&j, |e| e.0)
                .map(|k| self.off[i][k].1)
                .unwrap_or(0.0)
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            out[i][i] = -self.exit[i];
            for &(j, q) in &self.off[i] {
                out[i][j] = q;
            }
        }
        out
    }

    /// The matrix `c·Q` (time-rescaled chain), `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "scale factor {c} must be positive"
            )));
        }
        let rows = self
            .off
            .iter()
            .map(|r| r.iter().map(|&(j, q)| (j, c * q)).collect())
            .collect();
        Self::from_off_diagonal(self.n, rows)
    }

    /// Support adjacency of the off-diagonal part.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.off
            .iter()
            .map(|r| r.iter().map(|e| e.0).collect())
            .collect()
    }
}

/// Equal-neighbor random-walk matrix of `g`: row `i` spreads probability
/// uniformly over the out-neighbors of `i`, plus `i` itself when
/// `self_loops` is set (the self-loop counts once even if `g` already has
/// an explicit `(i, i)` edge). Edge weights of `g` are ignored.
pub fn equal_neighbor_matrix(g: &Digraph, self_loops: bool) -> Result<TransitionMatrix> {
    let n = g.n();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut targets: Vec<usize> = g.out_neighbors(i).collect();
        if self_loops && !targets.contains(&i) {
            targets.push(i);
        }
        if targets.is_empty() {
            return Err(Error::ZeroOutDegreeRow { node: i + 1 });
        }
        let p = 1.0 / targets.len() as f64;
        rows.push(targets.into_iter().map(|j| (j, p)).collect());
    }
    TransitionMatrix::from_rows(n, rows)
}

/// Rate matrix of `g`: off-diagonal rates are the edge weights, the
/// diagonal is the negated row sum.
pub fn rate_matrix_from_digraph(g: &Digraph) -> RateMatrix {
    let n = g.n();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(src, dst, w) in g.edges() {
        if src != dst {
            rows[src].push((dst, w));
        }
        // A self-edge contributes q_ii and -q_ii simultaneously: a no-op.
    }
    RateMatrix::from_off_diagonal(n, rows).expect("digraph weights are validated positive")
}
