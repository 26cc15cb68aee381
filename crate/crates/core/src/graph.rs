//! Similarity-graph construction over feature vectors, plus graph Laplacians.
//!
//! Three topologies are supported: k-nearest-neighbor (union-symmetrized,
//! distance ties broken by ascending sample index), epsilon-neighborhood
//! (edge iff distance <= radius), and the complete graph. Edge weights come
//! from an RBF kernel on Euclidean distance or from clipped cosine
//! similarity, so they always land in (0, 1]; a weight of exactly zero means
//! no edge. Everything is deterministic: candidate enumeration, tie-breaking,
//! and edge ordering depend only on the input order.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::SparseSymmetric;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphMethod {
    Knn { k: usize },
    Epsilon { radius: f64 },
    Full,
}

/// RBF bandwidth: fixed, or resolved from the data at build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaChoice {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKernel {
    Rbf { sigma: SigmaChoice },
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphConfig {
    pub method: GraphMethod,
    pub kernel: WeightKernel,
    /// Z-score features per dimension before any distance or kernel
    /// evaluation. Zero-variance dimensions map to 0.
    pub standardize: bool,
}

impl Default for GraphConfig {
    /// kNN with k = 10 and an auto-bandwidth RBF kernel; a documented
    /// convention, not a derived optimum.
    fn default() -> Self {
        Self {
            method: GraphMethod::Knn { k: 10 },
            kernel: WeightKernel::Rbf { sigma: SigmaChoice::Auto },
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Undirected weighted graph over dataset rows. Edges satisfy `i < j`, carry
/// weights in (0, 1], and are sorted by `(i, j)`. The stored config has any
/// `sigma = auto` replaced by the concrete resolved value, so a graph is
/// self-describing.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    pub n: usize,
    pub edges: Vec<GraphEdge>,
    pub config: GraphConfig,
}

impl SimilarityGraph {
    /// Validates the structural invariants and returns the graph. Intended
    /// for deserialized edge sets; `build_graph` establishes them itself.
    pub fn new(n: usize, mut edges: Vec<GraphEdge>, config: GraphConfig) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("a similarity graph needs at least two nodes"));
        }
        edges.sort_unstable_by_key(|e| (e.i, e.j));
        let mut prev: Option<(usize, usize)> = None;
        for e in &edges {
            if e.i >= e.j {
                return Err(Error::Config("edges must satisfy i < j (no self-loops)"));
            }
            if e.j >= n {
                return Err(Error::Config("edge endpoint out of range"));
            }
            if !(e.weight > 0.0 && e.weight <= 1.0) || !e.weight.is_finite() {
                return Err(Error::Config("edge weights must lie in (0, 1]"));
            }
            if prev == Some((e.i, e.j)) {
                return Err(Error::Config("duplicate edge"));
            }
            prev = Some((e.i, e.j));
        }
        Ok(Self { n, edges, config })
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.i] += e.weight;
            d[e.j] += e.weight;
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    Unnormalized,
    SymmetricNormalized,
}

/// Graph Laplacian in sparse symmetric form.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    pub kind: LaplacianKind,
    pub matrix: SparseSymmetric,
}

/// `exp(-||x - y||^2 / (2 sigma^2))`; equals 1 iff `x == y`.
pub fn rbf_similarity(x: &[f64], y: &[f64], sigma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::Config("sigma must be positive"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Config("kernel inputs must be finite"));
    }
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(libm::exp(-d2 / (2.0 * sigma * sigma)))
}

/// Cosine similarity clipped below at 0 so it can serve as an edge weight.
/// A zero vector on either side yields 0.
pub fn cosine_similarity(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let nx = libm::sqrt(x.iter().map(|v| v * v).sum());
    let ny = libm::sqrt(y.iter().map(|v| v * v).sum());
    if nx == 0.0 || ny == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (nx * ny)).max(0.0))
}

/// Median of all pairwise Euclidean distances; an even count averages the
/// two middle values. This is the `sigma = auto` resolver.
pub fn median_sigma(dataset: &Dataset) -> Result<f64> {
    let rows: Vec<&[f64]> = dataset.rows().collect();
    median_distance(&rows)
}

fn median_distance(rows: &[&[f64]]) -> Result<f64> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::Config("median distance needs at least two samples"));
    }
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            dists.push(libm::sqrt(squared_distance(rows[i], rows[j])));
        }
    }
    dists.sort_unstable_by(f64::total_cmp);
    let mid = dists.len() / 2;
    let median = if dists.len() % 2 == 1 { dists[mid] } else { (dists[mid - 1] + dists[mid]) / 2.0 };
    if median == 0.0 {
        return Err(Error::DegenerateDataset);
    }
    Ok(median)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Per-dimension z-score copy of the dataset (population standard
/// deviation). Dimensions with zero variance become all zeros.
pub fn standardize(dataset: &Dataset) -> Dataset {
    let n = dataset.len();
    let d = dataset.dim();
    let mut mean = vec![0.0; d];
    for row in dataset.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut var = vec![0.0; d];
    for row in dataset.rows() {
        for c in 0..d {
            let dev = row[c] - mean[c];
            var[c] += dev * dev;
        }
    }
    let std: Vec<f64> = var.iter().map(|v| libm::sqrt(v / n as f64)).collect();

    let mut features = Vec::with_capacity(n * d);
    for row in dataset.rows() {
        for c in 0..d {
            features.push(if std[c] > 0.0 { (row[c] - mean[c]) / std[c] } else { 0.0 });
        }
    }
    Dataset::new(dataset.ids().to_vec(), features, d)
        .expect("standardizing preserves dataset validity")
}

/// Builds the configured similarity graph over the dataset rows.
///
/// Pairs are enumerated per the method, then weighted with the kernel; pairs
/// whose weight is exactly zero are dropped. The returned config carries the
/// resolved sigma when the kernel is RBF with `sigma = auto`.
pub fn build_graph(dataset: &Dataset, config: &GraphConfig) -> Result<SimilarityGraph> {
    let n = dataset.len();
    if n < 2 {
        return Err(Error::Config("graph construction needs at least two samples"));
    }
    let standardized;
    let working: &Dataset = if config.standardize {
        standardized = standardize(dataset);
        &standardized
    } else {
        dataset
    };
    let rows: Vec<&[f64]> = working.rows().collect();

    match config.method {
        GraphMethod::Knn { k } => {
            if k == 0 || k >= n {
                return Err(Error::KOutOfRange { k, n });
            }
        }
        GraphMethod::Epsilon { radius } => {
            if radius <= 0.0 || !radius.is_finite() {
                return Err(Error::Config("epsilon must be positive"));
            }
        }
        GraphMethod::Full => {}
    }
    let resolved_kernel = match config.kernel {
        WeightKernel::Rbf { sigma: SigmaChoice::Auto } => {
            WeightKernel::Rbf { sigma: SigmaChoice::Fixed(median_distance(&rows)?) }
        }
        WeightKernel::Rbf { sigma: SigmaChoice::Fixed(s) } => {
            if s <= 0.0 || !s.is_finite() {
                return Err(Error::Config("sigma must be positive"));
            }
            config.kernel
        }
        WeightKernel::Cosine => config.kernel,
    };

    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    match config.method {
        GraphMethod::Full => {
            for i in 0..n {
                for j in (i + 1)..n {
                    pairs.insert((i, j));
                }
            }
        }
        GraphMethod::Epsilon { radius } => {
            let r2 = radius * radius;
            for i in 0..n {
                for j in (i + 1)..n {
                    if squared_distance(rows[i], rows[j]) <= r2 {
                        pairs.insert((i, j));
                    }
                }
            }
        }
        GraphMethod::Knn { k } => {
            let mut order: Vec<usize> = Vec::with_capacity(n - 1);
            for i in 0..n {
                order.clear();
                order.extend((0..n).filter(|&j| j != i));
                order.sort_unstable_by(|&a, &b| {
                    squared_distance(rows[i], rows[a])
                        .total_cmp(&squared_distance(rows[i], rows[b]))
                        .then(a.cmp(&b))
                });
                for &j in order.iter().take(k) {
                    pairs.insert((i.min(j), i.max(j)));
                }
            }
        }
    }

    let mut edges = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let weight = match resolved_kernel {
            WeightKernel::Rbf { sigma: SigmaChoice::Fixed(s) } => {
                libm::exp(-squared_distance(rows[i], rows[j]) / (2.0 * s * s))
            }
            WeightKernel::Rbf { sigma: SigmaChoice::Auto } => unreachable!("sigma resolved above"),
            WeightKernel::Cosine => cosine_similarity(rows[i], rows[j])?,
        };
        if weight > 0.0 {
            edges.push(GraphEdge { i, j, weight });
        }
    }

    Ok(SimilarityGraph {
        n,
        edges,
        config: GraphConfig { kernel: resolved_kernel, ..*config },
    })
}

/// Graph Laplacian of the requested kind. Unnormalized: `L = D - W`.
/// Symmetric-normalized: `I - D^(-1/2) W D^(-1/2)`, where isolated nodes
/// contribute a zero `D^(-1/2)` entry (their diagonal stays 1).
pub fn laplacian(graph: &SimilarityGraph, kind: LaplacianKind) -> Laplacian {
    let degrees = graph.degrees();
    let matrix = match kind {
        LaplacianKind::Unnormalized => SparseSymmetric {
            n: graph.n,
            diag: degrees,
            off: graph.edges.iter().map(|e| (e.i, e.j, -e.weight)).collect(),
        },
        LaplacianKind::SymmetricNormalized => {
            let inv_sqrt: Vec<f64> =
                degrees.iter().map(|&d| if d > 0.0 { 1.0 / libm::sqrt(d) } else { 0.0 }).collect();
            SparseSymmetric {
                n: graph.n,
                diag: vec![1.0; graph.n],
                off: graph
                    .edges
                    .iter()
                    .map(|e| (e.i, e.j, -e.weight * inv_sqrt[e.i] * inv_sqrt[e.j]))
                    .collect(),
            }
        }
    };
    Laplacian { kind, matrix }
}
