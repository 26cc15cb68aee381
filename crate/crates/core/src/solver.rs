//! Label propagation by alternating minimization of one joint objective.
//!
//! Scores `F` and soft labels `Y` minimize
//!
//! ```text
//! J(F, Y) = ‖Y − F‖² + λ·tr(FᵀLF) + α·Σ_i w_i·‖Y_i − F_i‖² + γ·‖Y − Y₀‖²
//! ```
//!
//! where `L` is a graph Laplacian, `Y₀` the initial label matrix, and `w_i`
//! a per-row severity weight (`ω(class of i)` for labeled rows, `0`
//! otherwise). Both blocks are exactly minimized in turn: the F-step solves
//! a symmetric positive definite linear system, the Y-step is a row-wise
//! convex combination. For `γ > 0` the alternation is a contraction with
//! factor at most `(1 + α·w_max) / (1 + α·w_max + γ)`, so it converges to
//! the unique global minimizer.
//!
//! [`fixed_point_oracle`] solves the same stationarity conditions directly
//! with dense linear algebra; it exists so the iteration can be checked
//! against an independent route to the answer.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::ClassCatalog;
use crate::error::{Error, Result};
use crate::graph::{laplacian, Laplacian, LaplacianKind, SimilarityGraph};
use crate::linalg::{DenseMatrix, LuFactors, SparseSymmetric};

/// Largest system handed to the dense LU solver; anything bigger goes
/// through conjugate gradients.
const DENSE_DIRECT_LIMIT: usize = 512;
/// Upper bound on problem size for [`fixed_point_oracle`], which
/// materializes n-by-n dense matrices.
const ORACLE_LIMIT: usize = 1000;

/// All knobs of the propagation solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Smoothness weight on the Laplacian quadratic, `>= 0`.
    pub lambda: f64,
    /// Anchor weight tying `Y` to `Y₀`, strictly positive; the contraction
    /// argument fails at zero.
    pub gamma: f64,
    /// Severity-loss weight, `>= 0`.
    pub alpha: f64,
    /// Per-class weights `ω_c >= 0`; empty means 1 for every class.
    pub severity_weights: Vec<f64>,
    /// Decision threshold for binary prediction, in `(0, 1)`.
    pub threshold: f64,
    /// Convergence tolerance on the max-abs change in `Y`.
    pub tol: f64,
    pub max_iter: usize,
    /// Reset labeled rows to `Y₀` after every Y-step instead of letting
    /// them move. Off by default; turning it on abandons the exact
    /// coordinate-descent interpretation, so the objective trace may rise.
    pub clamp_labeled: bool,
    pub laplacian_kind: LaplacianKind,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            gamma: 1.0,
            alpha: 0.0,
            severity_weights: Vec::new(),
            threshold: 0.5,
            tol: 1e-6,
            max_iter: 1000,
            clamp_labeled: false,
            laplacian_kind: LaplacianKind::Unnormalized,
        }
    }
}

impl SolverConfig {
    /// Validates every field against a `k`-class problem.
    pub fn validate(&self, k: usize) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::Config("lambda must be >= 0"));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::Config("gamma must be > 0"));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::Config("alpha must be >= 0"));
        }
        if !self.severity_weights.is_empty() && self.severity_weights.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: self.severity_weights.len() });
        }
        if self.severity_weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config("severity weights must be >= 0"));
        }
        if !self.threshold.is_finite() || self.threshold <= 0.0 || self.threshold >= 1.0 {
            return Err(Error::Config("threshold must lie in (0, 1)"));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::Config("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1"));
        }
        Ok(())
    }

    /// Severity weight of one class; an empty table means uniform 1.
    pub fn class_weight(&self, class: usize) -> f64 {
        self.severity_weights.get(class).copied().unwrap_or(1.0)
    }
}

/// Initial and current soft labels, both `n x k` row-major.
///
/// `initial` is the anchor `Y₀` and never changes; `current` is the iterated
/// variable. A row is labeled iff its initial row is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix {
    n: usize,
    k: usize,
    initial: Vec<f64>,
    current: Vec<f64>,
}

impl LabelMatrix {
    /// Builds a label matrix from an arbitrary finite anchor `Y₀`;
    /// `current` starts equal to it.
    pub fn from_initial(n: usize, k: usize, initial: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("a label matrix needs at least one row"));
        }
        if k < 2 {
            return Err(Error::Config("a label matrix needs at least two classes"));
        }
        if initial.len() != n * k {
            return Err(Error::DimensionMismatch { expected: n * k, found: initial.len() });
        }
        if let Some(pos) = initial.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature { row: pos / k, col: pos % k });
        }
        Ok(Self { n, k, current: initial.clone(), initial })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn current(&self) -> &[f64] {
        &self.current
    }

    pub fn initial_row(&self, i: usize) -> &[f64] {
        &self.initial[i * self.k..(i + 1) * self.k]
    }

    pub fn current_row(&self, i: usize) -> &[f64] {
        &self.current[i * self.k..(i + 1) * self.k]
    }

    pub fn is_labeled(&self, i: usize) -> bool {
        self.initial_row(i).iter().any(|&v| v != 0.0)
    }

    pub fn labeled_count(&self) -> usize {
        (0..self.n).filter(|&i| self.is_labeled(i)).count()
    }

    /// Same anchor, different iterate. Useful for evaluating the objective
    /// at hypothetical label states.
    pub fn with_current(&self, current: Vec<f64>) -> Result<Self> {
        if current.len() != self.n * self.k {
            return Err(Error::DimensionMismatch { expected: self.n * self.k, found: current.len() });
        }
        if let Some(pos) = current.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature { row: pos / self.k, col: pos % self.k });
        }
        Ok(Self { n: self.n, k: self.k, initial: self.initial.clone(), current })
    }
}

/// One-hot label matrix from `(row, class)` assignments; unlisted rows are
/// all zeros. Assigning the same row twice is an error.
pub fn init_label_matrix(n: usize, k: usize, assignments: &[(usize, usize)]) -> Result<LabelMatrix> {
    if n == 0 {
        return Err(Error::Config("a label matrix needs at least one row"));
    }
    if k < 2 {
        return Err(Error::Config("a label matrix needs at least two classes"));
    }
    let mut initial = vec![0.0; n * k];
    let mut seen = vec![false; n];
    for &(row, class) in assignments {
        if row >= n {
            return Err(Error::Config("labeled row index out of range"));
        }
        if class >= k {
            return Err(Error::ClassOutOfRange { class, k });
        }
        if seen[row] {
            return Err(Error::DuplicateRowAssignment { row });
        }
        seen[row] = true;
        initial[row * k + class] = 1.0;
    }
    LabelMatrix::from_initial(n, k, initial)
}

/// Propagated scores, `n x k` row-major, finite by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    n: usize,
    k: usize,
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(n: usize, k: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * k {
            return Err(Error::DimensionMismatch { expected: n * k, found: values.len() });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature { row: pos / k.max(1), col: pos % k.max(1) });
        }
        Ok(Self { n, k, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, c: usize) -> f64 {
        self.values[i * self.k + c]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }
}

/// Convergence diagnostics from [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Alternation rounds executed (each is one F-step plus one Y-step).
    pub iterations: usize,
    pub converged: bool,
    /// Max-abs change in `Y` during the last round.
    pub final_residual: f64,
    /// Objective `J` after each round; non-increasing (within 1e-9) unless
    /// `clamp_labeled` is on.
    pub objective_trace: Vec<f64>,
}

/// Outcome of thresholding one score row: a class index, or `None` when the
/// row carries no evidence. `positive_score` is the normalized score of
/// class 1 and is only produced for two-class problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowPrediction {
    pub class: Option<usize>,
    pub positive_score: Option<f64>,
}

/// Per-row severity weights: `ω(class of i)` for labeled rows (class read
/// off the largest initial entry), 0 for unlabeled rows.
pub fn severity_row_weights(labels: &LabelMatrix, config: &SolverConfig) -> Vec<f64> {
    (0..labels.n)
        .map(|i| {
            if labels.is_labeled(i) {
                config.class_weight(argmax(labels.initial_row(i)))
            } else {
                0.0
            }
        })
        .collect()
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (c, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = c;
        }
    }
    best
}

/// The joint objective `J(F, Y)`; see the module docs for the formula.
pub fn objective(
    scores: &ScoreMatrix,
    labels: &LabelMatrix,
    lap: &Laplacian,
    config: &SolverConfig,
) -> Result<f64> {
    if scores.n != labels.n || scores.k != labels.k {
        return Err(Error::DimensionMismatch { expected: labels.n * labels.k, found: scores.n * scores.k });
    }
    if lap.matrix.n != labels.n {
        return Err(Error::DimensionMismatch { expected: labels.n, found: lap.matrix.n });
    }
    config.validate(labels.k)?;
    let weights = severity_row_weights(labels, config);
    let mut column = vec![0.0; labels.n];
    Ok(objective_value(
        &scores.values,
        &labels.current,
        &labels.initial,
        &weights,
        &lap.matrix,
        config,
        labels.k,
        &mut column,
    ))
}

#[allow(clippy::too_many_arguments)]
fn objective_value(
    f: &[f64],
    y: &[f64],
    y0: &[f64],
    weights: &[f64],
    lap: &SparseSymmetric,
    config: &SolverConfig,
    k: usize,
    column: &mut [f64],
) -> f64 {
    let n = lap.n;
    let mut fit_term = 0.0;
    let mut severity = 0.0;
    let mut anchor = 0.0;
    for i in 0..n {
        let mut row_sq = 0.0;
        for c in 0..k {
            let d = y[i * k + c] - f[i * k + c];
            row_sq += d * d;
            let a = y[i * k + c] - y0[i * k + c];
            anchor += a * a;
        }
        fit_term += row_sq;
        severity += weights[i] * row_sq;
    }
    let mut smooth = 0.0;
    for c in 0..k {
        for i in 0..n {
            column[i] = f[i * k + c];
        }
        smooth += lap.quadratic_form(column);
    }
    fit_term + config.lambda * smooth + config.alpha * severity + config.gamma * anchor
}

/// Severity-weighted squared error `Σ_i w_i ‖Y_i − F_i‖²` between current
/// labels and scores.
pub fn dr_loss(scores: &ScoreMatrix, labels: &LabelMatrix, weights: &[f64]) -> Result<f64> {
    if scores.n != labels.n || scores.k != labels.k {
        return Err(Error::DimensionMismatch { expected: labels.n * labels.k, found: scores.n * scores.k });
    }
    if weights.len() != labels.n {
        return Err(Error::DimensionMismatch { expected: labels.n, found: weights.len() });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Config("severity weights must be >= 0"));
    }
    let k = labels.k;
    let mut total = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        let mut row_sq = 0.0;
        for c in 0..k {
            let d = labels.current[i * k + c] - scores.values[i * k + c];
            row_sq += d * d;
        }
        total += w * row_sq;
    }
    Ok(total)
}

/// Reusable F-step system `(I + α·D_w + λ·L) F = (I + α·D_w) Y`.
///
/// The matrix is constant across alternation rounds, so it is factored once
/// (dense LU up to [`DENSE_DIRECT_LIMIT`]) and reused; larger systems run
/// conjugate gradients warm-started from the previous scores.
struct FStepSystem {
    matrix: SparseSymmetric,
    /// Row scaling a_i = 1 + α·w_i applied to the right-hand side.
    scale: Vec<f64>,
    lu: Option<LuFactors>,
    tol: f64,
}

impl FStepSystem {
    fn new(lap: &SparseSymmetric, scale: Vec<f64>, lambda: f64, tol: f64) -> Result<Self> {
        let matrix = SparseSymmetric {
            n: lap.n,
            diag: lap.diag.iter().zip(&scale).map(|(l, a)| a + lambda * l).collect(),
            off: lap.off.iter().map(|&(i, j, v)| (i, j, lambda * v)).collect(),
        };
        let lu = if lap.n <= DENSE_DIRECT_LIMIT {
            Some(LuFactors::factor(&matrix.to_dense())?)
        } else {
            None
        };
        Ok(Self { matrix, scale, lu, tol })
    }

    /// Solves all `k` columns; `f` carries the warm start in and the
    /// solution out.
    fn solve(&self, y: &[f64], k: usize, f: &mut [f64]) -> Result<()> {
        let n = self.matrix.n;
        let mut rhs = vec![0.0; n];
        let mut start = vec![0.0; n];
        for c in 0..k {
            for i in 0..n {
                rhs[i] = self.scale[i] * y[i * k + c];
            }
            if let Some(lu) = &self.lu {
                lu.solve_in_place(&mut rhs);
                for i in 0..n {
                    f[i * k + c] = rhs[i];
                }
            } else {
                for i in 0..n {
                    start[i] = f[i * k + c];
                }
                let solution = self.matrix.cg_solve(&rhs, &start, self.tol, 10 * n + 100)?;
                for i in 0..n {
                    f[i * k + c] = solution[i];
                }
            }
        }
        Ok(())
    }
}

/// Exact block minimization over `F`: solves the symmetric positive
/// definite system `(I + α·D_w + λ·L) F = (I + α·D_w) Y` column by column,
/// with `Y` the current labels.
pub fn f_step(labels: &LabelMatrix, lap: &Laplacian, config: &SolverConfig) -> Result<ScoreMatrix> {
    config.validate(labels.k)?;
    if lap.matrix.n != labels.n {
        return Err(Error::DimensionMismatch { expected: labels.n, found: lap.matrix.n });
    }
    let weights = severity_row_weights(labels, config);
    let scale: Vec<f64> = weights.iter().map(|w| 1.0 + config.alpha * w).collect();
    let system = FStepSystem::new(&lap.matrix, scale, config.lambda, config.tol)?;
    let mut f = vec![0.0; labels.n * labels.k];
    system.solve(&labels.current, labels.k, &mut f)?;
    ScoreMatrix::new(labels.n, labels.k, f)
}

fn y_update(
    f: &[f64],
    y0: &[f64],
    weights: &[f64],
    labeled: &[bool],
    config: &SolverConfig,
    k: usize,
    out: &mut [f64],
) {
    for (i, &w) in weights.iter().enumerate() {
        let a = 1.0 + config.alpha * w;
        if config.clamp_labeled && labeled[i] {
            out[i * k..(i + 1) * k].copy_from_slice(&y0[i * k..(i + 1) * k]);
        } else {
            let denom = a + config.gamma;
            for c in 0..k {
                out[i * k + c] = (a * f[i * k + c] + config.gamma * y0[i * k + c]) / denom;
            }
        }
    }
}

/// Exact block minimization over `Y`: the row-wise convex combination
/// `Y_i = ((1 + α·w_i)·F_i + γ·Y₀_i) / (1 + α·w_i + γ)`. With
/// `clamp_labeled` set, labeled rows are reset to `Y₀` instead. Returns a
/// label matrix with the same anchor and the updated current labels.
pub fn y_step(scores: &ScoreMatrix, labels: &LabelMatrix, config: &SolverConfig) -> Result<LabelMatrix> {
    config.validate(labels.k)?;
    if scores.n != labels.n || scores.k != labels.k {
        return Err(Error::DimensionMismatch { expected: labels.n * labels.k, found: scores.n * scores.k });
    }
    let weights = severity_row_weights(labels, config);
    let labeled: Vec<bool> = (0..labels.n).map(|i| labels.is_labeled(i)).collect();
    let mut current = vec![0.0; labels.n * labels.k];
    y_update(&scores.values, &labels.initial, &weights, &labeled, config, labels.k, &mut current);
    Ok(LabelMatrix { n: labels.n, k: labels.k, initial: labels.initial.clone(), current })
}

/// Alternates [`f_step`] and [`y_step`] from `Y = Y₀` until the max-abs
/// change in `Y` drops below `tol` or `max_iter` rounds have run.
///
/// Returns the final scores, the final label matrix, and a report. Hitting
/// `max_iter` is not an error: the report says `converged: false` and the
/// last iterate is still returned.
pub fn fit(
    graph: &SimilarityGraph,
    labels: &LabelMatrix,
    config: &SolverConfig,
) -> Result<(ScoreMatrix, LabelMatrix, SolveReport)> {
    config.validate(labels.k)?;
    if graph.n != labels.n {
        return Err(Error::DimensionMismatch { expected: labels.n, found: graph.n });
    }
    let lap = laplacian(graph, config.laplacian_kind);
    let weights = severity_row_weights(labels, config);
    let labeled: Vec<bool> = (0..labels.n).map(|i| labels.is_labeled(i)).collect();
    let scale: Vec<f64> = weights.iter().map(|w| 1.0 + config.alpha * w).collect();
    let system = FStepSystem::new(&lap.matrix, scale, config.lambda, config.tol)?;

    let n = labels.n;
    let k = labels.k;
    let y0 = &labels.initial;
    let mut y = y0.clone();
    let mut y_next = vec![0.0; n * k];
    let mut f = vec![0.0; n * k];
    let mut column = vec![0.0; n];
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut converged = false;

    for _ in 0..config.max_iter {
        system.solve(&y, k, &mut f)?;
        y_update(&f, y0, &weights, &labeled, config, k, &mut y_next);
        residual = y
            .iter()
            .zip(&y_next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        core::mem::swap(&mut y, &mut y_next);
        iterations += 1;
        trace.push(objective_value(&f, &y, y0, &weights, &lap.matrix, config, k, &mut column));
        if residual < config.tol {
            converged = true;
            break;
        }
    }

    let scores = ScoreMatrix::new(n, k, f)?;
    let final_labels = LabelMatrix { n, k, initial: y0.clone(), current: y };
    let report = SolveReport { iterations, converged, final_residual: residual, objective_trace: trace };
    Ok((scores, final_labels, report))
}

/// Dense closed-form solution of the alternation's fixed point, for
/// checking [`fit`] against an independent computation.
///
/// With `a_i = 1 + α·w_i`, `A = D_a + λL`, and `B = A⁻¹·D_a`, the fixed
/// point satisfies `Y* = D_a/(D_a + γ)·B·Y* + γ/(D_a + γ)·Y₀` row-wise
/// (clamped rows instead satisfy `Y*_i = Y₀_i`), and `F* = B·Y*`. Both
/// linear systems are solved by LU factorization.
pub fn fixed_point_oracle(
    graph: &SimilarityGraph,
    labels: &LabelMatrix,
    config: &SolverConfig,
) -> Result<ScoreMatrix> {
    config.validate(labels.k)?;
    if graph.n != labels.n {
        return Err(Error::DimensionMismatch { expected: labels.n, found: graph.n });
    }
    let n = labels.n;
    let k = labels.k;
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge { n, limit: ORACLE_LIMIT });
    }
    let lap = laplacian(graph, config.laplacian_kind);
    let weights = severity_row_weights(labels, config);
    let labeled: Vec<bool> = (0..n).map(|i| labels.is_labeled(i)).collect();
    let a: Vec<f64> = weights.iter().map(|w| 1.0 + config.alpha * w).collect();

    let mut system = lap.matrix.to_dense();
    for (r, &ar) in a.iter().enumerate() {
        for c in 0..n {
            *system.at_mut(r, c) *= config.lambda;
        }
        *system.at_mut(r, r) += ar;
    }
    let lu_a = LuFactors::factor(&system)?;

    // B = A⁻¹·D_a, column by column.
    let mut b = DenseMatrix::zeros(n, n);
    let mut rhs = vec![0.0; n];
    for j in 0..n {
        rhs.fill(0.0);
        rhs[j] = a[j];
        lu_a.solve_in_place(&mut rhs);
        for (i, &v) in rhs.iter().enumerate() {
            *b.at_mut(i, j) = v;
        }
    }

    // M·Y* = R with M = I − D_a/(D_a+γ)·B on free rows, identity on
    // clamped rows.
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        if config.clamp_labeled && labeled[i] {
            *m.at_mut(i, i) = 1.0;
        } else {
            let t = a[i] / (a[i] + config.gamma);
            for j in 0..n {
                *m.at_mut(i, j) = -t * b.at(i, j);
            }
            *m.at_mut(i, i) += 1.0;
        }
    }
    let lu_m = LuFactors::factor(&m)?;

    let mut y_star = vec![0.0; n * k];
    for c in 0..k {
        for i in 0..n {
            rhs[i] = if config.clamp_labeled && labeled[i] {
                labels.initial[i * k + c]
            } else {
                config.gamma / (a[i] + config.gamma) * labels.initial[i * k + c]
            };
        }
        lu_m.solve_in_place(&mut rhs);
        for i in 0..n {
            y_star[i * k + c] = rhs[i];
        }
    }

    // F* = A⁻¹·D_a·Y*, reusing the factorization of A.
    let mut f_star = vec![0.0; n * k];
    for c in 0..k {
        for i in 0..n {
            rhs[i] = a[i] * y_star[i * k + c];
        }
        lu_a.solve_in_place(&mut rhs);
        for i in 0..n {
            f_star[i * k + c] = rhs[i];
        }
    }
    ScoreMatrix::new(n, k, f_star)
}

/// Thresholded per-row predictions.
///
/// Multi-class rows take the argmax (ties to the lowest class index);
/// two-class rows are normalized to `p = F_i1 / (F_i0 + F_i1)` and predict
/// class 1 iff `p >= threshold`. A row with no evidence (all zeros; for two
/// classes, zero sum) is indeterminate.
pub fn predict(
    scores: &ScoreMatrix,
    catalog: &ClassCatalog,
    config: &SolverConfig,
) -> Result<Vec<RowPrediction>> {
    if catalog.len() != scores.k {
        return Err(Error::DimensionMismatch { expected: scores.k, found: catalog.len() });
    }
    if !config.threshold.is_finite() || config.threshold <= 0.0 || config.threshold >= 1.0 {
        return Err(Error::Config("threshold must lie in (0, 1)"));
    }
    let mut out = Vec::with_capacity(scores.n);
    for i in 0..scores.n {
        let row = scores.row(i);
        if scores.k == 2 {
            let sum = row[0] + row[1];
            if sum == 0.0 {
                out.push(RowPrediction { class: None, positive_score: None });
            } else {
                let p = row[1] / sum;
                let class = usize::from(p >= config.threshold);
                out.push(RowPrediction { class: Some(class), positive_score: Some(p) });
            }
        } else if row.iter().all(|&v| v == 0.0) {
            out.push(RowPrediction { class: None, positive_score: None });
        } else {
            out.push(RowPrediction { class: Some(argmax(row)), positive_score: None });
        }
    }
    Ok(out)
}
