//! Minimal dense and sparse linear algebra for the label-propagation solver.
//!
//! Two deliberately independent solve routes live here. The sparse
//! conjugate-gradient path drives the production fit loop; the dense LU path
//! backs the direct fixed-point oracle and the small-problem fast path. Both
//! are hand-rolled: problem sizes stay modest (a few hundred to a thousand
//! nodes) and the two routes must not share a factorization backend, since
//! each one is the check on the other.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Symmetric sparse matrix stored as a diagonal plus strictly-upper entries.
///
/// `off` holds `(i, j, value)` with `i < j`; the mirrored lower entry is
/// implied. Rows touching no off-diagonal entry are legal (isolated nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    pub n: usize,
    pub diag: Vec<f64>,
    pub off: Vec<(usize, usize, f64)>,
}

impl SparseSymmetric {
    pub fn diagonal(diag: Vec<f64>) -> Self {
        Self { n: diag.len(), diag, off: Vec::new() }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            y[i] = self.diag[i] * x[i];
        }
        for &(i, j, v) in &self.off {
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
    }

    /// `x' A x`, evaluated against the sparse structure directly.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut acc: f64 = self.diag.iter().zip(x).map(|(d, v)| d * v * v).sum();
        for &(i, j, v) in &self.off {
            acc += 2.0 * v * x[i] * x[j];
        }
        acc
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            *m.at_mut(i, i) = self.diag[i];
        }
        for &(i, j, v) in &self.off {
            *m.at_mut(i, j) += v;
            *m.at_mut(j, i) += v;
        }
        m
    }

    /// Conjugate gradients from `x0`, stopping once the 2-norm residual drops
    /// to `rel_tol * ||b||`. A zero right-hand side returns an exact zero
    /// solution so structurally empty blocks stay empty. Errors if the cap is
    /// exhausted, carrying the residual reached.
    pub fn cg_solve(&self, b: &[f64], x0: &[f64], rel_tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        debug_assert_eq!(x0.len(), n);

        let b_norm = libm::sqrt(dot(b, b));
        if b_norm == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let threshold = rel_tol * b_norm;

        let mut x = x0.to_vec();
        let mut ax = vec![0.0; n];
        self.matvec(&x, &mut ax);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
        let mut p = r.clone();
        let mut rs = dot(&r, &r);
        let mut ap = vec![0.0; n];

        for _ in 0..max_iter {
            if libm::sqrt(rs) <= threshold {
                return Ok(x);
            }
            self.matvec(&p, &mut ap);
            let p_ap = dot(&p, &ap);
            if p_ap <= 0.0 {
                // Only reachable with a non-positive-definite system.
                return Err(Error::LinearSolveStalled { residual: libm::sqrt(rs) });
            }
            let alpha = rs / p_ap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rs_next = dot(&r, &r);
            let beta = rs_next / rs;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
            }
            rs = rs_next;
        }
        if libm::sqrt(rs) <= threshold {
            return Ok(x);
        }
        Err(Error::LinearSolveStalled { residual: libm::sqrt(rs) })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        &mut self.data[r * self.n_cols + c]
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_cols);
        debug_assert_eq!(y.len(), self.n_rows);
        for (row, out) in self.data.chunks_exact(self.n_cols).zip(y) {
            *out = dot(row, x);
        }
    }
}

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        assert_eq!(m.n_rows, m.n_cols, "LU needs a square matrix");
        let n = m.n_rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_mag = libm::fabs(lu[k * n + k]);
            for i in (k + 1)..n {
                let mag = libm::fabs(lu[i * n + k]);
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag < f64::MIN_POSITIVE {
                return Err(Error::SingularSystem);
            }
            if pivot_row != k {
                for c in 0..n {
                    lu.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    /// Solves `A x = b`, writing the solution over `b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        let permuted: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&permuted);
        // Unit lower triangle.
        for i in 1..n {
            let row = &self.lu[i * n..i * n + i];
            b[i] -= dot(row, &b[..i]);
        }
        // Upper triangle.
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let acc = b[i] - dot(row, &b[i + 1..]);
            b[i] = acc / self.lu[i * n + i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn solve_dense(m: &DenseMatrix, b: &[f64]) -> Vec<f64> {
        let lu = LuFactors::factor(m).expect("factorization");
        let mut x = b.to_vec();
        lu.solve_in_place(&mut x);
        x
    }

    #[test]
    fn lu_solves_the_two_node_smoothing_system() {
        let mut a = DenseMatrix::zeros(2, 2);
        *a.at_mut(0, 0) = 2.0;
        *a.at_mut(0, 1) = -1.0;
        *a.at_mut(1, 0) = -1.0;
        *a.at_mut(1, 1) = 2.0;
        let x = solve_dense(&a, &[1.0, 0.0]);
        assert!((x[0] - 2.0 / 3.0).abs() < 1e-14);
        assert!((x[1] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn lu_pivots_past_a_zero_leading_entry() {
        let mut a = DenseMatrix::zeros(2, 2);
        *a.at_mut(0, 1) = 1.0;
        *a.at_mut(1, 0) = 1.0;
        let x = solve_dense(&a, &[2.0, 3.0]);
        assert_eq!(x, [3.0, 2.0]);
    }

    #[test]
    fn lu_rejects_a_singular_matrix() {
        let mut a = DenseMatrix::zeros(2, 2);
        *a.at_mut(0, 0) = 1.0;
        *a.at_mut(0, 1) = 1.0;
        *a.at_mut(1, 0) = 1.0;
        *a.at_mut(1, 1) = 1.0;
        match LuFactors::factor(&a) {
            Err(Error::SingularSystem) => {}
            other => panic!("expected a singular-system error, got {other:?}"),
        }
    }

    #[test]
    fn lu_recovers_a_known_solution_on_random_systems() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let n = 1 + rng.next_index(8);
            let mut a = DenseMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    *a.at_mut(r, c) = rng.next_f64() - 0.5;
                }
                // Diagonal dominance keeps the system comfortably regular.
                *a.at_mut(r, r) += n as f64;
            }
            let x_true: Vec<f64> = (0..n).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
            let mut b = vec![0.0; n];
            a.matvec(&x_true, &mut b);
            let x = solve_dense(&a, &b);
            for i in 0..n {
                assert!((x[i] - x_true[i]).abs() < 1e-10);
            }
        }
    }

    fn random_spd(rng: &mut SplitMix64, n: usize) -> SparseSymmetric {
        let mut m = SparseSymmetric {
            n,
            diag: (0..n).map(|_| 1.0 + rng.next_f64()).collect(),
            off: Vec::new(),
        };
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.next_f64() < 0.3 {
                    let w = rng.next_f64();
                    m.off.push((i, j, -w));
                    // Keep the matrix diagonally dominant, hence SPD.
                    m.diag[i] += w;
                    m.diag[j] += w;
                }
            }
        }
        m
    }

    #[test]
    fn cg_agrees_with_dense_lu_on_random_spd_systems() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..10 {
            let n = 3 + rng.next_index(30);
            let m = random_spd(&mut rng, n);
            let b: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
            let dense = solve_dense(&m.to_dense(), &b);
            let sparse = m.cg_solve(&b, &vec![0.0; n], 1e-12, 10 * n + 100).expect("cg");
            for i in 0..n {
                assert!((dense[i] - sparse[i]).abs() < 1e-8, "row {i}: {} vs {}", dense[i], sparse[i]);
            }
        }
    }

    #[test]
    fn cg_returns_exact_zeros_for_a_zero_rhs() {
        let mut rng = SplitMix64::new(3);
        let m = random_spd(&mut rng, 12);
        let x = m.cg_solve(&[0.0; 12], &[1.0; 12], 1e-10, 100).expect("cg");
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cg_reports_a_stall_with_the_residual_attached() {
        let mut rng = SplitMix64::new(21);
        let m = random_spd(&mut rng, 20);
        let b: Vec<f64> = (0..20).map(|_| rng.next_f64()).collect();
        match m.cg_solve(&b, &[0.0; 20], 1e-14, 1) {
            Err(Error::LinearSolveStalled { residual }) => assert!(residual > 0.0),
            other => panic!("expected a stall, got {other:?}"),
        }
    }

    #[test]
    fn sparse_matvec_matches_its_dense_image() {
        let mut rng = SplitMix64::new(8);
        let m = random_spd(&mut rng, 15);
        let x: Vec<f64> = (0..15).map(|_| rng.next_f64() - 0.5).collect();
        let mut y_sparse = vec![0.0; 15];
        m.matvec(&x, &mut y_sparse);
        let mut y_dense = vec![0.0; 15];
        m.to_dense().matvec(&x, &mut y_dense);
        for i in 0..15 {
            assert!((y_sparse[i] - y_dense[i]).abs() < 1e-12);
        }
        let quad = m.quadratic_form(&x);
        let via_matvec = x.iter().zip(&y_sparse).map(|(a, b)| a * b).sum::<f64>();
        assert!((quad - via_matvec).abs() < 1e-12);
    }
}
