//! The coupled homogeneous Sylvester system `A_ij X_j = X_i B_ij`.
//!
//! Unknowns are the column-major vectorisations of `X_1, ..., X_K` stacked in
//! index order. Row block `(i, j)` holds the column-major vectorisation of
//! `A_ij X_j - X_i B_ij`, so the operator is
//! `(I ⊗ A_ij)` on `vec X_j` minus `(B_ij^T ⊗ I)` on `vec X_i`.

mod classify;
mod propagation;

pub use classify::{
    audit_hypotheses, classify_solution, dichotomy_report, AuditOptions, BlockStatus, DichotomyReport,
    FamilyAudit, Hypothesis, HypothesisAudit, SchurClassification, SolutionFinding, ZeroPattern, TheoremCheck, TheoremKind, Tri, NONSINGULAR_MARGIN,
};
pub use propagation::{block_range_kernel, propagation_check, PropagationReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::CoupledFamily;
use crate::linalg::{rank_and_kernel, TolerancePolicy};
use crate::matrix::Matrix;
use crate::report::EntryCodec;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct SylvesterSystem<T> {
    pub a: CoupledFamily<T>,
    pub b: CoupledFamily<T>,
    pub operator: Matrix<T>,
    unknown_offsets: Vec<usize>,
}

impl<T: Scalar> SylvesterSystem<T> {
    /// Shapes `(n_i, m_i)` of the unknown blocks.
    pub fn unknown_shapes(&self) -> Vec<(usize, usize)> {
        self.a.dims().iter().copied().zip(self.b.dims().iter().copied()).collect()
    }

    pub fn unknown_count(&self) -> usize {
        self.operator.cols()
    }

    pub fn stack(&self, x: &[Matrix<T>]) -> Result<Matrix<T>> {
        let shapes = self.unknown_shapes();
        if x.len() != shapes.len() {
            return Err(Error::IndexCountMismatch(shapes.len(), x.len()));
        }
        let mut v = Vec::with_capacity(self.unknown_count());
        for (i, (xi, &(n, m))) in x.iter().zip(&shapes).enumerate() {
            if xi.shape() != (n, m) {
                return Err(Error::Shape(format!("X_{} is {:?}, expected {n}x{m}", i + 1, xi.shape())));
            }
            v.extend(xi.vec_column_major());
        }
        Matrix::new(v.len(), 1, v)
    }

    pub fn unstack(&self, v: &[T]) -> Vec<Matrix<T>> {
        self.unknown_shapes()
            .iter()
            .zip(&self.unknown_offsets)
            .map(|(&(n, m), &o)| Matrix::from_column_major(n, m, &v[o..o + n * m]))
            .collect()
    }

    /// Blockwise residuals `A_ij X_j - X_i B_ij`, row-major over `(i, j)`.
    pub fn residual_blocks(&self, x: &[Matrix<T>]) -> Vec<Matrix<T>> {
        let k = self.a.k();
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                out.push(&(self.a.block(i, j) * &x[j]) - &(&x[i] * self.b.block(i, j)));
            }
        }
        out
    }

    /// `sqrt(sum ||R_ij||^2) / ((||A|| + ||B||) ||X||)`, zero for `X = 0`.
    pub fn relative_residual(&self, x: &[Matrix<T>]) -> f64 {
        let r: f64 = self.residual_blocks(x).iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt();
        let xn: f64 = x.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt();
        if xn == 0.0 {
            return 0.0;
        }
        let an = self.a.assemble().frobenius_norm();
        let bn = self.b.assemble().frobenius_norm();
        r / ((an + bn).max(f64::MIN_POSITIVE) * xn)
    }
}

pub fn build_system<T: Scalar>(a: &CoupledFamily<T>, b: &CoupledFamily<T>) -> Result<SylvesterSystem<T>> {
    if a.k() != b.k() {
        return Err(Error::IndexCountMismatch(a.k(), b.k()));
    }
    let k = a.k();
    let n = a.dims();
    let m = b.dims();
    let mut unknown_offsets = Vec::with_capacity(k);
    let mut acc = 0;
    for i in 0..k {
        unknown_offsets.push(acc);
        acc += n[i] * m[i];
    }
    let cols = acc;
    let rows: usize = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| n[i] * m[j]).sum();
    let mut op = Matrix::<T>::zeros(rows, cols);
    let mut row0 = 0;
    for i in 0..k {
        for j in 0..k {
            let aij = a.block(i, j);
            let bij = b.block(i, j);
            for c in 0..m[j] {
                for r in 0..n[i] {
                    let row = row0 + c * n[i] + r;
                    // (A_ij X_j)[r, c] = sum_s A_ij[r, s] X_j[s, c]
                    for s in 0..n[j] {
                        if !aij[(r, s)].is_zero() {
                            let col = unknown_offsets[j] + c * n[j] + s;
                            op[(row, col)] = op[(row, col)].clone() + aij[(r, s)].clone();
                        }
                    }
                    // (X_i B_ij)[r, c] = sum_t X_i[r, t] B_ij[t, c]
                    for t in 0..m[i] {
                        if !bij[(t, c)].is_zero() {
                            let col = unknown_offsets[i] + t * n[i] + r;
                            op[(row, col)] = op[(row, col)].clone() - bij[(t, c)].clone();
                        }
                    }
                }
            }
            row0 += n[i] * m[j];
        }
    }
    Ok(SylvesterSystem { a: a.clone(), b: b.clone(), operator: op, unknown_offsets })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpace<T> {
    /// Each element is one solution `(X_1, ..., X_K)`.
    pub basis: Vec<Vec<Matrix<T>>>,
    pub dimension: usize,
    /// Relative residual of each basis element.
    pub residuals: Vec<f64>,
}

impl<T: EntryCodec> Serialize for SolutionSpace<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound(serialize = "T: EntryCodec"))]
        struct Repr<'a, T> {
            dimension: usize,
            basis: &'a [Vec<Matrix<T>>],
            residuals: &'a [f64],
        }
        Repr { dimension: self.dimension, basis: &self.basis, residuals: &self.residuals }.serialize(s)
    }
}

/// Kernel of the operator, unstacked into block lists.
pub fn solve<T: Scalar>(sys: &SylvesterSystem<T>, pol: &TolerancePolicy) -> SolutionSpace<T> {
    if sys.unknown_count() == 0 {
        return SolutionSpace { basis: Vec::new(), dimension: 0, residuals: Vec::new() };
    }
    let rk = rank_and_kernel(&sys.operator, pol);
    let mut basis = Vec::with_capacity(rk.kernel.cols());
    let mut residuals = Vec::with_capacity(rk.kernel.cols());
    for c in 0..rk.kernel.cols() {
        let x = sys.unstack(&rk.kernel.column(c));
        residuals.push(sys.relative_residual(&x));
        basis.push(x);
    }
    SolutionSpace { dimension: basis.len(), basis, residuals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::QFamily;
    use crate::matrix::QMatrix;

    #[test]
    fn operator_shape() {
        let a = QFamily::zeros(vec![2, 2]);
        let sys = build_system(&a, &a).unwrap();
        assert_eq!(sys.operator.shape(), (16, 8));
    }

    #[test]
    fn identity_solves_equal_families() {
        let a = QFamily::from_fn(vec![2, 1], |i, j| {
            QMatrix::from_fn([2, 1][i], [2, 1][j], |r, c| crate::scalar::rational((r + 2 * c + 3 * i + j) as i64 - 2, 1))
        })
        .unwrap();
        let sys = build_system(&a, &a).unwrap();
        let x = vec![QMatrix::identity(2), QMatrix::identity(1)];
        let v = sys.stack(&x).unwrap();
        assert!((&sys.operator * &v).is_zero_within(0.0));
        let sol = solve(&sys, &TolerancePolicy::default());
        assert!(sol.dimension >= 1);
    }

    #[test]
    fn mismatched_index_counts() {
        assert!(build_system(&QFamily::zeros(vec![1]), &QFamily::zeros(vec![1, 1])).is_err());
    }
}
