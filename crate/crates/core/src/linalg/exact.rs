//! Gauss-Jordan elimination for the exact backend.

use super::{Containment, RankKernel, TolerancePolicy};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref<T: Scalar>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut r = m.clone();
    let (rows, cols) = r.shape();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                let tmp = r[(p, j)].clone();
                r[(p, j)] = r[(row, j)].clone();
                r[(row, j)] = tmp;
            }
        }
        let inv = T::one() / r[(row, col)].clone();
        for j in col..cols {
            r[(row, j)] = r[(row, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let f = r[(i, col)].clone();
            for j in col..cols {
                let v = r[(i, j)].clone() - f.clone() * r[(row, j)].clone();
                r[(i, j)] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

pub fn rank_and_kernel<T: Scalar>(m: &Matrix<T>) -> RankKernel<T> {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = Matrix::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        kernel[(f, k)] = T::one();
        for (row, &pc) in pivots.iter().enumerate() {
            kernel[(pc, k)] = -r[(row, f)].clone();
        }
    }
    RankKernel { rank: pivots.len(), kernel }
}

pub fn range_basis<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let (_, pivots) = rref(m);
    m.select_columns(&pivots)
}

/// Exact rank test on the concatenation; the residual is 0 or 1.
pub fn containment<T: Scalar>(big: &Matrix<T>, small: &Matrix<T>, _pol: &TolerancePolicy) -> Containment {
    let rb = rref(big).1.len();
    let rc = rref(&big.hstack(small)).1.len();
    let contained = rb == rc;
    Containment { contained, residual: if contained { 0.0 } else { 1.0 } }
}
