//! One-sided Jacobi singular value decomposition for complex matrices and the
//! floating-point rank, span and containment routines built on it.

use num_complex::Complex64;

use super::{Containment, RankKernel, TolerancePolicy};
use crate::matrix::{CMatrix, Matrix};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `M = U diag(s) V*` with `s` sorted descending.
///
/// `u` has the same shape as `M`; columns belonging to zero singular values are zero.
/// `v` is square and unitary.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

/// Unitary `G` with `G* [[a, b], [conj(b), d]] G` diagonal.
pub(crate) fn hermitian_2x2_rotation(a: f64, b: Complex64, d: f64) -> [[Complex64; 2]; 2] {
    let beta = b.norm();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if beta == 0.0 {
        return [[one, zero], [zero, one]];
    }
    let phase = (b / beta).conj();
    let tau = (d - a) / (2.0 * beta);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [phase * (-s), phase * c],
    ]
}

/// Right-multiply columns `p`, `q` of `m` by the 2x2 matrix `g`.
pub(crate) fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, g: &[[Complex64; 2]; 2]) {
    for k in 0..m.rows() {
        let xp = m[(k, p)];
        let xq = m[(k, q)];
        m[(k, p)] = xp * g[0][0] + xq * g[1][0];
        m[(k, q)] = xp * g[0][1] + xq * g[1][1];
    }
}

pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = CMatrix::identity(cols);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for k in 0..rows {
                    let a = w[(k, p)];
                    let b = w[(k, q)];
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a.conj() * b;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() < f64::MIN_POSITIVE {
                    continue;
                }
                let g = hermitian_2x2_rotation(alpha, gamma, beta);
                rotate_columns(&mut w, p, q, &g);
                rotate_columns(&mut v, p, q, &g);
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = (0..cols)
        .map(|j| (j, (0..rows).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt()))
        .collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let singular_values: Vec<f64> = order.iter().map(|&(_, s)| s).collect();
    let u = Matrix::from_fn(rows, cols, |i, j| {
        let (src, s) = order[j];
        if s > 0.0 {
            w[(i, src)] / s
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v = Matrix::from_fn(cols, cols, |i, j| v[(i, order[j].0)]);
    Svd { singular_values, u, v }
}

pub fn rank_and_kernel(m: &CMatrix, pol: &TolerancePolicy) -> RankKernel<Complex64> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return RankKernel { rank: 0, kernel: CMatrix::identity(cols) };
    }
    let d = svd(m);
    let smax = d.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = pol.rank_cutoff(rows, cols, smax);
    let rank = d.singular_values.iter().filter(|&&s| s > cutoff).count();
    let kernel_cols: Vec<usize> = (rank..cols).collect();
    RankKernel { rank, kernel: d.v.select_columns(&kernel_cols) }
}

/// Orthonormal basis of the column space.
///
/// Columns with norm at most `equality_atol` are discarded, the rest are
/// normalised, and singular values below `subspace_rtol` of the largest are
/// treated as zero.
pub fn range_basis(m: &CMatrix, pol: &TolerancePolicy) -> CMatrix {
    let rows = m.rows();
    let mut cols = Vec::new();
    for j in 0..m.cols() {
        let c = m.column(j);
        let n = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > pol.equality_atol {
            cols.push(c.into_iter().map(|x| x / n).collect::<Vec<_>>());
        }
    }
    if cols.is_empty() {
        return CMatrix::zeros(rows, 0);
    }
    let normalized = CMatrix::from_columns(rows, &cols);
    let d = svd(&normalized);
    let smax = d.singular_values[0];
    let keep: Vec<usize> = (0..d.singular_values.len())
        .filter(|&k| d.singular_values[k] > pol.subspace_rtol * smax)
        .collect();
    d.u.select_columns(&keep)
}

pub fn containment(big: &CMatrix, small: &CMatrix, pol: &TolerancePolicy) -> Containment {
    let q = range_basis(big, pol);
    let mut worst: f64 = 0.0;
    for j in 0..small.cols() {
        let s = small.column_matrix(j);
        let n = s.frobenius_norm();
        if n <= pol.equality_atol {
            continue;
        }
        let r = if q.cols() == 0 {
            1.0
        } else {
            let proj = &q * &(&q.adjoint() * &s);
            (&s - &proj).frobenius_norm() / n
        };
        worst = worst.max(r);
    }
    Containment { contained: worst <= pol.subspace_rtol, residual: worst }
}
