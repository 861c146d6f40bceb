use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::CoupledFamily;
use crate::linalg::{containment, eigen::hermitian_deviation, exact, hermitian_eigen, svd::svd, TolerancePolicy};
use crate::matrix::Matrix;
use crate::report::complex_pair;
use crate::scalar::Scalar;

/// Range and kernel bases of `x`, singular values at most
/// `max(default cutoff, equality_atol * scale)` counted as zero.
pub fn block_range_kernel<T: Scalar>(x: &Matrix<T>, scale: f64, pol: &TolerancePolicy) -> (Matrix<T>, Matrix<T>) {
    let (rows, cols) = x.shape();
    if T::EXACT {
        return (exact::range_basis(x), exact::rank_and_kernel(x).kernel);
    }
    if rows == 0 || cols == 0 {
        return (Matrix::zeros(rows, 0), Matrix::identity(cols));
    }
    let d = svd(&x.to_c64());
    let smax = d.singular_values[0];
    let cutoff = pol.rank_cutoff(rows, cols, smax).max(pol.equality_atol * scale);
    let r = d.singular_values.iter().filter(|&&s| s > cutoff).count();
    let back = |m: Matrix<Complex64>| m.map(|z| T::from_c64(*z));
    let range = back(d.u.select_columns(&(0..r).collect::<Vec<_>>()));
    let kernel = back(d.v.select_columns(&(r..cols).collect::<Vec<_>>()));
    (range, kernel)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCheck {
    #[serde(serialize_with = "complex_pair")]
    pub alpha: Complex64,
    pub dims: Vec<usize>,
    pub residual: f64,
}

/// Containments forced on any solution: `B_ij(ker X_j) ⊆ ker X_i`,
/// `A_ij(range X_j) ⊆ range X_i`, and for `A = B` the eigenspace
/// containments `A_ij U_j(alpha) ⊆ U_i(alpha)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropagationReport {
    pub kernel_residual: f64,
    pub range_residual: f64,
    pub eigen: Vec<EigenCheck>,
    pub max_residual: f64,
    pub holds: bool,
}

fn max_containment<T: Scalar>(
    fam: &CoupledFamily<T>,
    spaces: &[Matrix<T>],
    pol: &TolerancePolicy,
) -> Result<(f64, bool)> {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (i, j, blk) in fam.blocks() {
        let c = containment(&spaces[i], &(blk * &spaces[j]), pol)?;
        worst = worst.max(c.residual);
        ok &= c.contained;
    }
    Ok((worst, ok))
}

fn eigen_candidates<T: Scalar>(x: &[Matrix<T>], scale: f64, pol: &TolerancePolicy) -> Vec<Complex64> {
    let atol = pol.equality_atol * scale.max(f64::MIN_POSITIVE);
    let mut out: Vec<Complex64> = Vec::new();
    let push = |z: Complex64, out: &mut Vec<Complex64>| {
        if !out.iter().any(|w| (w - z).norm() <= 1e3 * atol) {
            out.push(z);
        }
    };
    for xp in x {
        if !xp.is_square() || xp.frobenius_norm() <= atol {
            continue;
        }
        if let Some(a) = xp.scalar_multiple_of_identity(atol) {
            push(a.to_c64(), &mut out);
            continue;
        }
        let c = xp.to_c64();
        if hermitian_deviation(&c) <= atol {
            if let Ok(e) = hermitian_eigen(&c, &pol.with_equality_atol(atol.max(pol.equality_atol))) {
                for v in e.distinct(1e3 * atol) {
                    push(Complex64::new(v, 0.0), &mut out);
                }
            }
            continue;
        }
        let n = c.rows();
        let upper = (0..n).all(|i| (0..i).all(|j| c[(i, j)].norm() <= atol));
        let lower = (0..n).all(|i| (i + 1..n).all(|j| c[(i, j)].norm() <= atol));
        if upper || lower {
            for i in 0..n {
                push(c[(i, i)], &mut out);
            }
        }
    }
    out
}

pub fn propagation_check<T: Scalar>(
    a: &CoupledFamily<T>,
    b: &CoupledFamily<T>,
    x: &[Matrix<T>],
    pol: &TolerancePolicy,
) -> Result<PropagationReport> {
    if a.k() != b.k() || x.len() != a.k() {
        return Err(Error::IndexCountMismatch(a.k(), x.len()));
    }
    let scale = x.iter().map(Matrix::frobenius_norm).fold(0.0, f64::max);
    let (ranges, kernels): (Vec<_>, Vec<_>) = x.iter().map(|xi| block_range_kernel(xi, scale, pol)).unzip();
    let (kernel_residual, k_ok) = max_containment(b, &kernels, pol)?;
    let (range_residual, r_ok) = max_containment(a, &ranges, pol)?;
    let mut eigen = Vec::new();
    let mut e_ok = true;
    let same = a.dims() == b.dims() && a.blocks().zip(b.blocks()).all(|((_, _, p), (_, _, q))| p.approx_eq(q, pol.equality_atol));
    if same && scale > 0.0 {
        for alpha in eigen_candidates(x, scale, pol) {
            let al = T::from_c64(alpha);
            let spaces: Vec<Matrix<T>> = x
                .iter()
                .map(|xi| {
                    let shifted = xi - &Matrix::identity(xi.rows()).scale(&al);
                    block_range_kernel(&shifted, scale, pol).1
                })
                .collect();
            let (res, ok) = max_containment(a, &spaces, pol)?;
            e_ok &= ok;
            eigen.push(EigenCheck { alpha, dims: spaces.iter().map(Matrix::cols).collect(), residual: res });
        }
    }
    let max_residual = eigen.iter().map(|e| e.residual).fold(kernel_residual.max(range_residual), f64::max);
    Ok(PropagationReport { kernel_residual, range_residual, eigen, max_residual, holds: k_ok && r_ok && e_ok })
}
