//! Rank, kernels, subspace comparison and the Hermitian eigensolver.
//!
//! Every routine is generic over [`Scalar`]. The exact backend decides ranks
//! by elimination and ignores tolerances. The floating backend uses a
//! singular value decomposition: a singular value counts toward the rank iff
//! it exceeds `max(rows, cols) * eps * sigma_max` (or `rank_rtol * sigma_max`
//! when set), and never below the absolute floor `rank_atol`.
//!
//! Subspace operations (spans, containment, intersections) on the floating
//! backend work with normalised vectors and a separate relative cutoff,
//! `subspace_rtol`, because the vectors they receive already carry roundoff
//! from earlier products.

pub mod eigen;
pub mod exact;
pub mod svd;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Matrix};
use crate::scalar::Scalar;

pub use eigen::{eigenvalues, hermitian_eigen, unitary_multiple_test, HermitianEigen, UnitaryMultiple};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TolerancePolicy {
    /// Relative singular-value cutoff; `None` means `max(rows, cols) * eps`.
    pub rank_rtol: Option<f64>,
    /// Absolute floor under the relative cutoff.
    pub rank_atol: f64,
    /// Absolute entrywise tolerance for equality tests.
    pub equality_atol: f64,
    /// Relative cutoff for spans and containment of normalised vectors.
    pub subspace_rtol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self { rank_rtol: None, rank_atol: 0.0, equality_atol: 1e-9, subspace_rtol: 1e-8 }
    }
}

impl TolerancePolicy {
    pub fn with_equality_atol(mut self, atol: f64) -> Self {
        self.equality_atol = atol;
        self
    }

    pub fn with_rank_atol(mut self, atol: f64) -> Self {
        self.rank_atol = atol;
        self
    }

    pub fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        let rtol = self.rank_rtol.unwrap_or(rows.max(cols) as f64 * f64::EPSILON);
        (rtol * sigma_max).max(self.rank_atol)
    }

    /// Policy whose rank rule is the subspace cutoff, for eliminations on
    /// matrices assembled from orthonormal bases.
    pub fn for_subspaces(&self) -> Self {
        Self { rank_rtol: Some(self.subspace_rtol), ..*self }
    }
}

#[derive(Debug, Clone)]
pub struct RankKernel<T> {
    pub rank: usize,
    /// Columns form a basis of the kernel (orthonormal on the floating backend).
    pub kernel: Matrix<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment {
    pub contained: bool,
    /// Largest relative distance of a column of the smaller basis from the
    /// larger subspace (exact backend: 0 or 1).
    pub residual: f64,
}

pub fn rank_and_kernel<T: Scalar>(m: &Matrix<T>, pol: &TolerancePolicy) -> RankKernel<T> {
    T::rank_and_kernel(m, pol)
}

pub fn rank<T: Scalar>(m: &Matrix<T>, pol: &TolerancePolicy) -> usize {
    T::rank_and_kernel(m, pol).rank
}

pub fn range_basis<T: Scalar>(m: &Matrix<T>, pol: &TolerancePolicy) -> Matrix<T> {
    T::range_basis(m, pol)
}

pub fn containment<T: Scalar>(big: &Matrix<T>, small: &Matrix<T>, pol: &TolerancePolicy) -> Result<Containment> {
    if big.rows() != small.rows() {
        return Err(Error::Shape(format!(
            "subspace bases live in different spaces ({} vs {} rows)",
            big.rows(),
            small.rows()
        )));
    }
    if small.cols() == 0 {
        return Ok(Containment { contained: true, residual: 0.0 });
    }
    Ok(T::containment(big, small, pol))
}

/// True iff every column of `small` lies in the column space of `big`.
pub fn subspace_contains<T: Scalar>(big: &Matrix<T>, small: &Matrix<T>, pol: &TolerancePolicy) -> Result<bool> {
    containment(big, small, pol).map(|c| c.contained)
}

/// Basis of the intersection of two column spaces.
pub fn intersection<T: Scalar>(u: &Matrix<T>, w: &Matrix<T>, pol: &TolerancePolicy) -> Result<Matrix<T>> {
    if u.rows() != w.rows() {
        return Err(Error::Shape("intersection of subspaces of different spaces".into()));
    }
    let u = range_basis(u, pol);
    let w = range_basis(w, pol);
    if u.cols() == 0 || w.cols() == 0 {
        return Ok(Matrix::zeros(u.rows(), 0));
    }
    let stacked = u.hstack(&(-&w));
    let rk = rank_and_kernel(&stacked, &pol.for_subspaces());
    let coeffs = rk.kernel.block(0, 0, u.cols(), rk.kernel.cols());
    Ok(range_basis(&(&u * &coeffs), pol))
}

/// Sum of two column spaces.
pub fn span_sum<T: Scalar>(u: &Matrix<T>, w: &Matrix<T>, pol: &TolerancePolicy) -> Matrix<T> {
    range_basis(&u.hstack(w), pol)
}

/// Ranks of a list of blocks sharing one scale: singular values below
/// `equality_atol * max_i ||X_i||_F` are treated as zero on the floating backend.
pub fn scaled_ranks<T: Scalar>(blocks: &[Matrix<T>], pol: &TolerancePolicy) -> Vec<usize> {
    let scale = blocks.iter().map(|b| b.frobenius_norm()).fold(0.0, f64::max);
    let p = pol.with_rank_atol(pol.rank_atol.max(pol.equality_atol * scale));
    blocks.iter().map(|b| rank(b, &p)).collect()
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn inverse<T: Scalar>(m: &Matrix<T>, pol: &TolerancePolicy) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if rank(m, pol) < n {
        return Err(Error::Singular(format!("{n}x{n} matrix is rank deficient")));
    }
    let mut a = m.hstack(&Matrix::identity(n));
    for col in 0..n {
        let p = (col..n)
            .filter(|&i| !a[(i, col)].is_zero())
            .max_by(|&x, &y| a[(x, col)].modulus().total_cmp(&a[(y, col)].modulus()))
            .ok_or_else(|| Error::Singular("zero pivot".into()))?;
        if p != col {
            for j in 0..2 * n {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(col, j)].clone();
                a[(col, j)] = tmp;
            }
        }
        let inv = T::one() / a[(col, col)].clone();
        for j in 0..2 * n {
            a[(col, j)] = a[(col, j)].clone() * inv.clone();
        }
        for i in 0..n {
            if i == col || a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            for j in 0..2 * n {
                let v = a[(i, j)].clone() - f.clone() * a[(col, j)].clone();
                a[(i, j)] = v;
            }
        }
    }
    Ok(a.block(0, n, n, n))
}

/// Extend independent columns `u` (of length `n`) to a nonsingular `n x n`
/// matrix by appending unit coordinate vectors.
pub fn complete_basis<T: Scalar>(u: &Matrix<T>, n: usize, pol: &TolerancePolicy) -> Matrix<T> {
    let mut t = range_basis(u, pol);
    if t.cols() == 0 {
        t = Matrix::zeros(n, 0);
    }
    for k in 0..n {
        if t.cols() == n {
            break;
        }
        let e = Matrix::unit(n, k);
        if !containment(&t, &e, pol).map(|c| c.contained).unwrap_or(false) {
            t = t.hstack(&e);
        }
    }
    t
}

/// Orthonormal basis of the orthogonal complement of the column space of `u`
/// inside `C^n`.
pub fn orthogonal_complement(u: &CMatrix, n: usize, pol: &TolerancePolicy) -> CMatrix {
    let q = range_basis(u, pol);
    if q.cols() == 0 {
        return CMatrix::identity(n);
    }
    let rk = rank_and_kernel(&q.adjoint(), &pol.for_subspaces());
    rk.kernel
}

/// Unitary matrix whose first columns are an orthonormal basis of `u`,
/// completed by Gram-Schmidt with column pivoting over the coordinate vectors.
pub fn unitary_completion(u: &CMatrix, n: usize, pol: &TolerancePolicy) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = {
        let q = range_basis(u, pol);
        (0..q.cols()).map(|j| q.column(j)).collect()
    };
    while cols.len() < n {
        // pick the coordinate vector with the largest component outside the current span
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for k in 0..n {
            let mut v: Vec<Complex64> = (0..n).map(|i| if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect();
            for _ in 0..2 {
                for q in &cols {
                    let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("n > 0");
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    CMatrix::from_columns(n, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QMatrix;
    use crate::scalar::GaussRational;

    fn nilpotent(n: usize) -> QMatrix {
        QMatrix::from_fn(n, n, |i, j| if j == i + 1 { GaussRational::one() } else { GaussRational::zero() })
    }

    #[test]
    fn nilpotent_rank_and_kernel() {
        let pol = TolerancePolicy::default();
        let rk = rank_and_kernel(&nilpotent(3), &pol);
        assert_eq!(rk.rank, 2);
        assert_eq!(rk.kernel, QMatrix::unit(3, 0));

        let f = rank_and_kernel(&nilpotent(3).to_c64(), &pol);
        assert_eq!(f.rank, 2);
        assert!((f.kernel[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let pol = TolerancePolicy::default();
        let rk = rank_and_kernel(&QMatrix::zeros(2, 2), &pol);
        assert_eq!(rk.rank, 0);
        assert_eq!(rk.kernel, QMatrix::identity(2));
        let f = rank_and_kernel(&CMatrix::zeros(2, 2), &pol);
        assert_eq!(f.rank, 0);
        assert_eq!(f.kernel.cols(), 2);
    }

    #[test]
    fn containment_examples() {
        let pol = TolerancePolicy::default();
        let e1 = QMatrix::unit(2, 0);
        let e2 = QMatrix::unit(2, 1);
        let arbitrary = QMatrix::from_i64_rows(&[&[3, -1], &[7, 2]]);
        assert!(subspace_contains(&QMatrix::identity(2), &arbitrary, &pol).unwrap());
        assert!(!subspace_contains(&e1, &e2, &pol).unwrap());
        let d = QMatrix::from_i64_rows(&[&[1], &[1]]);
        assert!(subspace_contains(&d, &d.scale(&GaussRational::from_i64(2)), &pol).unwrap());
        assert!(subspace_contains(&d.to_c64(), &d.scale(&GaussRational::from_i64(2)).to_c64(), &pol).unwrap());
        assert!(!subspace_contains(&e1.to_c64(), &e2.to_c64(), &pol).unwrap());
        assert!(subspace_contains(&e1, &QMatrix::unit(3, 0), &pol).is_err());
    }

    #[test]
    fn inverse_and_singularity() {
        let pol = TolerancePolicy::default();
        let m = QMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m, &pol).unwrap();
        assert_eq!(&m * &inv, QMatrix::identity(2));
        assert!(matches!(inverse(&nilpotent(2), &pol), Err(Error::Singular(_))));
        assert!(matches!(inverse(&nilpotent(2).to_c64(), &pol), Err(Error::Singular(_))));
    }

    #[test]
    fn intersections_and_complements() {
        let pol = TolerancePolicy::default();
        let u = QMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        let w = QMatrix::from_i64_rows(&[&[0, 0], &[1, 0], &[0, 1]]);
        let i = intersection(&u, &w, &pol).unwrap();
        assert_eq!(i.cols(), 1);
        assert!(subspace_contains(&QMatrix::unit(3, 1), &i, &pol).unwrap());
        let fi = intersection(&u.to_c64(), &w.to_c64(), &pol).unwrap();
        assert_eq!(fi.cols(), 1);

        let comp = orthogonal_complement(&u.to_c64(), 3, &pol);
        assert_eq!(comp.cols(), 1);
        assert!((comp[(2, 0)].norm() - 1.0).abs() < 1e-14);

        let t = unitary_completion(&QMatrix::from_i64_rows(&[&[1], &[1], &[0]]).to_c64(), 3, &pol);
        assert!((&t.adjoint() * &t).approx_eq(&CMatrix::identity(3), 1e-14));
    }
}
