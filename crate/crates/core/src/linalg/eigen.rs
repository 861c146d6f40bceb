//! Hermitian eigendecomposition by cyclic Jacobi rotations, and the
//! scalar-times-unitary factorisation.

use num_complex::Complex64;
use serde::Serialize;

use super::svd::{hermitian_2x2_rotation, rotate_columns};
use super::TolerancePolicy;
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Matrix};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is an eigenvector for `eigenvalues[k]`.
    pub basis: CMatrix,
}

impl HermitianEigen {
    /// Orthonormal basis of the eigenspace for eigenvalues within `atol` of `alpha`.
    pub fn eigenspace(&self, alpha: f64, atol: f64) -> CMatrix {
        let cols: Vec<usize> = (0..self.eigenvalues.len())
            .filter(|&k| (self.eigenvalues[k] - alpha).abs() <= atol)
            .collect();
        self.basis.select_columns(&cols)
    }

    /// Distinct eigenvalues, merging those closer than `atol`.
    pub fn distinct(&self, atol: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &e in &self.eigenvalues {
            if out.last().is_none_or(|&l| (l - e).abs() > atol) {
                out.push(e);
            }
        }
        out
    }
}

pub fn hermitian_deviation(h: &CMatrix) -> f64 {
    (h - &h.adjoint()).max_abs()
}

pub fn hermitian_eigen(h: &CMatrix, pol: &TolerancePolicy) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::NotSquare(h.rows(), h.cols()));
    }
    let n = h.rows();
    let dev = hermitian_deviation(h);
    if dev > pol.equality_atol * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let half = Complex64::new(0.5, 0.0);
    let mut a = Matrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * half);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale || off < f64::MIN_POSITIVE {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].norm() < f64::MIN_POSITIVE {
                    continue;
                }
                let g = hermitian_2x2_rotation(a[(p, p)].re, a[(p, q)], a[(q, q)].re);
                rotate_columns(&mut a, p, q, &g);
                for k in 0..n {
                    let xp = a[(p, k)];
                    let xq = a[(q, k)];
                    a[(p, k)] = g[0][0].conj() * xp + g[1][0].conj() * xq;
                    a[(q, k)] = g[0][1].conj() * xp + g[1][1].conj() * xq;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, &g);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re).then(x.cmp(&y)));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let basis = v.select_columns(&order);
    Ok(HermitianEigen { eigenvalues, basis })
}

/// `S = alpha * U` with `alpha >= 0` real and `U` unitary.
#[derive(Debug, Clone, Serialize)]
pub struct UnitaryMultiple {
    pub alpha: f64,
    /// The scalar `lambda = alpha^2` with `S S* = lambda I`.
    pub lambda: f64,
    /// `||S S* - lambda I||_F`.
    pub deviation: f64,
    #[serde(skip)]
    pub unitary: CMatrix,
}

/// Returns the factorisation iff `S S*` is a positive scalar matrix, the
/// deviation measured relative to that scalar and compared with `equality_atol`.
pub fn unitary_multiple_test(s: &CMatrix, pol: &TolerancePolicy) -> Result<Option<UnitaryMultiple>> {
    if !s.is_square() {
        return Err(Error::NotSquare(s.rows(), s.cols()));
    }
    let n = s.rows();
    if n == 0 {
        return Ok(None);
    }
    let p = s * &s.adjoint();
    let lambda = p.trace().re / n as f64;
    if lambda <= 0.0 {
        return Ok(None);
    }
    let deviation = (&p - &CMatrix::identity(n).scale(&Complex64::new(lambda, 0.0))).frobenius_norm();
    if deviation > pol.equality_atol * lambda {
        return Ok(None);
    }
    let alpha = lambda.sqrt();
    let unitary = s.scale(&Complex64::new(1.0 / alpha, 0.0));
    Ok(Some(UnitaryMultiple { alpha, lambda, deviation, unitary }))
}

const QR_ITERS_PER_EIGENVALUE: usize = 60;

/// Apply the rotation `[[conj(c), conj(s)], [-s, c]]` to rows `p`, `p + 1`
/// from the left and its adjoint to columns `p`, `p + 1` from the right.
fn similarity_rotate(h: &mut CMatrix, p: usize, c: Complex64, s: Complex64) {
    let n = h.rows();
    for j in 0..n {
        let (u, v) = (h[(p, j)], h[(p + 1, j)]);
        h[(p, j)] = c.conj() * u + s.conj() * v;
        h[(p + 1, j)] = -s * u + c * v;
    }
    for i in 0..n {
        let (u, v) = (h[(i, p)], h[(i, p + 1)]);
        h[(i, p)] = u * c + v * s;
        h[(i, p + 1)] = -u * s.conj() + v * c.conj();
    }
}

fn givens(x: Complex64, y: Complex64) -> Option<(Complex64, Complex64)> {
    let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
    (r > 0.0).then(|| (x / r, y / r))
}

/// Eigenvalues of a general square matrix: Hessenberg reduction followed
/// by single-shift QR with Wilkinson shifts and deflation.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        for i in (k + 2..n).rev() {
            if h[(i, k)].norm() == 0.0 {
                continue;
            }
            if let Some((c, s)) = givens(h[(i - 1, k)], h[(i, k)]) {
                similarity_rotate(&mut h, i - 1, c, s);
                h[(i, k)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut hi = n;
    let mut iters = 0;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        let mut l = hi - 1;
        while l > 0 {
            let small = f64::EPSILON * (h[(l, l)].norm() + h[(l - 1, l - 1)].norm()).max(f64::MIN_POSITIVE);
            if h[(l, l - 1)].norm() <= small {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            out.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > QR_ITERS_PER_EIGENVALUE {
            return Err(Error::BudgetExceeded("eigenvalue iteration did not converge".into()));
        }
        let (p, q, r, d) = (h[(hi - 2, hi - 2)], h[(hi - 2, hi - 1)], h[(hi - 1, hi - 2)], h[(hi - 1, hi - 1)]);
        let mu = if iters % 11 == 10 {
            d + Complex64::new(h[(hi - 1, hi - 2)].norm(), 0.0)
        } else {
            let half = (p - d) * 0.5;
            let disc = (half * half + q * r).sqrt();
            let (m1, m2) = ((p + d) * 0.5 + disc, (p + d) * 0.5 - disc);
            if (m1 - d).norm() <= (m2 - d).norm() { m1 } else { m2 }
        };
        // explicit QR step on the active window [l, hi)
        for t in l..hi {
            h[(t, t)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for t in l..hi - 1 {
            let rot = givens(h[(t, t)], h[(t + 1, t)]);
            if let Some((c, s)) = rot {
                for j in t..hi {
                    let (u, v) = (h[(t, j)], h[(t + 1, j)]);
                    h[(t, j)] = c.conj() * u + s.conj() * v;
                    h[(t + 1, j)] = -s * u + c * v;
                }
            }
            rots.push(rot);
        }
        for (t, rot) in (l..hi - 1).zip(rots) {
            if let Some((c, s)) = rot {
                for i in l..(t + 2).min(hi) {
                    let (u, v) = (h[(i, t)], h[(i, t + 1)]);
                    h[(i, t)] = u * c + v * s;
                    h[(i, t + 1)] = -u * s.conj() + v * c.conj();
                }
            }
        }
        for t in l..hi {
            h[(t, t)] += mu;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn general_eigenvalues_of_a_similar_triangular_matrix() {
        let t = CMatrix::from_fn(4, 4, |i, j| if i == j { Complex64::new(i as f64 + 1.0, 0.5) } else if i < j { Complex64::new(1.0, -1.0) } else { Complex64::new(0.0, 0.0) });
        let p = CMatrix::from_fn(4, 4, |i, j| Complex64::new(if i == j { 3.0 } else { (i * 4 + j) as f64 * 0.1 }, (i + 2 * j) as f64 * 0.05));
        let m = &(&p * &t) * &crate::linalg::inverse(&p, &TolerancePolicy::default()).unwrap();
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (k, z) in ev.iter().enumerate() {
            assert!((z - Complex64::new(k as f64 + 1.0, 0.5)).norm() < 1e-9, "{z}");
        }
        let rot = CMatrix::from_fn(2, 2, |i, j| Complex64::new([[0.0, -1.0], [1.0, 0.0]][i][j], 0.0));
        let mut ev = eigenvalues(&rot).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] + Complex64::i()).norm() < 1e-12 && (ev[1] - Complex64::i()).norm() < 1e-12);
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = hermitian_eigen(&CMatrix::identity(3), &TolerancePolicy::default()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_already_decomposed() {
        let h = CMatrix::from_rows(vec![vec![c(2.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap();
        let e = hermitian_eigen(&h, &TolerancePolicy::default()).unwrap();
        assert_eq!(e.eigenvalues, vec![2.0, 1.0]);
        assert_eq!(e.basis, CMatrix::identity(2));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let h = CMatrix::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]).unwrap();
        assert!(matches!(hermitian_eigen(&h, &TolerancePolicy::default()), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn unitary_multiples() {
        let pol = TolerancePolicy::default();
        let three = CMatrix::identity(2).scale(&c(3.0));
        let f = unitary_multiple_test(&three, &pol).unwrap().unwrap();
        assert!((f.alpha - 3.0).abs() < 1e-15);
        assert!(f.unitary.approx_eq(&CMatrix::identity(2), 1e-15));

        let nil = CMatrix::from_rows(vec![vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]).unwrap();
        assert!(unitary_multiple_test(&nil, &pol).unwrap().is_none());

        let t = PI / 3.0;
        let rot = CMatrix::from_rows(vec![vec![c(t.cos()), c(-t.sin())], vec![c(t.sin()), c(t.cos())]]).unwrap();
        let f = unitary_multiple_test(&rot.scale(&c(2.0)), &pol).unwrap().unwrap();
        assert!((f.alpha - 2.0).abs() < 1e-14);
        assert!(f.unitary.approx_eq(&rot, 1e-14));

        assert!(matches!(unitary_multiple_test(&CMatrix::zeros(2, 3), &pol), Err(Error::NotSquare(2, 3))));
    }
}
