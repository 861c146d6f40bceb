use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::CFamily;
use crate::linalg::TolerancePolicy;
use crate::matrix::CMatrix;

/// Largest `N` accepted without an explicit budget.
pub const DEFAULT_BURNSIDE_MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurnsideCertificate {
    pub irreducible: bool,
    /// Dimension of the algebra generated by the block projections and the
    /// assembled matrix.
    pub algebra_dim: usize,
    /// `N^2`.
    pub full_dim: usize,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Span of all words in `P_1, ..., P_K` and `A` (the assembled family).
/// The family is coupled irreducible over the complex numbers iff this
/// algebra is all of `M_N`.
pub fn coupled_irreducible_burnside(
    f: &CFamily,
    pol: &TolerancePolicy,
    max_dim: Option<usize>,
) -> Result<BurnsideCertificate> {
    let n = f.total_dim();
    let limit = max_dim.unwrap_or(DEFAULT_BURNSIDE_MAX_DIM);
    if n > limit {
        return Err(Error::BudgetExceeded(format!("algebra span for N = {n} exceeds the limit N <= {limit}")));
    }
    let full_dim = n * n;
    let mut gens: Vec<CMatrix> = Vec::new();
    let off = f.offsets();
    if f.k() > 1 {
        for (i, &d) in f.dims().iter().enumerate() {
            let mut p = CMatrix::zeros(n, n);
            for r in off[i]..off[i] + d {
                p[(r, r)] = Complex64::new(1.0, 0.0);
            }
            gens.push(p);
        }
    }
    let a = f.assemble();
    let an = a.frobenius_norm();
    if an > pol.equality_atol {
        gens.push(a.scale(&Complex64::new(1.0 / an, 0.0)));
    }

    // orthonormal basis of the algebra, stored as column-major vectors
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let id = CMatrix::identity(n);
    let mut queue = std::collections::VecDeque::new();
    let add = |basis: &mut Vec<Vec<Complex64>>, m: &CMatrix| -> Option<CMatrix> {
        let mut v = m.vec_column_major();
        let n0 = norm(&v);
        if n0 == 0.0 {
            return None;
        }
        for _ in 0..2 {
            for b in basis.iter() {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let r = norm(&v);
        if r <= pol.subspace_rtol * n0 {
            return None;
        }
        for x in v.iter_mut() {
            *x /= r;
        }
        let out = CMatrix::from_column_major(n, n, &v);
        basis.push(v);
        Some(out)
    };
    if let Some(e) = add(&mut basis, &id) {
        queue.push_back(e);
    }
    while let Some(e) = queue.pop_front() {
        if basis.len() == full_dim {
            break;
        }
        for g in &gens {
            if let Some(new) = add(&mut basis, &(g * &e)) {
                queue.push_back(new);
            }
        }
    }
    let algebra_dim = basis.len();
    Ok(BurnsideCertificate { irreducible: algebra_dim == full_dim, algebra_dim, full_dim })
}
