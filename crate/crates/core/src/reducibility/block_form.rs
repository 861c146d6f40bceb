use num_complex::Complex64;
use serde::Serialize;

use super::{verify_reducing, Strength, SubspaceFamily};
use crate::error::{Error, Result};
use crate::family::{CFamily, SimilarityWitness};
use crate::linalg::{complete_basis, orthogonal_complement, range_basis, rank, unitary_completion, TolerancePolicy};
use crate::matrix::CMatrix;

#[derive(Debug, Clone)]
pub struct BlockForm {
    pub witness: SimilarityWitness<Complex64>,
    pub transformed: CFamily,
    pub summary: BlockFormSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockFormSummary {
    pub dims: Vec<usize>,
    pub unitary: bool,
    pub full: bool,
    /// Largest modulus in the `(n_i - d_i) x d_j` lower-left regions.
    pub lower_left_max: f64,
    /// Largest modulus in the `d_i x (n_j - d_j)` upper-right regions (full form only).
    pub upper_right_max: Option<f64>,
}

fn region_max(m: &CMatrix, r0: usize, r1: usize, c0: usize, c1: usize) -> f64 {
    let mut best: f64 = 0.0;
    for r in r0..r1 {
        for c in c0..c1 {
            best = best.max(m[(r, c)].norm());
        }
    }
    best
}

fn orthonormal(b: &CMatrix, pol: &TolerancePolicy) -> CMatrix {
    range_basis(b, pol)
}

/// Changes basis so that the first `d_i` coordinates of index `i` span
/// `U_i`, making the lower-left `(n_i - d_i) x d_j` region of every block
/// vanish. With `full`, the trailing coordinates span an invariant
/// complement (supplied, or the orthogonal complement of a coupled-normal
/// family) and the upper-right region vanishes as well.
pub fn block_form_transform(
    f: &CFamily,
    u: &SubspaceFamily<Complex64>,
    unitary: bool,
    full: bool,
    complement: Option<&SubspaceFamily<Complex64>>,
    pol: &TolerancePolicy,
) -> Result<BlockForm> {
    let check = verify_reducing(f, u, pol)?;
    if check.strength == Strength::NotReducing {
        let worst = check.residuals.iter().filter(|r| !r.contained).map(|r| (r.i, r.j)).next();
        let (i, j) = worst.unwrap_or((0, 0));
        return Err(Error::NotReducing(format!("A_{}{} does not map U_{} into U_{}", i + 1, j + 1, j + 1, i + 1)));
    }
    let dims = f.dims().to_vec();
    let d = u.dims();

    let comp = if full {
        let w = match complement {
            Some(w) => w.clone(),
            None => {
                if !f.is_coupled_normal(pol).normal {
                    return Err(Error::NoComplement(
                        "family is not coupled normal and no complementary family was supplied".into(),
                    ));
                }
                SubspaceFamily::from_independent(
                    u.bases().iter().zip(&dims).map(|(b, &n)| orthogonal_complement(b, n, pol)).collect(),
                )
            }
        };
        if verify_reducing(f, &w, pol)?.strength == Strength::NotReducing {
            return Err(Error::NoComplement("complementary family is not reducing".into()));
        }
        Some(w)
    } else {
        None
    };

    let mut transforms = Vec::with_capacity(dims.len());
    for (i, &n) in dims.iter().enumerate() {
        let t = match (&comp, unitary) {
            (Some(w), true) => orthonormal(u.basis(i), pol).hstack(&orthonormal(w.basis(i), pol)),
            (Some(w), false) => range_basis(u.basis(i), pol).hstack(&range_basis(w.basis(i), pol)),
            (None, true) => unitary_completion(u.basis(i), n, pol),
            (None, false) => complete_basis(u.basis(i), n, pol),
        };
        if t.shape() != (n, n) || rank(&t, pol) < n {
            return Err(Error::NoComplement(format!("U_{} and its complement do not span the space", i + 1)));
        }
        if unitary && !(&t.adjoint() * &t).approx_eq(&CMatrix::identity(n), 1e3 * pol.equality_atol) {
            return Err(Error::NoComplement(format!("complement at index {} is not orthogonal to U_{}", i + 1, i + 1)));
        }
        transforms.push(t);
    }
    let witness = SimilarityWitness { transforms };
    let transformed = if unitary {
        CFamily::from_fn(dims.clone(), |i, j| &(&witness.transforms[i].adjoint() * f.block(i, j)) * &witness.transforms[j])?
    } else {
        f.apply_coupled_similarity(&witness, pol)?
    };

    let mut lower_left_max: f64 = 0.0;
    let mut upper_right_max: f64 = 0.0;
    for (i, j, b) in transformed.blocks() {
        lower_left_max = lower_left_max.max(region_max(b, d[i], dims[i], 0, d[j]));
        upper_right_max = upper_right_max.max(region_max(b, 0, d[i], d[j], dims[j]));
    }
    let summary = BlockFormSummary {
        dims: d,
        unitary,
        full,
        lower_left_max,
        upper_right_max: full.then_some(upper_right_max),
    };
    Ok(BlockForm { witness, transformed, summary })
}
