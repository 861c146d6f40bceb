use serde::Serialize;

use super::{verify_reducing, Method, ReducibilityVerdict, StrengthSpectrum, Strength, SubspaceFamily};
use crate::error::{Error, Result};
use crate::family::QFamily;
use crate::linalg::TolerancePolicy;
use crate::matrix::QMatrix;
use crate::scalar::{rational_is_negative, GaussRational, Scalar};

const MAX_COMBINATIONS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    /// `1 x 1` block: only `0` and the whole line.
    Line,
    /// `lambda I + N` up to a coordinate permutation and diagonal scaling.
    Chain,
    /// Real `2 x 2` block without real eigenvalues; lattice taken over the reals.
    RealRotation,
}

/// All invariant subspaces of one diagonal block, smallest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainLattice {
    pub kind: LatticeKind,
    pub elements: Vec<QMatrix>,
}

fn nilpotent_chain(d: &QMatrix) -> Option<Vec<usize>> {
    let n = d.rows();
    let mut col_nz = vec![None; n];
    let mut row_used = vec![false; n];
    for j in 0..n {
        for i in 0..n {
            if !d[(i, j)].is_zero() {
                if col_nz[j].is_some() || row_used[i] || i == j {
                    return None;
                }
                col_nz[j] = Some(i);
                row_used[i] = true;
            }
        }
    }
    let start: Vec<usize> = (0..n).filter(|&j| col_nz[j].is_none()).collect();
    if start.len() != 1 {
        return None;
    }
    let mut order = vec![start[0]];
    while order.len() < n {
        let last = *order.last().expect("nonempty");
        let next = (0..n).find(|&j| col_nz[j] == Some(last))?;
        order.push(next);
    }
    Some(order)
}

/// Recognises blocks whose invariant-subspace lattice is known in closed form.
pub fn chain_lattice(a: &QMatrix) -> Option<ChainLattice> {
    let n = a.rows();
    if n == 1 {
        return Some(ChainLattice { kind: LatticeKind::Line, elements: vec![QMatrix::zeros(1, 0), QMatrix::identity(1)] });
    }
    let lambda = a[(0, 0)].clone();
    let d = a - &QMatrix::identity(n).scale(&lambda);
    if let Some(order) = nilpotent_chain(&d) {
        let elements = (0..=n).map(|k| QMatrix::identity(n).select_columns(&order[..k])).collect();
        return Some(ChainLattice { kind: LatticeKind::Chain, elements });
    }
    if n == 2 && a.data().iter().all(Scalar::is_real) {
        let (p, q, r, s) = (&a[(0, 0)].re, &a[(0, 1)].re, &a[(1, 0)].re, &a[(1, 1)].re);
        let tr = p + s;
        let det = p * s - q * r;
        let disc = &tr * &tr - num_rational::BigRational::from_integer(4.into()) * det;
        if rational_is_negative(&disc) {
            return Some(ChainLattice {
                kind: LatticeKind::RealRotation,
                elements: vec![QMatrix::zeros(2, 0), QMatrix::identity(2)],
            });
        }
    }
    None
}

/// Exhaustive, exact classification when every diagonal block has a known
/// lattice. Every combination of lattice elements is checked, so each
/// strength is either witnessed or certified impossible.
pub fn chain_classify(f: &QFamily) -> Result<ReducibilityVerdict<GaussRational>> {
    let pol = TolerancePolicy::default();
    let k = f.k();
    let mut lattices = Vec::with_capacity(k);
    for i in 0..k {
        lattices.push(chain_lattice(f.block(i, i)).ok_or(Error::UnknownLattice { index: i + 1 })?);
    }
    let total = lattices.iter().try_fold(1usize, |acc, l| acc.checked_mul(l.elements.len()));
    match total {
        Some(t) if t <= MAX_COMBINATIONS => {}
        _ => return Err(Error::BudgetExceeded("too many lattice combinations".into())),
    }

    let mut pick = vec![0usize; k];
    let mut best: Option<(Strength, SubspaceFamily<GaussRational>, Vec<super::PairResidual>)> = None;
    let (mut any_red, mut any_proper, mut any_strong) = (false, false, false);
    loop {
        let u = SubspaceFamily::from_independent((0..k).map(|i| lattices[i].elements[pick[i]].clone()).collect());
        let check = verify_reducing(f, &u, &pol)?;
        let s = check.strength;
        any_red |= s >= Strength::Reducible;
        any_proper |= s >= Strength::ProperlyReducible;
        any_strong |= s == Strength::StronglyReducible;
        if s >= Strength::Reducible && best.as_ref().is_none_or(|(b, _, _)| s > *b) {
            best = Some((s, u, check.residuals));
        }
        // odometer, last index fastest
        let mut carry = true;
        let mut pos = k;
        while carry && pos > 0 {
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < lattices[pos].elements.len() {
                carry = false;
            } else {
                pick[pos] = 0;
            }
        }
        if carry {
            break;
        }
    }
    let spectrum = StrengthSpectrum { reducible: Some(any_red), proper: Some(any_proper), strong: Some(any_strong) };
    Ok(match best {
        Some((strength, w, residuals)) => ReducibilityVerdict {
            strength,
            witness: Some(w),
            spectrum,
            method: Method::ExhaustiveChain,
            residuals,
        },
        None => ReducibilityVerdict {
            strength: Strength::Trivial,
            witness: None,
            spectrum,
            method: Method::ExhaustiveChain,
            residuals: Vec::new(),
        },
    })
}
