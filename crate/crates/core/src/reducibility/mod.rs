//! Coupled reducing subspace families: verification, closure, search,
//! exhaustive chain certification, the Burnside irreducibility test and
//! block-form transforms.

mod block_form;
mod burnside;
mod chain;
mod search;

pub use block_form::{block_form_transform, BlockForm};
pub use burnside::{coupled_irreducible_burnside, BurnsideCertificate, DEFAULT_BURNSIDE_MAX_DIM};
pub use chain::{chain_classify, chain_lattice, ChainLattice, LatticeKind};
pub use search::{search_witness, SearchConfig, SearchOutcome};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::CoupledFamily;
use crate::linalg::{containment, range_basis, TolerancePolicy};
use crate::matrix::Matrix;
use crate::report::{one_based, EntryCodec};
use crate::scalar::Scalar;

/// One subspace `U_i` per index, each given by a basis of column vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceFamily<T> {
    bases: Vec<Matrix<T>>,
}

impl<T: Scalar> SubspaceFamily<T> {
    /// Bases are reduced to independent columns.
    pub fn new(bases: Vec<Matrix<T>>, pol: &TolerancePolicy) -> Self {
        Self { bases: bases.iter().map(|b| range_basis(b, pol)).collect() }
    }

    /// Bases taken as given; callers promise independent columns.
    pub fn from_independent(bases: Vec<Matrix<T>>) -> Self {
        Self { bases }
    }

    pub fn zero(dims: &[usize]) -> Self {
        Self { bases: dims.iter().map(|&n| Matrix::zeros(n, 0)).collect() }
    }

    pub fn full(dims: &[usize]) -> Self {
        Self { bases: dims.iter().map(|&n| Matrix::identity(n)).collect() }
    }

    pub fn k(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, i: usize) -> &Matrix<T> {
        &self.bases[i]
    }

    pub fn bases(&self) -> &[Matrix<T>] {
        &self.bases
    }

    pub fn set(&mut self, i: usize, basis: Matrix<T>) {
        self.bases[i] = basis;
    }

    /// `d_i = dim U_i`.
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Matrix::cols).collect()
    }

    pub fn ambient_dims(&self) -> Vec<usize> {
        self.bases.iter().map(Matrix::rows).collect()
    }

    pub fn is_zero_at(&self, i: usize) -> bool {
        self.bases[i].cols() == 0
    }

    pub fn is_full_at(&self, i: usize) -> bool {
        self.bases[i].cols() == self.bases[i].rows()
    }

    pub fn is_proper_at(&self, i: usize) -> bool {
        !self.is_zero_at(i) && !self.is_full_at(i)
    }

    pub fn to_c64(&self) -> SubspaceFamily<num_complex::Complex64> {
        SubspaceFamily { bases: self.bases.iter().map(Matrix::to_c64).collect() }
    }

    /// Blockwise sum `U_i + W_i`.
    pub fn sum(&self, other: &Self, pol: &TolerancePolicy) -> Self {
        Self {
            bases: self.bases.iter().zip(&other.bases).map(|(u, w)| crate::linalg::span_sum(u, w, pol)).collect(),
        }
    }

    /// Blockwise intersection `U_i ∩ W_i`.
    pub fn intersect(&self, other: &Self, pol: &TolerancePolicy) -> Result<Self> {
        let bases = self
            .bases
            .iter()
            .zip(&other.bases)
            .map(|(u, w)| crate::linalg::intersection(u, w, pol))
            .collect::<Result<_>>()?;
        Ok(Self { bases })
    }

    /// True iff `U_i ⊆ W_i` and `W_i ⊆ U_i` for all `i`.
    pub fn same_spans(&self, other: &Self, pol: &TolerancePolicy) -> bool {
        self.k() == other.k()
            && self.bases.iter().zip(&other.bases).all(|(u, w)| {
                u.cols() == w.cols()
                    && containment(u, w, pol).is_ok_and(|c| c.contained)
                    && containment(w, u, pol).is_ok_and(|c| c.contained)
            })
    }
}

impl<T: EntryCodec> Serialize for SubspaceFamily<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(bound(serialize = "T: EntryCodec"))]
        struct Repr<'a, T> {
            dims: Vec<usize>,
            bases: &'a [Matrix<T>],
        }
        Repr { dims: self.dims(), bases: &self.bases }.serialize(s)
    }
}

/// Ordered so that a stronger conclusion compares greater.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    NotReducing,
    Trivial,
    Reducible,
    ProperlyReducible,
    StronglyReducible,
}

impl Strength {
    pub fn as_str(self) -> &'static str {
        match self {
            Strength::NotReducing => "not-reducing",
            Strength::Trivial => "trivial",
            Strength::Reducible => "reducible",
            Strength::ProperlyReducible => "properly-reducible",
            Strength::StronglyReducible => "strongly-reducible",
        }
    }
}

impl std::str::FromStr for Strength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "trivial" => Strength::Trivial,
            "reducible" | "plain" => Strength::Reducible,
            "proper" | "properly-reducible" => Strength::ProperlyReducible,
            "strong" | "strongly-reducible" => Strength::StronglyReducible,
            other => return Err(Error::Parse(format!("unknown strength `{other}`"))),
        })
    }
}

/// Residual of the containment `A_ij(U_j) ⊆ U_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResidual {
    #[serde(serialize_with = "one_based")]
    pub i: usize,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub residual: f64,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducingCheck {
    pub strength: Strength,
    pub residuals: Vec<PairResidual>,
}

/// Classifies `U` against `F` by checking every `A_ij(U_j) ⊆ U_i`.
pub fn verify_reducing<T: Scalar>(
    f: &CoupledFamily<T>,
    u: &SubspaceFamily<T>,
    pol: &TolerancePolicy,
) -> Result<ReducingCheck> {
    if u.k() != f.k() {
        return Err(Error::IndexCountMismatch(f.k(), u.k()));
    }
    for (i, (&n, &amb)) in f.dims().iter().zip(&u.ambient_dims()).enumerate() {
        if n != amb {
            return Err(Error::Shape(format!("U_{} lives in dimension {amb}, expected {n}", i + 1)));
        }
    }
    let mut residuals = Vec::with_capacity(f.k() * f.k());
    let mut all_contained = true;
    for (i, j, a) in f.blocks() {
        let image = a * u.basis(j);
        let c = containment(u.basis(i), &image, pol)?;
        all_contained &= c.contained;
        residuals.push(PairResidual { i, j, residual: c.residual, contained: c.contained });
    }
    let k = f.k();
    let strength = if !all_contained {
        Strength::NotReducing
    } else if (0..k).all(|i| u.is_zero_at(i)) || (0..k).all(|i| u.is_full_at(i)) {
        Strength::Trivial
    } else if (0..k).all(|i| u.is_proper_at(i)) {
        Strength::StronglyReducible
    } else if (0..k).any(|i| u.is_proper_at(i)) {
        Strength::ProperlyReducible
    } else {
        Strength::Reducible
    };
    Ok(ReducingCheck { strength, residuals })
}

fn normalized<T: Scalar>(v: Matrix<T>) -> Matrix<T> {
    if T::EXACT {
        return v;
    }
    let n = v.frobenius_norm();
    if n > 0.0 {
        v.scale(&T::from_c64(num_complex::Complex64::new(1.0 / n, 0.0)))
    } else {
        v
    }
}

/// Smallest family closed under every `A_ij` that contains the seeds.
pub fn closure_from_seed<T: Scalar>(
    f: &CoupledFamily<T>,
    seeds: &[(usize, Matrix<T>)],
    pol: &TolerancePolicy,
) -> Result<SubspaceFamily<T>> {
    let k = f.k();
    let mut bases: Vec<Matrix<T>> = f.dims().iter().map(|&n| Matrix::zeros(n, 0)).collect();
    let mut queue: std::collections::VecDeque<(usize, Matrix<T>)> = std::collections::VecDeque::new();
    for (i, v) in seeds {
        if *i >= k {
            return Err(Error::Shape(format!("seed index {} out of range", i + 1)));
        }
        if v.shape() != (f.dims()[*i], 1) {
            return Err(Error::Shape(format!("seed at index {} must be a column of length {}", i + 1, f.dims()[*i])));
        }
        queue.push_back((*i, v.clone()));
    }
    while let Some((i, v)) = queue.pop_front() {
        if v.is_zero_within(0.0) || (!T::EXACT && v.frobenius_norm() <= pol.equality_atol) {
            continue;
        }
        if bases[i].cols() == f.dims()[i] || containment(&bases[i], &v, pol)?.contained {
            continue;
        }
        let v = normalized(v);
        bases[i] = range_basis(&bases[i].hstack(&v), pol);
        for r in 0..k {
            queue.push_back((r, f.block(r, i) * &v));
        }
    }
    Ok(SubspaceFamily { bases })
}

/// If `U` has exactly one index `p` that differs from the others in the
/// all-zero/all-full pattern, replaces `U_p` by a nonzero proper invariant
/// subspace of `A_pp` drawn from `candidates`.
pub fn extreme_pattern_upgrade<T: Scalar>(
    f: &CoupledFamily<T>,
    u: &SubspaceFamily<T>,
    candidates: impl Fn(usize) -> Vec<Matrix<T>>,
    pol: &TolerancePolicy,
) -> Result<Option<SubspaceFamily<T>>> {
    let k = u.k();
    if k < 2 || (0..k).any(|i| u.is_proper_at(i)) {
        return Ok(None);
    }
    let full: Vec<usize> = (0..k).filter(|&i| u.is_full_at(i)).collect();
    let zero: Vec<usize> = (0..k).filter(|&i| u.is_zero_at(i) && !u.is_full_at(i)).collect();
    let mut ps = Vec::new();
    if full.len() == 1 {
        ps.push(full[0]);
    }
    if zero.len() == 1 {
        ps.push(zero[0]);
    }
    for p in ps {
        for w in candidates(p) {
            if w.cols() == 0 || w.cols() >= f.dims()[p] {
                continue;
            }
            let mut up = u.clone();
            up.set(p, w);
            if verify_reducing(f, &up, pol)?.strength >= Strength::ProperlyReducible {
                return Ok(Some(up));
            }
        }
    }
    Ok(None)
}

/// How a verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExhaustiveChain,
    Burnside,
    Search,
}

/// For each strength, `Some(true)` when a verified witness exists,
/// `Some(false)` when certified impossible, `None` when undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrengthSpectrum {
    pub reducible: Option<bool>,
    pub proper: Option<bool>,
    pub strong: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: EntryCodec"))]
pub struct ReducibilityVerdict<T> {
    /// Strongest verified strength; `Trivial` when no witness exists.
    pub strength: Strength,
    pub witness: Option<SubspaceFamily<T>>,
    pub spectrum: StrengthSpectrum,
    pub method: Method,
    /// Residuals of the witness check.
    pub residuals: Vec<PairResidual>,
}
