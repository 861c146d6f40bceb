//! Deterministic example families and seeded random pairs.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{CFamily, QFamily};
use crate::linalg::{inverse, unitary_completion, TolerancePolicy};
use crate::matrix::{CMatrix, QMatrix};
use crate::reducibility::{Strength, SubspaceFamily};
use crate::scalar::{GaussRational, Scalar};

/// Name of the pseudo-random generator recorded in every seeded artifact.
pub const GENERATOR_NAME: &str = "ChaCha8Rng/rand_chacha-0.9";

/// `n x n` matrix with ones on the superdiagonal.
pub fn standard_nilpotent(n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |i, j| if j == i + 1 { <GaussRational as Scalar>::one() } else { <GaussRational as Scalar>::zero() })
}

/// Matrix whose first column is `e_{n}` (the last coordinate vector) and
/// every other column is zero.
pub fn last_unit_first_column(rows: usize, cols: usize) -> QMatrix {
    let mut m = QMatrix::zeros(rows, cols);
    m[(rows - 1, 0)] = <GaussRational as Scalar>::one();
    m
}

fn snap(x: f64) -> GaussRational {
    const EPS: f64 = 1e-15;
    for target in [-1.0, 0.0, 1.0] {
        if (x - target).abs() < EPS {
            return GaussRational::from_i64(target as i64);
        }
    }
    GaussRational::from_c64(Complex64::new(x, 0.0))
}

/// Rotation of the plane by `theta`; entries within `1e-15` of `0` or `±1` are snapped.
pub fn rotation(theta: f64) -> QMatrix {
    let (c, s) = (snap(theta.cos()), snap(theta.sin()));
    QMatrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]).expect("2x2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    JordanNilpotent,
    Example51,
    ProperNotStrong,
    RedNotProper,
    RotationFamily,
    Figure1Pair,
    ClassicalSchurEmbed,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 7] = [
        FixtureKind::JordanNilpotent,
        FixtureKind::Example51,
        FixtureKind::ProperNotStrong,
        FixtureKind::RedNotProper,
        FixtureKind::RotationFamily,
        FixtureKind::Figure1Pair,
        FixtureKind::ClassicalSchurEmbed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::JordanNilpotent => "jordan_nilpotent",
            FixtureKind::Example51 => "example_51",
            FixtureKind::ProperNotStrong => "proper_not_strong",
            FixtureKind::RedNotProper => "red_not_proper",
            FixtureKind::RotationFamily => "rotation_family",
            FixtureKind::Figure1Pair => "figure1_pair",
            FixtureKind::ClassicalSchurEmbed => "classical_schur_embed",
        }
    }
}

impl std::str::FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidFixture(format!("unknown fixture kind `{s}`")))
    }
}

/// Kind-specific parameters; unset fields take the documented defaults.
/// Indices `p`, `q` are 0-based.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FixtureParams {
    pub dims: Option<Vec<usize>>,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    #[serde(skip)]
    pub abcd: Option<[BigRational; 4]>,
    pub theta: Option<f64>,
    pub s: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub kind: FixtureKind,
    pub params: FixtureParams,
    /// Replacement blocks `(i, j, block)` for entries the construction leaves free.
    pub overrides: Vec<(usize, usize, QMatrix)>,
}

impl FixtureSpec {
    pub fn new(kind: FixtureKind) -> Self {
        Self { kind, params: FixtureParams::default(), overrides: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    Family(QFamily),
    Pair {
        a: QFamily,
        b: QFamily,
        /// A known solution of `A_ij X_j = X_i B_ij`.
        planted: Option<Vec<QMatrix>>,
    },
}

impl Fixture {
    pub fn family(&self) -> &QFamily {
        match self {
            Fixture::Family(f) => f,
            Fixture::Pair { a, .. } => a,
        }
    }
}

/// Block roles used to check overrides.
enum Slot {
    Fixed,
    Free,
    FirstColumnLastUnit,
}

fn jordan(n: usize) -> Result<QFamily> {
    if n == 0 {
        return Err(Error::InvalidFixture("n must be positive".into()));
    }
    QFamily::new(vec![n], vec![standard_nilpotent(n)])
}

pub fn example_51(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Fixture> {
    if c.is_zero() {
        return Err(Error::InvalidFixture("example_51 requires c != 0".into()));
    }
    let z = |x: BigRational| GaussRational::new(x, BigRational::zero());
    let m = QMatrix::from_rows(vec![vec![z(a), z(b)], vec![z(c), z(d)]])?;
    let n2 = standard_nilpotent(2);
    let zero = QMatrix::zeros(2, 2);
    let fa = QFamily::new(vec![2, 2], vec![n2.clone(), m.clone(), zero.clone(), n2.clone()])?;
    let fb = QFamily::new(vec![2, 2], vec![n2.clone(), zero.clone(), m, n2.clone()])?;
    Ok(Fixture::Pair { a: fa, b: fb, planted: Some(vec![n2, zero]) })
}

fn proper_not_strong(dims: &[usize], p: usize) -> Result<(QFamily, Vec<Vec<Slot>>)> {
    let k = dims.len();
    if k < 2 {
        return Err(Error::InvalidFixture("proper_not_strong needs at least two indices".into()));
    }
    if p >= k || dims[p] < 2 {
        return Err(Error::InvalidFixture("proper_not_strong needs n_p >= 2".into()));
    }
    let mut slots = Vec::new();
    let f = QFamily::from_fn(dims.to_vec(), |i, j| {
        if i == j {
            standard_nilpotent(dims[i])
        } else if i == p {
            QMatrix::zeros(dims[i], dims[j])
        } else if j == p {
            last_unit_first_column(dims[i], dims[j])
        } else {
            QMatrix::zeros(dims[i], dims[j])
        }
    })?;
    for i in 0..k {
        slots.push(
            (0..k)
                .map(|j| {
                    if i == j || i == p {
                        Slot::Fixed
                    } else if j == p {
                        Slot::FirstColumnLastUnit
                    } else {
                        Slot::Free
                    }
                })
                .collect(),
        );
    }
    Ok((f, slots))
}

fn red_not_proper(dims: &[usize], p: usize, q: usize) -> Result<(QFamily, Vec<Vec<Slot>>)> {
    let k = dims.len();
    if k < 4 {
        return Err(Error::InvalidFixture("red_not_proper needs at least four indices".into()));
    }
    if p >= k || q >= k || p == q {
        return Err(Error::InvalidFixture("red_not_proper needs distinct p and q in range".into()));
    }
    if dims[p] < 2 {
        return Err(Error::InvalidFixture("red_not_proper needs n_p >= 2".into()));
    }
    let zeroed = |i: usize, j: usize| i != p && i != q && (j == p || j == q);
    let f = QFamily::from_fn(dims.to_vec(), |i, j| {
        if i == j {
            standard_nilpotent(dims[i])
        } else if zeroed(i, j) {
            QMatrix::zeros(dims[i], dims[j])
        } else {
            last_unit_first_column(dims[i], dims[j])
        }
    })?;
    let slots = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j || zeroed(i, j) { Slot::Fixed } else { Slot::FirstColumnLastUnit })
                .collect()
        })
        .collect();
    Ok((f, slots))
}

fn rotation_family(k: usize, theta: f64, s: usize) -> Result<(QFamily, Vec<Vec<Slot>>)> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::InvalidFixture(format!("rotation angle {theta} must lie in (0, pi)")));
    }
    if k < 2 || s == 0 || s >= k {
        return Err(Error::InvalidFixture("rotation_family needs K >= 2 and 1 <= s < K".into()));
    }
    let r = rotation(theta);
    let f = QFamily::from_fn(vec![2; k], |i, j| if i == j { r.clone() } else { QMatrix::zeros(2, 2) })?;
    // 0-based: the zero region is i >= s, j < s
    let slots = (0..k)
        .map(|i| (0..k).map(|j| if i == j || (i >= s && j < s) { Slot::Fixed } else { Slot::Free }).collect())
        .collect();
    Ok((f, slots))
}

/// `A_12 = A_21 = I`, `B_13 = B_31 = I`; for `n >= 2` the rank-one couplings
/// `A_13 = A_31 = B_12 = B_21 = E_11` make `X = (E_11, E_11, E_11)` a solution.
pub fn figure1_pair(n: usize) -> Result<Fixture> {
    if n == 0 {
        return Err(Error::InvalidFixture("n must be positive".into()));
    }
    let id = QMatrix::identity(n);
    let mut e11 = QMatrix::zeros(n, n);
    e11[(0, 0)] = <GaussRational as Scalar>::one();
    let coupling = if n >= 2 { e11.clone() } else { QMatrix::zeros(1, 1) };
    let a = QFamily::from_fn(vec![n; 3], |i, j| match (i, j) {
        (0, 1) | (1, 0) => id.clone(),
        (0, 2) | (2, 0) => coupling.clone(),
        _ => QMatrix::zeros(n, n),
    })?;
    let b = QFamily::from_fn(vec![n; 3], |i, j| match (i, j) {
        (0, 2) | (2, 0) => id.clone(),
        (0, 1) | (1, 0) => coupling.clone(),
        _ => QMatrix::zeros(n, n),
    })?;
    let planted = if n >= 2 { vec![e11; 3] } else { vec![QMatrix::zeros(1, 1); 3] };
    Ok(Fixture::Pair { a, b, planted: Some(planted) })
}

/// Encodes generator sets `{A_t}` and `{B_t}` as a coupled pair whose
/// off-diagonal identity couplings force `X_1 = ... = X_K`, so solutions are
/// exactly the matrices `P` with `A_t P = P B_t` for every `t`.
pub fn classical_schur_embed(a_gens: &[QMatrix], b_gens: &[QMatrix]) -> Result<Fixture> {
    if a_gens.is_empty() || a_gens.len() != b_gens.len() {
        return Err(Error::InvalidFixture("need the same positive number of generators on both sides".into()));
    }
    let n = a_gens[0].rows();
    let m = b_gens[0].rows();
    if a_gens.iter().any(|g| g.shape() != (n, n)) || b_gens.iter().any(|g| g.shape() != (m, m)) {
        return Err(Error::InvalidFixture("generators must be square of a common size".into()));
    }
    let mut ag = a_gens.to_vec();
    let mut bg = b_gens.to_vec();
    if ag.len() == 1 {
        ag.push(ag[0].clone());
        bg.push(bg[0].clone());
    }
    let k = ag.len();
    let a = QFamily::from_fn(vec![n; k], |i, j| if i == j { ag[i].clone() } else { QMatrix::identity(n) })?;
    let b = QFamily::from_fn(vec![m; k], |i, j| if i == j { bg[i].clone() } else { QMatrix::identity(m) })?;
    Ok(Fixture::Pair { a, b, planted: None })
}

fn check_overrides(f: &mut QFamily, slots: &[Vec<Slot>], overrides: &[(usize, usize, QMatrix)]) -> Result<()> {
    for (i, j, m) in overrides {
        let (i, j) = (*i, *j);
        if i >= f.k() || j >= f.k() {
            return Err(Error::InvalidFixture(format!("override ({}, {}) out of range", i + 1, j + 1)));
        }
        match slots[i][j] {
            Slot::Fixed => {
                return Err(Error::InvalidFixture(format!("block ({}, {}) is fixed by the construction", i + 1, j + 1)));
            }
            Slot::FirstColumnLastUnit => {
                if m.shape() != f.block(i, j).shape() || m.column_matrix(0) != QMatrix::unit(m.rows(), m.rows() - 1) {
                    return Err(Error::InvalidFixture(format!(
                        "block ({}, {}) must keep e_{} as its first column",
                        i + 1,
                        j + 1,
                        m.rows()
                    )));
                }
            }
            Slot::Free => {}
        }
        f.set_block(i, j, m.clone())?;
    }
    Ok(())
}

pub fn make_fixture(spec: &FixtureSpec) -> Result<Fixture> {
    let p = &spec.params;
    let no_overrides = || {
        if spec.overrides.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidFixture(format!("{} has no free blocks", spec.kind.name())))
        }
    };
    match spec.kind {
        FixtureKind::JordanNilpotent => {
            no_overrides()?;
            Ok(Fixture::Family(jordan(p.n.unwrap_or(3))?))
        }
        FixtureKind::Example51 => {
            no_overrides()?;
            let [a, b, c, d] = p.abcd.clone().unwrap_or_else(|| {
                let z = BigRational::zero();
                [z.clone(), z.clone(), BigRational::from_integer(1.into()), z]
            });
            example_51(a, b, c, d)
        }
        FixtureKind::ProperNotStrong => {
            let dims = p.dims.clone().unwrap_or_else(|| vec![2, 2]);
            let (mut f, slots) = proper_not_strong(&dims, p.p.unwrap_or(0))?;
            check_overrides(&mut f, &slots, &spec.overrides)?;
            Ok(Fixture::Family(f))
        }
        FixtureKind::RedNotProper => {
            let dims = p.dims.clone().unwrap_or_else(|| vec![2, 2, 2, 2]);
            let (mut f, slots) = red_not_proper(&dims, p.p.unwrap_or(0), p.q.unwrap_or(1))?;
            check_overrides(&mut f, &slots, &spec.overrides)?;
            Ok(Fixture::Family(f))
        }
        FixtureKind::RotationFamily => {
            let (mut f, slots) = rotation_family(p.k.unwrap_or(2), p.theta.unwrap_or(PI / 2.0), p.s.unwrap_or(1))?;
            check_overrides(&mut f, &slots, &spec.overrides)?;
            Ok(Fixture::Family(f))
        }
        FixtureKind::Figure1Pair => {
            no_overrides()?;
            figure1_pair(p.n.unwrap_or(2))
        }
        FixtureKind::ClassicalSchurEmbed => {
            no_overrides()?;
            let n = p.n.unwrap_or(3);
            if n == 0 {
                return Err(Error::InvalidFixture("n must be positive".into()));
            }
            // shift and its transpose generate the full matrix algebra
            let gens = vec![standard_nilpotent(n), standard_nilpotent(n).transpose()];
            classical_schur_embed(&gens, &gens)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomKind {
    /// Dense `A`, `B_ij = T_i^{-1} A_ij T_j`, planted solution `X = T`.
    CoupledSimilar,
    /// Hermitian-assembled `A`, unitary `T_i`, `B_ij = T_i* A_ij T_j`.
    CoupledNormalSimilar,
    /// Zero-pattern template `B`, `A_ij = T_i B_ij T_j^{-1}`, planted witness for `A`.
    PlantedReducible(Strength),
    /// As [`RandomKind::PlantedReducible`] with a Hermitian template in the
    /// fully reduced form and unitary `T_i`; `A` is coupled normal.
    PlantedNormalReducible(Strength),
}

#[derive(Debug, Clone)]
pub struct RandomPair {
    pub kind: RandomKind,
    pub seed: u64,
    pub generator: &'static str,
    pub a: CFamily,
    pub b: CFamily,
    /// Solves `A_ij X_j = X_i B_ij`.
    pub planted_solution: Vec<CMatrix>,
    /// Reducing family of `A` for the planted kinds.
    pub planted_witness: Option<SubspaceFamily<Complex64>>,
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng, pol: &TolerancePolicy) -> CMatrix {
    unitary_completion(&random_matrix(n, n, rng), n, pol)
}

fn profile(dims: &[usize], strength: Strength, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let k = dims.len();
    let proper = |n: usize, rng: &mut ChaCha8Rng| rng.random_range(1..n);
    match strength {
        Strength::StronglyReducible => {
            if dims.iter().any(|&n| n < 2) {
                return Err(Error::InvalidFixture("strong reducibility needs every n_i >= 2".into()));
            }
            Ok(dims.iter().map(|&n| proper(n, rng)).collect())
        }
        Strength::ProperlyReducible => {
            let cands: Vec<usize> = (0..k).filter(|&i| dims[i] >= 2).collect();
            if cands.is_empty() {
                return Err(Error::InvalidFixture("proper reducibility needs some n_i >= 2".into()));
            }
            let p = cands[rng.random_range(0..cands.len())];
            Ok((0..k)
                .map(|i| if i == p { proper(dims[i], rng) } else if rng.random_bool(0.5) { dims[i] } else { 0 })
                .collect())
        }
        Strength::Reducible => {
            if k < 2 {
                return Err(Error::InvalidFixture("plain reducibility needs K >= 2".into()));
            }
            let cut = rng.random_range(1..k);
            Ok((0..k).map(|i| if i < cut { dims[i] } else { 0 }).collect())
        }
        Strength::Trivial | Strength::NotReducing => Ok(dims.to_vec()),
    }
}

/// Seeded random pair; the same `(kind, dims, seed)` always yields the same bits.
pub fn random_pair(kind: RandomKind, dims: &[usize], seed: u64) -> Result<RandomPair> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidFixture("dims must be a nonempty list of positive integers".into()));
    }
    let pol = TolerancePolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dv = dims.to_vec();
    let (a, b, t, witness) = match kind {
        RandomKind::CoupledSimilar => {
            let a = CFamily::from_fn(dv.clone(), |i, j| random_matrix(dims[i], dims[j], &mut rng))?;
            let t: Vec<CMatrix> = dims.iter().map(|&n| random_matrix(n, n, &mut rng)).collect();
            let inv: Vec<CMatrix> = t.iter().map(|m| inverse(m, &pol)).collect::<Result<_>>()?;
            let b = CFamily::from_fn(dv.clone(), |i, j| &(&inv[i] * a.block(i, j)) * &t[j])?;
            (a, b, t, None)
        }
        RandomKind::CoupledNormalSimilar => {
            let n: usize = dims.iter().sum();
            let m = random_matrix(n, n, &mut rng);
            let h = &m + &m.adjoint();
            let a = CFamily::from_assembled(&h, dv.clone())?;
            let t: Vec<CMatrix> = dims.iter().map(|&n| random_unitary(n, &mut rng, &pol)).collect();
            let b = CFamily::from_fn(dv.clone(), |i, j| &(&t[i].adjoint() * a.block(i, j)) * &t[j])?;
            (a, b, t, None)
        }
        RandomKind::PlantedReducible(strength) => {
            let d = profile(dims, strength, &mut rng)?;
            let b = CFamily::from_fn(dv.clone(), |i, j| {
                CMatrix::from_fn(dims[i], dims[j], |r, c| if r >= d[i] && c < d[j] { Complex64::new(0.0, 0.0) } else { gaussian(&mut rng) })
            })?;
            let t: Vec<CMatrix> = dims.iter().map(|&n| random_matrix(n, n, &mut rng)).collect();
            let inv: Vec<CMatrix> = t.iter().map(|m| inverse(m, &pol)).collect::<Result<_>>()?;
            let a = CFamily::from_fn(dv.clone(), |i, j| &(&t[i] * b.block(i, j)) * &inv[j])?;
            let w = SubspaceFamily::from_independent((0..dims.len()).map(|i| t[i].select_columns(&(0..d[i]).collect::<Vec<_>>())).collect());
            (a, b, t, Some(w))
        }
        RandomKind::PlantedNormalReducible(strength) => {
            let d = profile(dims, strength, &mut rng)?;
            let n: usize = dims.iter().sum();
            let off = {
                let mut acc = 0;
                dims.iter().map(|&x| { let o = acc; acc += x; o }).collect::<Vec<_>>()
            };
            let m = random_matrix(n, n, &mut rng);
            let mut h = &m + &m.adjoint();
            // zero every entry linking a leading coordinate to a trailing one
            let lead = |g: usize| {
                let i = off.iter().rposition(|&o| o <= g).expect("offset");
                g - off[i] < d[i]
            };
            for r in 0..n {
                for c in 0..n {
                    if lead(r) != lead(c) {
                        h[(r, c)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
            let b = CFamily::from_assembled(&h, dv.clone())?;
            let t: Vec<CMatrix> = dims.iter().map(|&n| random_unitary(n, &mut rng, &pol)).collect();
            let a = CFamily::from_fn(dv.clone(), |i, j| &(&t[i] * b.block(i, j)) * &t[j].adjoint())?;
            let w = SubspaceFamily::from_independent((0..dims.len()).map(|i| t[i].select_columns(&(0..d[i]).collect::<Vec<_>>())).collect());
            (a, b, t, Some(w))
        }
    };
    Ok(RandomPair { kind, seed, generator: GENERATOR_NAME, a, b, planted_solution: t, planted_witness: witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TolerancePolicy;
    use crate::reducibility::verify_reducing;

    #[test]
    fn nilpotent_shifts_coordinates() {
        let n = standard_nilpotent(3);
        assert_eq!(&n * &QMatrix::unit(3, 2), QMatrix::unit(3, 1));
        assert!((&n * &QMatrix::unit(3, 0)).is_zero_within(0.0));
    }

    #[test]
    fn quarter_turn_is_exact() {
        assert_eq!(rotation(PI / 2.0), QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn example_51_requires_nonzero_c() {
        let z = BigRational::zero();
        assert!(example_51(z.clone(), z.clone(), z.clone(), z).is_err());
    }

    #[test]
    fn every_default_fixture_validates() {
        for kind in FixtureKind::ALL {
            let f = make_fixture(&FixtureSpec::new(kind)).unwrap();
            f.family().validate().unwrap();
            if let Fixture::Pair { a, b, planted } = &f {
                b.validate().unwrap();
                if let Some(x) = planted {
                    for (i, j, blk) in a.blocks() {
                        assert_eq!(blk * &x[j], &x[i] * b.block(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn overrides_respect_free_entries() {
        let mut spec = FixtureSpec::new(FixtureKind::ProperNotStrong);
        spec.params.dims = Some(vec![2, 2, 2]);
        spec.overrides.push((1, 2, QMatrix::from_i64_rows(&[&[1, 2], &[3, 4]])));
        assert!(make_fixture(&spec).is_ok());
        spec.overrides.push((0, 1, QMatrix::identity(2)));
        assert!(make_fixture(&spec).is_err());

        let mut spec = FixtureSpec::new(FixtureKind::ProperNotStrong);
        spec.overrides.push((1, 0, QMatrix::from_i64_rows(&[&[1, 5], &[0, 5]])));
        assert!(make_fixture(&spec).is_err());
        spec.overrides[0].2 = QMatrix::from_i64_rows(&[&[0, 5], &[1, 5]]);
        assert!(make_fixture(&spec).is_ok());
    }

    #[test]
    fn invalid_parameters() {
        let mut spec = FixtureSpec::new(FixtureKind::RotationFamily);
        spec.params.theta = Some(PI);
        assert!(make_fixture(&spec).is_err());
        let mut spec = FixtureSpec::new(FixtureKind::RedNotProper);
        spec.params.dims = Some(vec![2, 2, 2]);
        assert!(make_fixture(&spec).is_err());
    }

    #[test]
    fn random_pairs_are_reproducible() {
        let x = random_pair(RandomKind::CoupledSimilar, &[2, 3, 2], 7).unwrap();
        let y = random_pair(RandomKind::CoupledSimilar, &[2, 3, 2], 7).unwrap();
        assert_eq!(x.a, y.a);
        assert_eq!(x.b, y.b);
    }

    #[test]
    fn planted_strong_witness_verifies() {
        let pol = TolerancePolicy::default();
        let r = random_pair(RandomKind::PlantedReducible(Strength::StronglyReducible), &[3, 3], 3).unwrap();
        let w = r.planted_witness.unwrap();
        assert_eq!(verify_reducing(&r.a, &w, &pol).unwrap().strength, Strength::StronglyReducible);
    }
}
