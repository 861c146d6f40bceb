use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{closure_from_seed, extreme_pattern_upgrade, verify_reducing, PairResidual, Strength, SubspaceFamily};
use crate::error::Result;
use crate::family::CoupledFamily;
use crate::linalg::{eigen::hermitian_deviation, eigenvalues, hermitian_eigen, svd::svd, orthogonal_complement, rank_and_kernel, TolerancePolicy};
use crate::matrix::{CMatrix, Matrix};
use crate::report::EntryCodec;
use crate::scalar::Scalar;

/// Cap on families combined pairwise by sums and intersections.
const MAX_COMBINED: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub target: Strength,
    /// Number of random seed vectors.
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { target: Strength::Reducible, budget: 32, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: EntryCodec"))]
pub struct SearchOutcome<T> {
    pub target: Strength,
    /// First family meeting the target, in seed order.
    pub witness: Option<SubspaceFamily<T>>,
    /// Strongest strength among all verified families.
    pub best_strength: Strength,
    /// A family at `best_strength` (when at least reducible).
    pub best: Option<SubspaceFamily<T>>,
    pub residuals: Vec<PairResidual>,
    pub seeds_tried: usize,
    pub families_examined: usize,
    /// No witness for the target; this is not a negative certificate.
    pub inconclusive: bool,
    pub seed: u64,
    pub generator: &'static str,
}

/// Invariant subspaces of a single block: eigenvector lines from diagonal
/// entries (exact for triangular blocks), numerical eigenvectors and left
/// eigenvector hyperplanes, Hermitian eigenvectors, and Krylov spaces of the
/// coordinate vectors.
pub(crate) fn block_invariant_candidates<T: Scalar>(a: &Matrix<T>, pol: &TolerancePolicy) -> Vec<Matrix<T>> {
    let n = a.rows();
    let mut out = Vec::new();
    let mut seen: Vec<T> = Vec::new();
    for k in 0..n {
        let lam = a[(k, k)].clone();
        if seen.iter().any(|s| s.approx_eq(&lam, pol.equality_atol)) {
            continue;
        }
        seen.push(lam.clone());
        let shifted = a - &Matrix::identity(n).scale(&lam);
        let rk = rank_and_kernel(&shifted, pol);
        for c in 0..rk.kernel.cols() {
            out.push(rk.kernel.column_matrix(c));
        }
    }
    if !T::EXACT {
        let c = a.to_c64();
        // eigenvector lines and, from left eigenvectors, invariant hyperplanes
        for lam in eigenvalues(&c).unwrap_or_default() {
            let shifted = &c - &CMatrix::identity(n).scale(&lam);
            let right = svd(&shifted).v;
            out.push(right.column_matrix(n - 1).map(|z| T::from_c64(*z)));
            if n > 2 {
                let left = svd(&shifted.adjoint()).v.column_matrix(n - 1);
                out.push(orthogonal_complement(&left, n, pol).map(|z| T::from_c64(*z)));
            }
        }
        if hermitian_deviation(&c) <= pol.equality_atol * c.max_abs().max(1.0) {
            if let Ok(e) = hermitian_eigen(&c, pol) {
                for k in 0..n {
                    out.push(e.basis.column_matrix(k).map(|z| T::from_c64(*z)));
                }
            }
        }
    }
    let single = CoupledFamily::new_unchecked(vec![n], vec![a.clone()]);
    for k in 0..n {
        if let Ok(u) = closure_from_seed(&single, &[(0, Matrix::unit(n, k))], pol) {
            out.push(u.basis(0).clone());
        }
    }
    out
}

fn random_vector<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<T> {
    Matrix::from_fn(n, 1, |_, _| {
        if T::EXACT {
            T::from_i64(rng.random_range(-3..=3))
        } else {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            T::from_c64(Complex64::new(re, im))
        }
    })
}

#[cfg(feature = "parallel")]
fn closures<T: Scalar>(
    f: &CoupledFamily<T>,
    pool: &[Vec<(usize, Matrix<T>)>],
    pol: &TolerancePolicy,
) -> Vec<Result<SubspaceFamily<T>>> {
    use rayon::prelude::*;
    pool.par_iter().map(|s| closure_from_seed(f, s, pol)).collect()
}

#[cfg(not(feature = "parallel"))]
fn closures<T: Scalar>(
    f: &CoupledFamily<T>,
    pool: &[Vec<(usize, Matrix<T>)>],
    pol: &TolerancePolicy,
) -> Vec<Result<SubspaceFamily<T>>> {
    pool.iter().map(|s| closure_from_seed(f, s, pol)).collect()
}

struct Found<T> {
    family: SubspaceFamily<T>,
    strength: Strength,
    residuals: Vec<PairResidual>,
}

struct Collector<T> {
    found: Vec<Found<T>>,
}

impl<T: Scalar> Collector<T> {
    fn offer(&mut self, f: &CoupledFamily<T>, u: SubspaceFamily<T>, pol: &TolerancePolicy) -> Result<()> {
        if self.found.iter().any(|g| g.family.same_spans(&u, pol)) {
            return Ok(());
        }
        let check = verify_reducing(f, &u, pol)?;
        if check.strength >= Strength::Trivial {
            self.found.push(Found { family: u, strength: check.strength, residuals: check.residuals });
        }
        Ok(())
    }

    fn hit(&self, target: Strength) -> bool {
        self.found.iter().any(|g| g.strength >= target)
    }
}

/// Looks for a reducing family of at least `cfg.target` strength. Seeds are
/// coordinate vectors, then eigenvector candidates of the diagonal blocks,
/// then seeded random vectors; found families are then combined by sums,
/// intersections, orthogonal complements (coupled-normal floating input)
/// and the extreme-pattern upgrade.
pub fn search_witness<T: Scalar>(
    f: &CoupledFamily<T>,
    cfg: &SearchConfig,
    pol: &TolerancePolicy,
) -> Result<SearchOutcome<T>> {
    let k = f.k();
    let dims = f.dims().to_vec();
    let mut pool: Vec<Vec<(usize, Matrix<T>)>> = Vec::new();
    for (i, &n) in dims.iter().enumerate() {
        for c in 0..n {
            pool.push(vec![(i, Matrix::unit(n, c))]);
        }
    }
    let candidates: Vec<Vec<Matrix<T>>> = (0..k).map(|i| block_invariant_candidates(f.block(i, i), pol)).collect();
    for (i, cands) in candidates.iter().enumerate() {
        for c in cands {
            for col in 0..c.cols() {
                pool.push(vec![(i, c.column_matrix(col))]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for r in 0..cfg.budget {
        let i = r % k;
        pool.push(vec![(i, random_vector(dims[i], &mut rng))]);
    }

    let mut col = Collector { found: Vec::new() };
    for u in closures(f, &pool, pol) {
        col.offer(f, u?, pol)?;
    }

    if !col.hit(cfg.target) {
        let n = col.found.len().min(MAX_COMBINED);
        for a in 0..n {
            for b in a + 1..n {
                let s = col.found[a].family.sum(&col.found[b].family, pol);
                let x = col.found[a].family.intersect(&col.found[b].family, pol)?;
                col.offer(f, s, pol)?;
                col.offer(f, x, pol)?;
            }
        }
    }

    if !col.hit(cfg.target) && !T::EXACT && f.is_coupled_normal(pol).normal {
        let n = col.found.len().min(MAX_COMBINED);
        for a in 0..n {
            let comp = SubspaceFamily::from_independent(
                col.found[a]
                    .family
                    .bases()
                    .iter()
                    .zip(&dims)
                    .map(|(b, &d)| orthogonal_complement(&b.to_c64(), d, pol).map(|z| T::from_c64(*z)))
                    .collect(),
            );
            col.offer(f, comp, pol)?;
        }
    }

    if !col.hit(cfg.target) {
        let n = col.found.len();
        for a in 0..n {
            let up = extreme_pattern_upgrade(f, &col.found[a].family, |p| candidates[p].clone(), pol)?;
            if let Some(up) = up {
                col.offer(f, up, pol)?;
            }
        }
    }

    let witness_idx = col.found.iter().position(|g| g.strength >= cfg.target);
    let best_strength = col.found.iter().map(|g| g.strength).max().unwrap_or(Strength::Trivial);
    let best_idx = col.found.iter().position(|g| g.strength == best_strength && g.strength >= Strength::Reducible);
    let residuals = witness_idx.or(best_idx).map(|x| col.found[x].residuals.clone()).unwrap_or_default();
    Ok(SearchOutcome {
        target: cfg.target,
        witness: witness_idx.map(|x| col.found[x].family.clone()),
        best_strength,
        best: best_idx.map(|x| col.found[x].family.clone()),
        residuals,
        seeds_tried: pool.len(),
        families_examined: col.found.len(),
        inconclusive: witness_idx.is_none(),
        seed: cfg.seed,
        generator: crate::fixtures::GENERATOR_NAME,
    })
}
