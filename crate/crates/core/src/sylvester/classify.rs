use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{build_system, propagation_check, solve, PropagationReport, SolutionSpace};
use crate::error::{Error, Result};
use crate::family::CoupledFamily;
use crate::fixtures::GENERATOR_NAME;
use crate::graphs::{digraph, linked_graph, strongly_connected_components};
use crate::linalg::{exact, rank, svd::svd, TolerancePolicy};
use crate::matrix::Matrix;
use crate::reducibility::{
    chain_classify, chain_lattice, coupled_irreducible_burnside, search_witness, LatticeKind, SearchConfig, Strength,
};
use crate::report::{complex_pair_opt, complex_pairs_opt, one_based_vec, EntryCodec};
use crate::scalar::Scalar;

/// A floating block is nonsingular when `sigma_min > NONSINGULAR_MARGIN * sigma_max`.
pub const NONSINGULAR_MARGIN: f64 = 1e-8;

const SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tri {
    Holds,
    Fails,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Holds
        } else {
            Tri::Fails
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Fails, _) | (_, Tri::Fails) => Tri::Fails,
            (Tri::Holds, Tri::Holds) => Tri::Holds,
            _ => Tri::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditOptions {
    pub burnside_max_dim: Option<usize>,
    /// Random seed vectors per witness search.
    pub budget: usize,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self { burnside_max_dim: None, budget: 32, seed: 0 }
    }
}

/// Reducibility facts about one family, over the complex numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyAudit {
    pub irreducible: Tri,
    pub not_properly_reducible: Tri,
    pub not_strongly_reducible: Tri,
    /// `burnside`, `exhaustive-chain`, `search` or `none`, for the reducibility negatives.
    pub method: &'static str,
    pub digraph_strongly_connected: bool,
    pub coupled_normal: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisAudit {
    pub a: FamilyAudit,
    pub b: FamilyAudit,
    pub equal_dims: bool,
    pub linked_graph_connected: bool,
    pub same_family: bool,
}

fn same_family<T: Scalar>(a: &CoupledFamily<T>, b: &CoupledFamily<T>, pol: &TolerancePolicy) -> bool {
    a.dims() == b.dims() && a.blocks().zip(b.blocks()).all(|((_, _, p), (_, _, q))| p.approx_eq(q, pol.equality_atol))
}

fn audit_family<T: Scalar>(f: &CoupledFamily<T>, pol: &TolerancePolicy, opts: &AuditOptions) -> FamilyAudit {
    let digraph_strongly_connected = strongly_connected_components(&digraph(f, pol)).strongly_connected;
    let coupled_normal = f.is_coupled_normal(pol).normal;
    let mut out = FamilyAudit {
        irreducible: Tri::Unknown,
        not_properly_reducible: Tri::Unknown,
        not_strongly_reducible: Tri::Unknown,
        method: "none",
        digraph_strongly_connected,
        coupled_normal,
        note: None,
    };
    match coupled_irreducible_burnside(&f.to_c64(), pol, opts.burnside_max_dim) {
        Ok(c) if c.irreducible => {
            out.irreducible = Tri::Holds;
            out.not_properly_reducible = Tri::Holds;
            out.not_strongly_reducible = Tri::Holds;
            out.method = "burnside";
            return out;
        }
        Ok(_) => out.irreducible = Tri::Fails,
        Err(e) => out.note = Some(e.to_string()),
    }

    // Rotation lattices are certified over the reals only; over the complex
    // numbers those blocks have eigenvectors, so they go to the search.
    let exact = f.to_exact();
    let complex_chain = (0..f.k()).all(|i| chain_lattice(exact.block(i, i)).is_some_and(|l| l.kind != LatticeKind::RealRotation));
    if complex_chain {
        if let Ok(v) = chain_classify(&exact) {
            if let Some(p) = v.spectrum.proper {
                out.not_properly_reducible = Tri::from_bool(!p);
            }
            if let Some(s) = v.spectrum.strong {
                out.not_strongly_reducible = Tri::from_bool(!s);
            }
            if let Some(r) = v.spectrum.reducible {
                out.irreducible = Tri::from_bool(!r);
            }
            out.method = "exhaustive-chain";
            return out;
        }
    }

    let cfg = SearchConfig { target: Strength::StronglyReducible, budget: opts.budget, seed: opts.seed };
    match search_witness(&f.to_c64(), &cfg, pol) {
        Ok(s) => {
            out.method = "search";
            if s.best_strength >= Strength::ProperlyReducible {
                out.not_properly_reducible = Tri::Fails;
            }
            if s.best_strength >= Strength::StronglyReducible {
                out.not_strongly_reducible = Tri::Fails;
            }
            if s.best_strength >= Strength::Reducible {
                out.irreducible = Tri::Fails;
            }
        }
        Err(e) => out.note = Some(e.to_string()),
    }
    out
}

pub fn audit_hypotheses<T: Scalar>(
    a: &CoupledFamily<T>,
    b: &CoupledFamily<T>,
    pol: &TolerancePolicy,
    opts: &AuditOptions,
) -> Result<HypothesisAudit> {
    if a.k() != b.k() {
        return Err(Error::IndexCountMismatch(a.k(), b.k()));
    }
    let all_equal = |d: &[usize]| d.windows(2).all(|w| w[0] == w[1]);
    let linked = linked_graph(&digraph(a, pol), &digraph(b, pol))?;
    Ok(HypothesisAudit {
        a: audit_family(a, pol, opts),
        b: audit_family(b, pol, opts),
        equal_dims: all_equal(a.dims()) && all_equal(b.dims()),
        linked_graph_connected: linked.connected,
        same_family: same_family(a, b, pol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockStatus {
    Zero,
    Nonsingular,
    SingularNonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremKind {
    /// Both families coupled irreducible: all blocks zero or all nonsingular.
    CoupledIrreducible,
    /// Neither family properly reducible: each block zero or nonsingular.
    NotProperlyReducible,
    /// Neither strongly reducible, both digraphs strongly connected.
    StronglyConnectedDigraphs,
    /// Neither strongly reducible, equal dimensions, linked graph connected.
    ConnectedLinkedGraph,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub status: Tri,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub kind: TheoremKind,
    pub hypotheses: Vec<Hypothesis>,
    /// Every hypothesis holds.
    pub applies: bool,
    pub conclusion_holds: bool,
    /// The theorem applies and its conclusion fails.
    pub violation: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroPattern {
    #[serde(serialize_with = "one_based_vec")]
    pub zero: Vec<usize>,
    #[serde(serialize_with = "one_based_vec")]
    pub nonsingular: Vec<usize>,
    /// `(i, j, "A")` when `A_ij != 0`, `(i, j, "B")` when `B_ji != 0`, 1-based.
    pub violations: Vec<(usize, usize, &'static str)>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurClassification {
    pub statuses: Vec<BlockStatus>,
    /// `sigma_min / sigma_max` of each nonzero square block.
    pub sigma_ratios: Vec<Option<f64>>,
    /// `X_i = alpha_i I` for nonzero square blocks, when it holds.
    #[serde(serialize_with = "complex_pairs_opt")]
    pub per_index_alpha: Vec<Option<Complex64>>,
    /// Common `alpha` with every block equal to `alpha I`.
    #[serde(serialize_with = "complex_pair_opt")]
    pub scalar_alpha: Option<Complex64>,
    /// `||X - diag-scalar part|| / ||X||` over all blocks.
    pub off_diagonal_mass: f64,
    /// Filled by the unitary classification: `alpha_i` with `S_i = alpha_i U_i`.
    pub unitary_alphas: Vec<Option<f64>>,
    pub unitary_alpha: Option<f64>,
    pub theorems: Vec<TheoremCheck>,
    pub zero_pattern: ZeroPattern,
    pub residual: f64,
}

impl SchurClassification {
    pub fn violations(&self) -> usize {
        self.theorems.iter().filter(|t| t.violation).count() + usize::from(!self.zero_pattern.holds)
    }
}

fn block_status<T: Scalar>(x: &Matrix<T>, scale: f64, pol: &TolerancePolicy) -> (BlockStatus, Option<f64>) {
    if T::EXACT {
        if x.is_zero_within(0.0) {
            return (BlockStatus::Zero, None);
        }
        if !x.is_square() {
            return (BlockStatus::SingularNonzero, None);
        }
        let full = exact::rank_and_kernel(x).rank == x.rows();
        let st = if full { BlockStatus::Nonsingular } else { BlockStatus::SingularNonzero };
        return (st, None);
    }
    if x.frobenius_norm() <= pol.equality_atol * scale || x.is_empty() {
        return (BlockStatus::Zero, None);
    }
    let s = svd(&x.to_c64()).singular_values;
    let ratio = s.last().copied().unwrap_or(0.0) / s[0];
    let st = if x.is_square() && ratio > NONSINGULAR_MARGIN { BlockStatus::Nonsingular } else { BlockStatus::SingularNonzero };
    (st, x.is_square().then_some(ratio))
}

/// `(alpha, ||X - alpha I||)` with `alpha` the mean of the diagonal.
fn scalar_part<T: Scalar>(x: &Matrix<T>) -> (Complex64, f64) {
    let n = x.rows();
    let c = x.to_c64();
    let alpha = c.trace() / n as f64;
    let dev = (&c - &Matrix::identity(n).scale(&alpha)).frobenius_norm();
    (alpha, dev)
}

fn exact_scalar<T: Scalar>(x: &Matrix<T>) -> bool {
    x.scalar_multiple_of_identity(0.0).is_some()
}

pub fn classify_solution<T: Scalar>(
    a: &CoupledFamily<T>,
    b: &CoupledFamily<T>,
    x: &[Matrix<T>],
    audit: &HypothesisAudit,
    pol: &TolerancePolicy,
) -> Result<SchurClassification> {
    let sys = build_system(a, b)?;
    sys.stack(x)?;
    let residual = sys.relative_residual(x);
    let solved = if T::EXACT {
        sys.residual_blocks(x).iter().all(|r| r.is_zero_within(0.0))
    } else {
        residual <= pol.equality_atol
    };
    if !solved {
        return Err(Error::NotASolution(residual));
    }
    let k = x.len();
    let scale = x.iter().map(Matrix::frobenius_norm).fold(0.0, f64::max);
    let total = x.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt();
    let (statuses, sigma_ratios): (Vec<_>, Vec<_>) = x.iter().map(|xi| block_status(xi, scale, pol)).unzip();

    let scalar_tol = pol.equality_atol * scale;
    let mut per_index_alpha = Vec::with_capacity(k);
    let mut mass = 0.0;
    for (xi, st) in x.iter().zip(&statuses) {
        if !xi.is_square() || xi.is_empty() {
            mass += xi.frobenius_norm().powi(2);
            per_index_alpha.push(None);
            continue;
        }
        let (alpha, dev) = scalar_part(xi);
        mass += dev * dev;
        let is_scalar = if T::EXACT { exact_scalar(xi) } else { dev <= scalar_tol };
        per_index_alpha.push((*st != BlockStatus::Zero && is_scalar).then_some(alpha));
    }
    let off_diagonal_mass = if total > 0.0 { mass.sqrt() / total } else { 0.0 };

    let nonzero: Vec<usize> = (0..k).filter(|&i| statuses[i] != BlockStatus::Zero).collect();
    let scalar_alpha = if nonzero.len() == k && k > 0 && per_index_alpha.iter().all(Option::is_some) {
        let first = per_index_alpha[0].unwrap();
        let close = |z: &Complex64| if T::EXACT { (z - first).norm() == 0.0 } else { (z - first).norm() <= scalar_tol };
        per_index_alpha.iter().flatten().all(close).then_some(first)
    } else {
        None
    };

    let all_zero = nonzero.is_empty();
    let all_nonsingular = statuses.iter().all(|s| *s == BlockStatus::Nonsingular);
    let each_ok = statuses.iter().all(|s| *s != BlockStatus::SingularNonzero);
    let per_index_scalar = nonzero.iter().all(|&i| per_index_alpha[i].is_some());
    let same = audit.same_family;
    let global = all_zero || (all_nonsingular && (!same || scalar_alpha.is_some()));
    let local = each_ok && (!same || per_index_scalar);

    let h = |name, status| Hypothesis { name, status };
    let specs = [
        (
            TheoremKind::CoupledIrreducible,
            vec![h("A coupled irreducible", audit.a.irreducible), h("B coupled irreducible", audit.b.irreducible)],
            global,
        ),
        (
            TheoremKind::NotProperlyReducible,
            vec![
                h("A not properly reducible", audit.a.not_properly_reducible),
                h("B not properly reducible", audit.b.not_properly_reducible),
            ],
            local,
        ),
        (
            TheoremKind::StronglyConnectedDigraphs,
            vec![
                h("A not strongly reducible", audit.a.not_strongly_reducible),
                h("B not strongly reducible", audit.b.not_strongly_reducible),
                h("D(A) strongly connected", Tri::from_bool(audit.a.digraph_strongly_connected)),
                h("D(B) strongly connected", Tri::from_bool(audit.b.digraph_strongly_connected)),
            ],
            global,
        ),
        (
            TheoremKind::ConnectedLinkedGraph,
            vec![
                h("A not strongly reducible", audit.a.not_strongly_reducible),
                h("B not strongly reducible", audit.b.not_strongly_reducible),
                h("equal dimensions", Tri::from_bool(audit.equal_dims)),
                h("G(A,B) connected", Tri::from_bool(audit.linked_graph_connected)),
            ],
            global,
        ),
    ];
    let theorems = specs
        .into_iter()
        .map(|(kind, hypotheses, conclusion_holds)| {
            let status = hypotheses.iter().fold(Tri::Holds, |acc, h| acc.and(h.status));
            let applies = status == Tri::Holds;
            let violation = applies && !conclusion_holds;
            let unmet: Vec<&str> = hypotheses.iter().filter(|h| h.status != Tri::Holds).map(|h| h.name).collect();
            let note = if applies {
                if violation { "hypotheses hold and the conclusion fails".into() } else { "hypotheses hold, conclusion verified".into() }
            } else {
                let verb = if status == Tri::Fails { "unmet" } else { "undecided" };
                format!("hypotheses {verb} ({}), no violation possible", unmet.join(", "))
            };
            TheoremCheck { kind, hypotheses, applies, conclusion_holds, violation, note }
        })
        .collect();

    Ok(SchurClassification {
        zero_pattern: zero_pattern(a, b, &statuses, pol),
        statuses,
        sigma_ratios,
        per_index_alpha,
        scalar_alpha,
        off_diagonal_mass,
        unitary_alphas: Vec::new(),
        unitary_alpha: None,
        theorems,
        residual,
    })
}

fn zero_pattern<T: Scalar>(
    a: &CoupledFamily<T>,
    b: &CoupledFamily<T>,
    statuses: &[BlockStatus],
    pol: &TolerancePolicy,
) -> ZeroPattern {
    let zero: Vec<usize> = (0..statuses.len()).filter(|&i| statuses[i] == BlockStatus::Zero).collect();
    let nonsingular: Vec<usize> = (0..statuses.len()).filter(|&i| statuses[i] == BlockStatus::Nonsingular).collect();
    let scale_a = a.assemble().frobenius_norm().max(1.0);
    let scale_b = b.assemble().frobenius_norm().max(1.0);
    let mut violations = Vec::new();
    for &i in &zero {
        for &j in &nonsingular {
            if !a.block(i, j).is_zero_within(pol.equality_atol * scale_a) {
                violations.push((i + 1, j + 1, "A"));
            }
            if !b.block(j, i).is_zero_within(pol.equality_atol * scale_b) {
                violations.push((j + 1, i + 1, "B"));
            }
        }
    }
    ZeroPattern { holds: violations.is_empty(), zero, nonsingular, violations }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionFinding {
    /// `basis` or `sample`.
    pub source: &'static str,
    pub index: usize,
    pub classification: SchurClassification,
    pub propagation: PropagationReport,
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: EntryCodec"))]
pub struct DichotomyReport<T> {
    pub audit: HypothesisAudit,
    pub solutions: SolutionSpace<T>,
    pub findings: Vec<SolutionFinding>,
    pub seed: u64,
    pub generator: &'static str,
    /// Theorem violations plus zero-pattern failures plus propagation failures.
    pub violations: usize,
    pub max_propagation_residual: f64,
}

fn random_combination<T: Scalar>(basis: &[Vec<Matrix<T>>], rng: &mut ChaCha8Rng) -> Vec<Matrix<T>> {
    let coeffs: Vec<T> = basis
        .iter()
        .map(|_| {
            if T::EXACT {
                T::from_i64(rng.random_range(-3..=3))
            } else {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                T::from_c64(Complex64::new(re, im))
            }
        })
        .collect();
    let mut out: Vec<Matrix<T>> = basis[0].iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
    for (c, sol) in coeffs.iter().zip(basis) {
        for (acc, m) in out.iter_mut().zip(sol) {
            *acc = &*acc + &m.scale(c);
        }
    }
    out
}

/// Audits the hypotheses, solves the system and classifies the basis
/// solutions together with seeded random combinations of them.
pub fn dichotomy_report<T: Scalar>(
    a: &CoupledFamily<T>,
    b: &CoupledFamily<T>,
    pol: &TolerancePolicy,
    opts: &AuditOptions,
) -> Result<DichotomyReport<T>> {
    let audit = audit_hypotheses(a, b, pol, opts)?;
    let sys = build_system(a, b)?;
    let solutions = solve(&sys, pol);
    let mut candidates: Vec<(&'static str, usize, Vec<Matrix<T>>)> =
        solutions.basis.iter().cloned().enumerate().map(|(i, x)| ("basis", i, x)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    if !solutions.basis.is_empty() {
        for s in 0..SAMPLES {
            candidates.push(("sample", s, random_combination(&solutions.basis, &mut rng)));
        }
    }
    let mut findings = Vec::with_capacity(candidates.len());
    let mut violations = 0;
    let mut max_prop: f64 = 0.0;
    for (source, index, x) in candidates {
        let classification = classify_solution(a, b, &x, &audit, pol)?;
        let propagation = propagation_check(a, b, &x, pol)?;
        violations += classification.violations() + usize::from(!propagation.holds);
        max_prop = max_prop.max(propagation.max_residual);
        let scale = x.iter().map(Matrix::frobenius_norm).fold(0.0, f64::max);
        let p = pol.with_rank_atol(pol.rank_atol.max(pol.equality_atol * scale));
        let ranks = x.iter().map(|m| rank(m, &p)).collect();
        findings.push(SolutionFinding { source, index, classification, propagation, ranks });
    }
    Ok(DichotomyReport {
        audit,
        solutions,
        findings,
        seed: opts.seed,
        generator: GENERATOR_NAME,
        violations,
        max_propagation_residual: max_prop,
    })
}
