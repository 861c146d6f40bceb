//! Normal matrices under similarity, the 2x2 block embedding of a coupled
//! pair, orthogonal complements of invariant families, and the
//! scalar-times-unitary form of solutions between coupled-normal families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{CFamily, CoupledFamily};
use crate::graphs::{digraph, linked_graph, strongly_connected_components};
use crate::linalg::{containment, hermitian_eigen, inverse, orthogonal_complement, unitary_multiple_test, TolerancePolicy};
use crate::matrix::{CMatrix, Matrix};
use crate::report::one_based_opt;
use crate::scalar::Scalar;
use crate::sylvester::{
    audit_hypotheses, build_system, classify_solution, AuditOptions, BlockStatus, Hypothesis, HypothesisAudit, SchurClassification,
    TheoremKind, Tri,
};

fn normality_residual(a: &CMatrix) -> f64 {
    let d = &(a * &a.adjoint()) - &(&a.adjoint() * a);
    d.frobenius_norm() / a.frobenius_norm().powi(2).max(f64::MIN_POSITIVE)
}

fn commutator_residual(p: &CMatrix, q: &CMatrix) -> f64 {
    let d = &(p * q) - &(q * p);
    d.frobenius_norm() / (p.frobenius_norm() * q.frobenius_norm()).max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
    pub residual: f64,
}

/// The six equivalent conditions on `B = S^-1 A S` for normal `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityEquivalenceReport {
    pub conditions: Vec<Condition>,
    pub all_equal: bool,
}

pub fn normal_equivalence_suite(a: &CMatrix, s: &CMatrix, pol: &TolerancePolicy) -> Result<NormalityEquivalenceReport> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let nr = normality_residual(a);
    if nr > pol.equality_atol {
        return Err(Error::NotNormal(nr));
    }
    let si = inverse(s, pol)?;
    let b = &(&si * a) * s;
    let ssh = s * &s.adjoint();
    let shs = &s.adjoint() * s;
    let star = &(&si * &a.adjoint()) * s;
    let star_res = (&star - &b.adjoint()).frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE);
    let res = [
        ("B normal", normality_residual(&b)),
        ("S^-1 A* S = B*", star_res),
        ("SS* commutes with A", commutator_residual(&ssh, a)),
        ("SS* commutes with A*", commutator_residual(&ssh, &a.adjoint())),
        ("S*S commutes with B", commutator_residual(&shs, &b)),
        ("S*S commutes with B*", commutator_residual(&shs, &b.adjoint())),
    ];
    let conditions: Vec<Condition> =
        res.iter().map(|&(name, residual)| Condition { name, holds: residual <= pol.equality_atol, residual }).collect();
    let all_equal = conditions.iter().all(|c| c.holds == conditions[0].holds);
    Ok(NormalityEquivalenceReport { conditions, all_equal })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddedPair {
    #[serde(skip)]
    pub matrix: CMatrix,
    pub normal: bool,
    /// Larger of the two diagonal-block residuals of `MM* - M*M`, each
    /// relative to `max(||A_ij||^2, ||A_ji||^2, 1)`.
    pub residual: f64,
}

/// `M_ij = [[0, A_ij], [A_ji, 0]]`, normal iff `A_ij* A_ij = A_ji A_ji*`
/// and `A_ji* A_ji = A_ij A_ij*`.
pub fn embed_pair<T: Scalar>(f: &CoupledFamily<T>, i: usize, j: usize, pol: &TolerancePolicy) -> Result<EmbeddedPair> {
    if i >= f.k() || j >= f.k() {
        return Err(Error::Shape(format!("index ({}, {}) out of range for K = {}", i + 1, j + 1, f.k())));
    }
    let (ni, nj) = (f.dims()[i], f.dims()[j]);
    let mut m = Matrix::<T>::zeros(ni + nj, ni + nj);
    m.set_block(0, ni, f.block(i, j));
    m.set_block(ni, 0, f.block(j, i));
    let a = f.block(i, j);
    let b = f.block(j, i);
    let top = &(&b.adjoint() * b) - &(a * &a.adjoint());
    let bottom = &(&a.adjoint() * a) - &(b * &b.adjoint());
    let scale = a.frobenius_norm().powi(2).max(b.frobenius_norm().powi(2)).max(1.0);
    let residual = top.frobenius_norm().max(bottom.frobenius_norm()) / scale;
    let normal = if T::EXACT {
        top.is_zero_within(0.0) && bottom.is_zero_within(0.0)
    } else {
        residual <= pol.equality_atol
    };
    Ok(EmbeddedPair { matrix: m.to_c64(), normal, residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerpInvariance {
    /// Containment residual of `C(U^perp)` in `W^perp`.
    pub c_residual: f64,
    /// Containment residual of `D(W^perp)` in `U^perp`.
    pub d_residual: f64,
    pub holds: bool,
}

/// For `C*C = DD*`, `D*D = CC*` with `C(U) ⊆ W` and `D(W) ⊆ U`, checks
/// `C(U^perp) ⊆ W^perp` and `D(W^perp) ⊆ U^perp`.
pub fn perp_invariance_check(
    c: &CMatrix,
    d: &CMatrix,
    u: &CMatrix,
    w: &CMatrix,
    pol: &TolerancePolicy,
) -> Result<PerpInvariance> {
    let (q, p) = c.shape();
    if d.shape() != (p, q) || u.rows() != p || w.rows() != q {
        return Err(Error::Shape(format!(
            "C is {q}x{p}, D is {:?}, U lives in C^{}, W in C^{}",
            d.shape(),
            u.rows(),
            w.rows()
        )));
    }
    let scale = c.frobenius_norm().powi(2).max(d.frobenius_norm().powi(2)).max(1.0);
    let r1 = (&(&c.adjoint() * c) - &(d * &d.adjoint())).frobenius_norm() / scale;
    let r2 = (&(&d.adjoint() * d) - &(c * &c.adjoint())).frobenius_norm() / scale;
    if r1.max(r2) > pol.equality_atol {
        return Err(Error::Hypotheses(format!("C*C = DD* and D*D = CC* fail (residual {:.3e})", r1.max(r2))));
    }
    if !containment(w, &(c * u), pol)?.contained {
        return Err(Error::Hypotheses("C(U) is not contained in W".into()));
    }
    if !containment(u, &(d * w), pol)?.contained {
        return Err(Error::Hypotheses("D(W) is not contained in U".into()));
    }
    let up = orthogonal_complement(u, p, pol);
    let wp = orthogonal_complement(w, q, pol);
    let cr = containment(&wp, &(c * &up), pol)?;
    let dr = containment(&up, &(d * &wp), pol)?;
    Ok(PerpInvariance { c_residual: cr.residual, d_residual: dr.residual, holds: cr.contained && dr.contained })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutePart {
    /// `S_i S_i*` commutes with `A_ii`, `S_i* S_i` with `B_ii`.
    DiagonalCommute,
    /// `S_i S_i* A_ij = A_ij S_j S_j*` and `S_i* S_i B_ij = B_ij S_j* S_j`.
    Intertwine,
    /// `A_ij U_j(a) ⊆ U_i(a)`, `B_ij Y_j(a) ⊆ Y_i(a)`, equal dimensions across nonsingular blocks.
    EigenspaceInvariance,
    /// Equal `dim U_i(a)` on strong components of `D(A)`, `dim Y_i(a)` on those of `D(B)`.
    ComponentDimensions,
    /// `dim U_i(a) = dim Y_i(a)` for `a != 0`.
    LeftRightDimensions,
    /// Equal `dim U_i(a)` on components of `G(A, B)` for `a != 0`.
    LinkedDimensions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartCheck {
    pub part: CommutePart,
    /// Hypotheses of this part met for at least one instance.
    pub checked: bool,
    pub holds: bool,
    pub max_residual: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommuteReport {
    /// Index whose `S_p S_p*` spectrum was sampled.
    #[serde(serialize_with = "one_based_opt")]
    pub p: Option<usize>,
    pub alphas: Vec<f64>,
    pub parts: Vec<PartCheck>,
    pub holds: bool,
}

struct Eigenspaces {
    left: Vec<CMatrix>,
    right: Vec<CMatrix>,
}

fn eigenspaces(s: &[CMatrix], alpha: f64, tol: f64, pol: &TolerancePolicy) -> Result<Eigenspaces> {
    let mut left = Vec::with_capacity(s.len());
    let mut right = Vec::with_capacity(s.len());
    for si in s {
        let l = hermitian_eigen(&(si * &si.adjoint()), pol)?;
        let r = hermitian_eigen(&(&si.adjoint() * si), pol)?;
        left.push(l.eigenspace(alpha, tol));
        right.push(r.eigenspace(alpha, tol));
    }
    Ok(Eigenspaces { left, right })
}

fn require_solution(a: &CFamily, b: &CFamily, s: &[CMatrix], pol: &TolerancePolicy) -> Result<()> {
    let sys = build_system(a, b)?;
    sys.stack(s)?;
    let r = sys.relative_residual(s);
    if r > pol.equality_atol {
        return Err(Error::NotASolution(r));
    }
    Ok(())
}

fn require_normal(a: &CFamily, b: &CFamily, pol: &TolerancePolicy) -> Result<()> {
    for (name, f) in [("A", a), ("B", b)] {
        let n = f.is_coupled_normal(pol);
        if !n.normal {
            return Err(Error::Hypotheses(format!("{name} is not coupled normal (residual {:.3e})", n.max_residual)));
        }
    }
    Ok(())
}

fn nonsingular(s: &CMatrix, pol: &TolerancePolicy) -> bool {
    s.is_square() && !s.is_empty() && crate::linalg::rank(s, pol) == s.rows()
}

pub fn coupled_commute_checks(a: &CFamily, b: &CFamily, s: &[CMatrix], pol: &TolerancePolicy) -> Result<CommuteReport> {
    require_normal(a, b, pol)?;
    require_solution(a, b, s, pol)?;
    let k = a.k();
    let scale = s.iter().map(Matrix::frobenius_norm).fold(0.0, f64::max);
    let nons: Vec<bool> = s.iter().map(|m| nonsingular(m, pol)).collect();
    let all_nons = nons.iter().all(|&x| x);
    let mut parts = Vec::new();

    let mut diag = (false, true, 0.0f64);
    let mut inter = (false, true, 0.0f64);
    for i in 0..k {
        for j in 0..k {
            if !(nons[i] && nons[j]) {
                continue;
            }
            let (li, lj) = (&s[i] * &s[i].adjoint(), &s[j] * &s[j].adjoint());
            let (ri, rj) = (&s[i].adjoint() * &s[i], &s[j].adjoint() * &s[j]);
            let ra = (&(&li * a.block(i, j)) - &(a.block(i, j) * &lj)).frobenius_norm()
                / (li.frobenius_norm() * a.block(i, j).frobenius_norm()).max(f64::MIN_POSITIVE);
            let rb = (&(&ri * b.block(i, j)) - &(b.block(i, j) * &rj)).frobenius_norm()
                / (ri.frobenius_norm() * b.block(i, j).frobenius_norm()).max(f64::MIN_POSITIVE);
            let r = ra.max(rb);
            let slot = if i == j { &mut diag } else { &mut inter };
            slot.0 = true;
            slot.1 &= r <= pol.equality_atol;
            slot.2 = slot.2.max(r);
        }
    }
    for (part, (checked, holds, res)) in [(CommutePart::DiagonalCommute, diag), (CommutePart::Intertwine, inter)] {
        let note = if checked { "checked on nonsingular blocks".into() } else { "no nonsingular blocks".into() };
        parts.push(PartCheck { part, checked, holds: holds || !checked, max_residual: res, note });
    }

    let p = (0..k).find(|&i| s[i].frobenius_norm() > pol.equality_atol * scale && scale > 0.0);
    let mut alphas = Vec::new();
    let mut eig = (false, true, 0.0f64);
    let mut comp = (false, true);
    let mut lr = (false, true);
    let mut linked = (false, true);
    if let Some(p) = p {
        let tol = pol.subspace_rtol * scale * scale;
        let e = hermitian_eigen(&(&s[p] * &s[p].adjoint()), pol)?;
        alphas = e.distinct(tol);
        let da = strongly_connected_components(&digraph(a, pol));
        let db = strongly_connected_components(&digraph(b, pol));
        let g = linked_graph(&digraph(a, pol), &digraph(b, pol))?;
        for &alpha in &alphas {
            let sp = eigenspaces(s, alpha, tol, pol)?;
            let nonzero = alpha.abs() > tol;
            for i in 0..k {
                for j in 0..k {
                    if !(nons[i] && nons[j]) {
                        continue;
                    }
                    eig.0 = true;
                    let ca = containment(&sp.left[i], &(a.block(i, j) * &sp.left[j]), pol)?;
                    let cb = containment(&sp.right[i], &(b.block(i, j) * &sp.right[j]), pol)?;
                    eig.2 = eig.2.max(ca.residual).max(cb.residual);
                    eig.1 &= ca.contained && cb.contained;
                    if nonsingular(a.block(i, j), pol) {
                        eig.1 &= sp.left[i].cols() == sp.left[j].cols();
                    }
                    if nonsingular(b.block(i, j), pol) {
                        eig.1 &= sp.right[i].cols() == sp.right[j].cols();
                    }
                }
            }
            let equal_on = |parts: &[Vec<usize>], dims: &dyn Fn(usize) -> usize| {
                parts.iter().all(|c| c.iter().all(|&v| dims(v) == dims(c[0])))
            };
            if all_nons {
                comp.0 = true;
                comp.1 &= equal_on(&da.parts, &|v| sp.left[v].cols()) && equal_on(&db.parts, &|v| sp.right[v].cols());
            }
            if nonzero {
                lr.0 = true;
                lr.1 &= (0..k).all(|i| sp.left[i].cols() == sp.right[i].cols());
                if all_nons {
                    linked.0 = true;
                    linked.1 &= equal_on(&g.components, &|v| sp.left[v].cols());
                }
            }
        }
    }
    parts.push(PartCheck {
        part: CommutePart::EigenspaceInvariance,
        checked: eig.0,
        holds: eig.1,
        max_residual: eig.2,
        note: if eig.0 { "checked for pairs of nonsingular blocks".into() } else { "no pair of nonsingular blocks".into() },
    });
    let gate = |part, (checked, holds): (bool, bool), skipped: &str| PartCheck {
        part,
        checked,
        holds,
        max_residual: 0.0,
        note: if checked { "checked".into() } else { format!("skipped: {skipped}") },
    };
    parts.push(gate(CommutePart::ComponentDimensions, comp, "some S_i singular"));
    parts.push(gate(CommutePart::LeftRightDimensions, lr, "no nonzero alpha"));
    parts.push(gate(CommutePart::LinkedDimensions, linked, "some S_i singular or no nonzero alpha"));
    let holds = parts.iter().all(|p| p.holds);
    Ok(CommuteReport { p, alphas, parts, holds })
}

/// Classification of a solution between coupled-normal families, with the
/// scalar-times-unitary factors `S_i = alpha_i U_i`.
pub fn unitary_schur_classify(a: &CFamily, b: &CFamily, s: &[CMatrix], pol: &TolerancePolicy) -> Result<SchurClassification> {
    let audit = audit_hypotheses(a, b, pol, &AuditOptions::default())?;
    unitary_schur_classify_with(a, b, s, &audit, pol)
}

pub fn unitary_schur_classify_with(
    a: &CFamily,
    b: &CFamily,
    s: &[CMatrix],
    audit: &HypothesisAudit,
    pol: &TolerancePolicy,
) -> Result<SchurClassification> {
    let mut c = classify_solution(a, b, s, audit, pol)?;
    let normal = Tri::from_bool(audit.a.coupled_normal && audit.b.coupled_normal);
    let mut alphas = Vec::with_capacity(s.len());
    for (si, st) in s.iter().zip(&c.statuses) {
        let u = if *st == BlockStatus::Zero || !si.is_square() { None } else { unitary_multiple_test(si, pol)? };
        alphas.push(u.map(|u| u.alpha));
    }
    let nonzero: Vec<usize> = (0..s.len()).filter(|&i| c.statuses[i] != BlockStatus::Zero).collect();
    let common = if !nonzero.is_empty() && nonzero.len() == s.len() && alphas.iter().all(Option::is_some) {
        let first = alphas[0].unwrap();
        alphas.iter().flatten().all(|x| (x - first).abs() <= pol.equality_atol * first.max(1.0)).then_some(first)
    } else {
        None
    };
    let all_zero = nonzero.is_empty();
    let each = nonzero.iter().all(|&i| alphas[i].is_some());
    let per_index_scalar = nonzero.iter().all(|&i| c.per_index_alpha[i].is_some());
    let same = audit.same_family;
    let global = all_zero || (common.is_some() && (!same || c.scalar_alpha.is_some()));
    let local = each && (!same || per_index_scalar);
    for t in &mut c.theorems {
        let conclusion = match t.kind {
            TheoremKind::CoupledIrreducible | TheoremKind::ConnectedLinkedGraph => global,
            TheoremKind::NotProperlyReducible => local,
            TheoremKind::StronglyConnectedDigraphs => continue,
        };
        t.hypotheses.push(Hypothesis { name: "A and B coupled normal", status: normal });
        t.applies = t.applies && normal == Tri::Holds;
        t.conclusion_holds = t.conclusion_holds && conclusion;
        t.violation = t.applies && !t.conclusion_holds;
        if t.applies {
            t.note = if t.violation {
                "hypotheses hold and the unitary conclusion fails".into()
            } else {
                "hypotheses hold, unitary conclusion verified".into()
            };
        }
    }
    c.unitary_alphas = alphas;
    c.unitary_alpha = common;
    Ok(c)
}
