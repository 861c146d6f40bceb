//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::cell::RefCell;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use coupled_core::fixtures::{figure1_pair, make_fixture, random_pair, Fixture, FixtureKind, FixtureParams, FixtureSpec, RandomKind};
use coupled_core::graphs::{digraph, linked_graph, solution_rank_report, strongly_connected_components};
use coupled_core::linalg::{containment, TolerancePolicy};
use coupled_core::normality::{normal_equivalence_suite, unitary_schur_classify};
use coupled_core::reducibility::{block_form_transform, chain_classify, coupled_irreducible_burnside, Strength};
use coupled_core::sylvester::{
    audit_hypotheses, build_system, classify_solution, dichotomy_report, propagation_check, solve, AuditOptions, BlockStatus,
};
use coupled_core::{CMatrix, Complex64, Matrix, QFamily, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

thread_local! {
    /// (solutions checked, failures, max residual) over every solution computed below.
    static PROPAGATION: RefCell<(usize, usize, f64)> = const { RefCell::new((0, 0, 0.0)) };
}

fn record_propagation<T: Scalar>(a: &coupled_core::CoupledFamily<T>, b: &coupled_core::CoupledFamily<T>, x: &[Matrix<T>]) {
    let r = propagation_check(a, b, x, &pol());
    PROPAGATION.with(|p| {
        let mut p = p.borrow_mut();
        p.0 += 1;
        match r {
            Ok(r) => {
                if !r.holds || r.max_residual >= 1e-9 {
                    p.1 += 1;
                }
                p.2 = p.2.max(r.max_residual);
            }
            Err(_) => p.1 += 1,
        }
    });
}

fn pair(kind: FixtureKind) -> (QFamily, QFamily, Option<Vec<Matrix<coupled_core::GaussRational>>>) {
    let Fixture::Pair { a, b, planted } = make_fixture(&FixtureSpec::new(kind)).unwrap() else { panic!() };
    (a, b, planted)
}

fn family(kind: FixtureKind, dims: Option<Vec<usize>>) -> QFamily {
    let spec = FixtureSpec { kind, params: FixtureParams { dims, ..Default::default() }, overrides: Vec::new() };
    make_fixture(&spec).unwrap().family().clone()
}

fn spectrum(f: &QFamily) -> Result<(bool, bool, bool), String> {
    let s = chain_classify(f).map_err(|e| e.to_string())?.spectrum;
    Ok((s.reducible.unwrap(), s.proper.unwrap(), s.strong.unwrap()))
}

fn nilpotent_pair() -> Outcome {
    let (a, b, planted) = pair(FixtureKind::Example51);
    let x = planted.unwrap();
    let sys = build_system(&a, &b).map_err(|e| e.to_string())?;
    let sol = solve(&sys, &pol());
    ensure!(sol.residuals.iter().all(|&r| r == 0.0), "nonzero exact residual");
    let stack = |x: &[Matrix<coupled_core::GaussRational>]| sys.stack(x).unwrap();
    let cols: Vec<_> = sol.basis.iter().map(|s| stack(s).column(0)).collect();
    let span = Matrix::from_columns(sys.operator.cols(), &cols);
    ensure!(containment(&span, &stack(&x), &pol()).unwrap().contained, "(N_2, 0) not in the solution space");
    ensure!((&sys.operator * &stack(&x)).is_zero_within(0.0), "(N_2, 0) is not an exact solution");
    for s in &sol.basis {
        record_propagation(&a, &b, s);
    }
    record_propagation(&a, &b, &x);
    let audit = audit_hypotheses(&a, &b, &pol(), &AuditOptions::default()).map_err(|e| e.to_string())?;
    let cls = classify_solution(&a, &b, &x, &audit, &pol()).map_err(|e| e.to_string())?;
    ensure!(cls.statuses == vec![BlockStatus::SingularNonzero, BlockStatus::Zero], "statuses {:?}", cls.statuses);
    ensure!(cls.violations() == 0, "classification reports a violation");
    for (name, f) in [("A", &a), ("B", &b)] {
        let (red, proper, strong) = spectrum(f)?;
        ensure!(red && proper && !strong, "{name}: reducible {red}, proper {proper}, strong {strong}");
    }
    Ok(format!("solution space dim {}, (N_2, 0) exact, statuses (singular-nonzero, zero), both proper and not strong", sol.dimension))
}

fn chain_certificates() -> Outcome {
    let a2 = spectrum(&family(FixtureKind::ProperNotStrong, Some(vec![2, 2])))?;
    ensure!(a2 == (true, true, false), "proper_not_strong: {a2:?}");
    let a3 = spectrum(&family(FixtureKind::RedNotProper, Some(vec![2, 2, 2, 2])))?;
    ensure!(a3 == (true, false, false), "red_not_proper: {a3:?}");
    let rot = spectrum(&family(FixtureKind::RotationFamily, None))?;
    ensure!(rot == (true, false, false), "rotation: {rot:?}");
    Ok("proper-not-strong, reducible-not-proper and rotation certified exactly".into())
}

fn similar_trials() -> Vec<coupled_core::fixtures::RandomPair> {
    (0..50).map(|s| random_pair(RandomKind::CoupledSimilar, &[2, 3, 2], s).unwrap()).collect()
}

fn schur_dichotomy() -> Outcome {
    let mut classified = 0;
    for p in similar_trials() {
        let cert = coupled_irreducible_burnside(&p.a, &pol(), None).map_err(|e| e.to_string())?;
        ensure!(cert.irreducible, "seed {}: A not certified irreducible", p.seed);
        let cert = coupled_irreducible_burnside(&p.b, &pol(), None).map_err(|e| e.to_string())?;
        ensure!(cert.irreducible, "seed {}: B not certified irreducible", p.seed);
        let opts = AuditOptions { seed: p.seed, ..Default::default() };
        let rep = dichotomy_report(&p.a, &p.b, &pol(), &opts).map_err(|e| e.to_string())?;
        ensure!(rep.violations == 0, "seed {}: {} violations", p.seed, rep.violations);
        for f in &rep.findings {
            let st = &f.classification.statuses;
            let all_zero = st.iter().all(|s| *s == BlockStatus::Zero);
            let all_nons = st.iter().all(|s| *s == BlockStatus::Nonsingular);
            ensure!(all_zero || all_nons, "seed {}: mixed statuses {st:?}", p.seed);
            ensure!(f.classification.sigma_ratios.iter().flatten().all(|&r| all_zero || r > 1e-8), "seed {}: margin", p.seed);
            classified += 1;
        }
        for s in &rep.solutions.basis {
            record_propagation(&p.a, &p.b, s);
        }
        ensure!(rep.findings.iter().all(|f| f.propagation.holds), "seed {}: propagation", p.seed);
    }
    Ok(format!("50 trials, {classified} solutions classified, 0 violations"))
}

fn scalar_case() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in similar_trials() {
        let a = &p.a;
        ensure!(coupled_irreducible_burnside(a, &pol(), None).unwrap().irreducible, "seed {}: reducible", p.seed);
        let sol = solve(&build_system(a, a).unwrap(), &pol());
        ensure!(sol.dimension == 1, "seed {}: dimension {}", p.seed, sol.dimension);
        let x = &sol.basis[0];
        record_propagation(a, a, x);
        let audit = audit_hypotheses(a, a, &pol(), &AuditOptions::default()).map_err(|e| e.to_string())?;
        let cls = classify_solution(a, a, x, &audit, &pol()).map_err(|e| e.to_string())?;
        ensure!(cls.scalar_alpha.is_some(), "seed {}: generator is not a scalar", p.seed);
        ensure!(cls.off_diagonal_mass < 1e-10, "seed {}: off-diagonal mass {:.3e}", p.seed, cls.off_diagonal_mass);
        worst = worst.max(cls.off_diagonal_mass);
        // independent nullity on the rational-rounded family
        let q = rationalize(a, 64);
        let op = build_system(&q, &q).unwrap().operator;
        let nullity = op.cols() - oracle_rank(&op);
        ensure!(nullity == 1, "seed {}: oracle nullity {nullity}", p.seed);
    }
    Ok(format!("50 trials, dimension 1, scalar generator, max off-diagonal mass {worst:.1e}, oracle nullity 1"))
}

fn oracle_agreement() -> Outcome {
    let mut fams: Vec<(String, QFamily)> = vec![
        ("proper_not_strong".into(), family(FixtureKind::ProperNotStrong, Some(vec![2, 2]))),
        ("red_not_proper".into(), family(FixtureKind::RedNotProper, Some(vec![2, 2, 2, 2]))),
        ("rotation".into(), family(FixtureKind::RotationFamily, None)),
    ];
    let (a, b, _) = pair(FixtureKind::Example51);
    fams.push(("nilpotent pair A".into(), a));
    fams.push(("nilpotent pair B".into(), b));
    for (name, f) in &fams {
        let chain = chain_classify(f).map_err(|e| e.to_string())?.spectrum.reducible.unwrap();
        let burnside = !coupled_irreducible_burnside(&f.to_c64(), &pol(), None).map_err(|e| e.to_string())?.irreducible;
        ensure!(chain == burnside, "{name}: chain {chain}, algebra span {burnside}");
    }
    Ok(format!("{}/{} fixtures agree", fams.len(), fams.len()))
}

fn graph_suite() -> Outcome {
    let Fixture::Pair { a, b, planted } = figure1_pair(2).unwrap() else { panic!() };
    let da = digraph(&a, &pol());
    let db = digraph(&b, &pol());
    ensure!(da.edge_list() == "1 2\n2 1\n", "D(A) edges {:?}", da.edges);
    ensure!(db.edge_list() == "1 3\n3 1\n", "D(B) edges {:?}", db.edges);
    ensure!(!strongly_connected_components(&da).strongly_connected, "D(A) strongly connected");
    ensure!(!strongly_connected_components(&db).strongly_connected, "D(B) strongly connected");
    let g = linked_graph(&da, &db).unwrap();
    ensure!(g.connected, "G(A, B) not connected");
    let sol = solve(&build_system(&a, &b).unwrap(), &pol());
    let mut sols = sol.basis.clone();
    sols.push(planted.unwrap());
    for x in &sols {
        record_propagation(&a, &b, x);
        let rep = solution_rank_report(&a, &b, x, &pol()).unwrap();
        ensure!(rep.is_clean(), "rank report has {} violations", rep.violations);
    }
    Ok(format!("example pair digraphs reproduced, linked graph connected, {} solutions with equal linked ranks", sols.len()))
}

fn normality_suite() -> Outcome {
    for trial in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let n = 1 + (trial as usize % 4);
        let q = seeded_unitary(&mut rng, n);
        let d: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64 + 1.0, 0.5 * k as f64 - 0.3)).collect();
        let a = &(&q * &diag(&d)) * &q.adjoint();
        let s = match trial % 3 {
            0 => seeded_unitary(&mut rng, n),
            1 => {
                let e: Vec<Complex64> = (0..n).map(|k| Complex64::new(1.5 + k as f64, 0.0)).collect();
                &(&q * &diag(&e)) * &q.adjoint()
            }
            _ => &seeded_matrix(&mut rng, n, n) + &CMatrix::identity(n).scale(&Complex64::new(2.0, 0.0)),
        };
        let rep = normal_equivalence_suite(&a, &s, &pol()).map_err(|e| e.to_string())?;
        ensure!(rep.all_equal, "trial {trial}: {:?}", rep.conditions);
    }
    Ok("50 trials, the six conditions agree in every trial".into())
}

fn normal_schur() -> Outcome {
    let mut trials = 0;
    let mut seed = 0;
    while trials < 25 {
        ensure!(seed < 200, "only {trials} irreducible trials in 200 seeds");
        let p = random_pair(RandomKind::CoupledNormalSimilar, &[2, 2, 2], seed).unwrap();
        seed += 1;
        if !coupled_irreducible_burnside(&p.a, &pol(), None).unwrap().irreducible {
            continue;
        }
        trials += 1;
        let sol = solve(&build_system(&p.a, &p.b).unwrap(), &pol());
        ensure!(sol.dimension == 1, "seed {}: dimension {}", p.seed, sol.dimension);
        let s = &sol.basis[0];
        record_propagation(&p.a, &p.b, s);
        let gram: Vec<CMatrix> = s.iter().map(|x| x * &x.adjoint()).collect();
        let lambda = gram[0].trace().re / 2.0;
        ensure!(lambda > 0.0, "seed {}: lambda {lambda}", p.seed);
        for g in &gram {
            let dev = (g - &CMatrix::identity(2).scale(&Complex64::new(lambda, 0.0))).frobenius_norm();
            ensure!(dev < 1e-9, "seed {}: ||S S* - lambda I|| = {dev:.3e}", p.seed);
        }
        let cls = unitary_schur_classify(&p.a, &p.b, s, &pol()).map_err(|e| e.to_string())?;
        ensure!(cls.unitary_alphas.iter().all(Option::is_some), "seed {}: unitary multiple test failed", p.seed);
        ensure!(cls.unitary_alpha.is_some(), "seed {}: no common alpha", p.seed);
        ensure!(cls.violations() == 0, "seed {}: violation", p.seed);
    }
    Ok(format!("25 irreducible trials ({seed} seeds), dimension 1, common lambda and alpha"))
}

fn propagation() -> Outcome {
    // a few more solution spaces beyond those above
    for seed in 0..10 {
        let p = random_pair(RandomKind::PlantedReducible(Strength::ProperlyReducible), &[2, 3, 2], seed).unwrap();
        for x in solve(&build_system(&p.a, &p.a).unwrap(), &pol()).basis {
            record_propagation(&p.a, &p.a, &x);
        }
    }
    let (n, fails, worst) = PROPAGATION.with(|p| *p.borrow());
    ensure!(n > 0, "no solutions recorded");
    ensure!(fails == 0, "{fails} of {n} solutions fail (max residual {worst:.3e})");
    Ok(format!("{n} solutions, max containment residual {worst:.1e}"))
}

fn normal_block_form() -> Outcome {
    let strengths = [Strength::StronglyReducible, Strength::ProperlyReducible, Strength::Reducible];
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let strength = strengths[seed as usize % 3];
        let p = random_pair(RandomKind::PlantedNormalReducible(strength), &[2, 2, 2], seed).unwrap();
        let w = p.planted_witness.unwrap();
        let bf = block_form_transform(&p.a, &w, true, true, None, &pol()).map_err(|e| format!("seed {seed}: {e}"))?;
        let ur = bf.summary.upper_right_max.unwrap_or(f64::INFINITY);
        ensure!(bf.summary.lower_left_max < 1e-10 && ur < 1e-10, "seed {seed}: {:.3e} / {ur:.3e}", bf.summary.lower_left_max);
        worst = worst.max(bf.summary.lower_left_max).max(ur);
    }
    Ok(format!("20 families, max off-diagonal entry {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("nilpotent pair end to end", nilpotent_pair),
        ("inclusion-chain certificates", chain_certificates),
        ("coupled Schur dichotomy", schur_dichotomy),
        ("scalar case", scalar_case),
        ("algebra span vs exhaustive chain", oracle_agreement),
        ("graph suite", graph_suite),
        ("normality equivalences", normality_suite),
        ("coupled-normal Schur", normal_schur),
        ("kernel, range and eigenspace propagation", propagation),
        ("unitary full block form", normal_block_form),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
