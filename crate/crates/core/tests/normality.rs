mod common;

use common::*;
use coupled_core::fixtures::{random_pair, RandomKind};
use coupled_core::linalg::TolerancePolicy;
use coupled_core::normality::{
    coupled_commute_checks, embed_pair, normal_equivalence_suite, perp_invariance_check, unitary_schur_classify,
};
use coupled_core::reducibility::{coupled_irreducible_burnside, Strength};
use coupled_core::sylvester::{build_system, solve};
use coupled_core::{CMatrix, Complex64, QFamily, QMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Normal `A = Q D Q*` with distinct eigenvalues, and `S` built four ways:
/// unitary, a positive function of `A`, that times a unitary, or generic.
fn normal_case(seed: u64, n: usize, construction: usize) -> (CMatrix, CMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = seeded_unitary(&mut rng, n);
    let d: Vec<Complex64> = (0..n).map(|k| c(k as f64 + 1.0, 0.5 * k as f64 - 0.3)).collect();
    let a = &(&q * &diag(&d)) * &q.adjoint();
    let positive = |rng: &mut ChaCha8Rng| {
        let mut e = seeded_matrix(rng, n, 1).column(0);
        for z in &mut e {
            *z = c(1.0 + z.norm(), 0.0);
        }
        &(&q * &diag(&e)) * &q.adjoint()
    };
    let s = match construction {
        0 => seeded_unitary(&mut rng, n),
        1 => positive(&mut rng),
        2 => {
            let p = positive(&mut rng);
            &p * &seeded_unitary(&mut rng, n)
        }
        _ => &seeded_matrix(&mut rng, n, n) + &CMatrix::identity(n).scale(&c(2.0, 0.0)),
    };
    (a, s)
}

fn integer_family() -> impl Strategy<Value = QFamily> {
    dims_strategy(3, 2).prop_flat_map(|dims| {
        let total: usize = dims.iter().sum();
        (Just(dims), low_rank_int(total, total), any::<bool>()).prop_map(|(dims, m, herm)| {
            let m = if herm { &m + &m.adjoint() } else { m };
            QFamily::from_assembled(&m.to_exact(), dims).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn six_normality_conditions_agree(seed in 0u64..10_000, n in 1usize..=4, construction in 0usize..4) {
        let (a, s) = normal_case(seed, n, construction);
        let rep = normal_equivalence_suite(&a, &s, &pol()).unwrap();
        prop_assert_eq!(rep.conditions.len(), 6);
        prop_assert!(rep.all_equal, "{:?}", rep);
        let expect = construction < 3 || n == 1;
        prop_assert_eq!(rep.conditions[0].holds, expect, "{:?}", rep);
        if expect {
            prop_assert!(rep.conditions.iter().all(|c| c.residual < 1e-9));
        }
    }

    #[test]
    fn embedded_pairs_decide_coupled_normality(f in integer_family()) {
        let mut all = true;
        for i in 0..f.k() {
            for j in 0..f.k() {
                let e = embed_pair(&f, i, j, &pol()).unwrap();
                // oracle: commutator of the exact 2x2 embedding
                let (ni, nj) = (f.dims()[i], f.dims()[j]);
                let z = |r, c| QMatrix::zeros(r, c);
                let top = z(ni, ni).hstack(f.block(i, j));
                let bottom = f.block(j, i).hstack(&z(nj, nj));
                let m = top.vstack(&bottom);
                let comm = &(&m * &m.adjoint()) - &(&m.adjoint() * &m);
                prop_assert_eq!(e.normal, comm.is_zero_within(0.0));
                all &= e.normal;
            }
        }
        prop_assert_eq!(all, f.is_coupled_normal(&pol()).normal);
        prop_assert_eq!(all, f.to_c64().is_coupled_normal(&pol()).normal);
    }

    #[test]
    fn perp_of_an_invariant_pair_is_invariant(seed in 0u64..500) {
        let p = random_pair(RandomKind::PlantedNormalReducible(Strength::StronglyReducible), &[3, 2], seed).unwrap();
        let w = p.planted_witness.unwrap();
        // C = A_21 : C^3 -> C^2, D = A_12 = C*
        let (cm, dm) = (p.a.block(1, 0), p.a.block(0, 1));
        let r = perp_invariance_check(cm, dm, w.basis(0), w.basis(1), &pol()).unwrap();
        prop_assert!(r.holds, "{:?}", r);
        prop_assert!(r.c_residual < 1e-9 && r.d_residual < 1e-9);
    }

    #[test]
    fn commute_identities_on_solver_output(seed in 0u64..200, same in any::<bool>()) {
        let (a, b) = if same {
            let p = random_pair(RandomKind::PlantedNormalReducible(Strength::ProperlyReducible), &[2, 2, 1], seed).unwrap();
            (p.a.clone(), p.a)
        } else {
            let p = random_pair(RandomKind::CoupledNormalSimilar, &[2, 2, 1], seed).unwrap();
            (p.a, p.b)
        };
        let sol = solve(&build_system(&a, &b).unwrap(), &pol());
        prop_assert!(sol.dimension >= 1);
        // a generic element of the solution space
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = seeded_matrix(&mut rng, sol.dimension, 1).column(0);
        let s: Vec<CMatrix> = (0..a.k())
            .map(|i| sol.basis.iter().zip(&coeffs).fold(CMatrix::zeros(a.dims()[i], b.dims()[i]), |acc, (x, t)| &acc + &x[i].scale(t)))
            .collect();
        let rep = coupled_commute_checks(&a, &b, &s, &pol()).unwrap();
        prop_assert!(rep.holds, "{:?}", rep);
    }
}

#[test]
fn perp_check_needs_an_invariant_pair() {
    let cm = CMatrix::identity(2);
    let u = CMatrix::from_fn(2, 1, |r, _| c(if r == 0 { 1.0 } else { 0.0 }, 0.0));
    let w = CMatrix::from_fn(2, 1, |r, _| c(if r == 1 { 1.0 } else { 0.0 }, 0.0));
    assert!(perp_invariance_check(&cm, &cm, &u, &w, &pol()).is_err());
}

#[test]
fn generic_matrix_is_not_normal_input() {
    let a = CMatrix::from_fn(2, 2, |r, col| c(if r <= col { 1.0 } else { 0.0 }, 0.0));
    assert!(normal_equivalence_suite(&a, &CMatrix::identity(2), &pol()).is_err());
}

#[test]
fn irreducible_normal_pairs_give_scalar_unitaries() {
    let mut checked = 0;
    for seed in 0..10 {
        let p = random_pair(RandomKind::CoupledNormalSimilar, &[2, 2, 2], seed).unwrap();
        if !coupled_irreducible_burnside(&p.a, &pol(), None).unwrap().irreducible {
            continue;
        }
        let sol = solve(&build_system(&p.a, &p.b).unwrap(), &pol());
        assert_eq!(sol.dimension, 1);
        let cls = unitary_schur_classify(&p.a, &p.b, &sol.basis[0], &pol()).unwrap();
        assert_eq!(cls.violations(), 0, "{cls:?}");
        let alpha = cls.unitary_alpha.expect("common alpha");
        assert!(alpha > 0.0);
        assert!(cls.unitary_alphas.iter().all(|x| x.is_some()));
        checked += 1;
    }
    assert!(checked >= 5);
}

#[test]
fn non_normal_pair_is_rejected_by_the_commute_checks() {
    let p = random_pair(RandomKind::CoupledSimilar, &[2, 2], 3).unwrap();
    let sol = solve(&build_system(&p.a, &p.b).unwrap(), &pol());
    assert!(coupled_commute_checks(&p.a, &p.b, &sol.basis[0], &pol()).is_err());
}
