mod common;

use common::*;
use coupled_core::linalg::{containment, hermitian_eigen, inverse, rank, rank_and_kernel, range_basis, TolerancePolicy};
use coupled_core::{CMatrix, Complex64, QMatrix};
use proptest::prelude::*;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn four_gram_ranks_agree(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| low_rank_int(r, c))) {
        let p = pol();
        let r = rank(&m, &p);
        prop_assert_eq!(r, rank(&m.adjoint(), &p));
        prop_assert_eq!(r, rank(&(&m * &m.adjoint()), &p));
        prop_assert_eq!(r, rank(&(&m.adjoint() * &m), &p));
        let q = m.to_exact();
        let rq = rank(&q, &p);
        prop_assert_eq!(rq, rank(&(&q * &q.adjoint()), &p));
        prop_assert_eq!(rq, rank(&(&q.adjoint() * &q), &p));
    }

    #[test]
    fn exact_and_floating_rank_agree_with_oracle(
        m in (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            prop_oneof![
                cmatrix(r, c, (-1000i32..=1000).prop_map(|a| Complex64::new(a as f64, 0.0))),
                low_rank_int(r, c),
            ]
        })
    ) {
        let q = m.to_exact();
        let oracle = oracle_rank(&q);
        prop_assert_eq!(rank(&q, &pol()), oracle);
        prop_assert_eq!(rank(&m, &pol()), oracle);
    }

    #[test]
    fn kernel_is_annihilated_and_complements_rank(m in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| low_rank_int(r, c))) {
        let rk = rank_and_kernel(&m, &pol());
        prop_assert_eq!(rk.rank + rk.kernel.cols(), m.cols());
        prop_assert!((&m * &rk.kernel).max_abs() <= 1e-9 * m.max_abs().max(1.0));
        let q = m.to_exact();
        let ek = rank_and_kernel(&q, &pol());
        prop_assert!((&q * &ek.kernel).is_zero_within(0.0));
        prop_assert_eq!(ek.rank, rk.rank);
    }

    #[test]
    fn gram_pair_spectra_match(s in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| cmatrix(r, c, gaussian_complex()))) {
        let a = hermitian_eigen(&(&s.adjoint() * &s), &pol()).unwrap().eigenvalues;
        let b = hermitian_eigen(&(&s * &s.adjoint()), &pol()).unwrap().eigenvalues;
        let nz = |v: &[f64]| v.iter().copied().filter(|x| x.abs() > 1e-9).collect::<Vec<_>>();
        let (a, b) = (nz(&a), nz(&b));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9, "{} vs {}", x, y);
        }
    }

    #[test]
    fn products_lie_in_the_range(m in (1usize..6, 1usize..5).prop_flat_map(|(r, c)| low_rank_int(r, c)),
                                 v in cmatrix(5, 2, small_complex())) {
        let v = v.block(0, 0, m.cols(), 2);
        let image = &m * &v;
        prop_assert!(containment(&range_basis(&m, &pol()), &image, &pol()).unwrap().contained);
        prop_assert!(containment(&m, &image, &pol()).unwrap().contained);
        let q = m.to_exact();
        prop_assert!(containment(&q, &(&q * &v.to_exact()), &pol()).unwrap().contained);
    }
}

#[test]
fn rank_zero_and_full() {
    assert_eq!(rank(&CMatrix::zeros(3, 2), &pol()), 0);
    assert_eq!(rank(&QMatrix::identity(4), &pol()), 4);
    assert_eq!(oracle_rank(&QMatrix::identity(4)), 4);
}

#[test]
fn complex_rank_is_not_real_rank() {
    // [[1, i], [i, -1]] has complex rank 1 while its real and imaginary parts are each rank 2 or less.
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let m = CMatrix::from_rows(vec![vec![one, i], vec![i, -one]]).unwrap();
    assert_eq!(rank(&m, &pol()), 1);
    assert_eq!(rank(&m.to_exact(), &pol()), 1);
    assert_eq!(oracle_rank(&m.to_exact()), 1);
}

#[test]
fn exact_inverse_round_trips() {
    let m = QMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
    let inv = inverse(&m, &pol()).unwrap();
    assert_eq!(&m * &inv, QMatrix::identity(3));
}
