mod common;

use avtk::examples::self_dual;
use avtk::homs::combine;
use avtk::ppsearch::{
    admissible_family, family_member, family_shape, obstruction_certificate, obstruction_check,
    pp_search_family, satisfies_relation, PpVerdict,
};
use common::leibniz_det;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn leading_minors_positive(h: &avtk::linalg::IntMatrix) -> bool {
    (1..=h.rows()).all(|k| leibniz_det(&h.submatrix(0..k, 0..k)).is_positive())
}

#[test]
fn families_have_the_expected_shape() {
    for d in 2..=5 {
        let ex = self_dual(d).unwrap();
        let fam = admissible_family(&ex.a, &ex.a_hat).unwrap();
        assert_eq!(fam.rank(), 3, "d = {d}");
        for (h, m) in fam.basis.iter().zip(&fam.maps) {
            assert!(h.is_symmetric());
            assert!(family_shape(h, d).is_some(), "d = {d}: {h}");
            assert!(satisfies_relation(h, m, &ex.a, &ex.a_hat).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn members_satisfy_the_relation(d in 2i64..5, c in prop::collection::vec(-4i64..=4, 3)) {
        let ex = self_dual(d)?;
        let fam = admissible_family(&ex.a, &ex.a_hat)?;
        let h = family_member(&fam, &c);
        let m = combine(&fam.maps, &c);
        prop_assert!(satisfies_relation(&h, &m, &ex.a, &ex.a_hat)?);
        prop_assert!(family_shape(&h, d).is_some());
    }

    #[test]
    fn obstruction_matches_brute_force(d in 2u64..400) {
        let square_root_of_minus_one = (0..d).any(|h| (h * h + 1) % d == 0);
        prop_assert_eq!(obstruction_check(d)?, !square_root_of_minus_one);
        let cert = obstruction_certificate(d)?;
        let mut squares: Vec<u64> = (0..d).map(|h| h * h % d).collect();
        squares.sort();
        squares.dedup();
        prop_assert_eq!(cert.squares, squares);
    }
}

#[test]
fn found_witnesses_are_principal() {
    for d in [2, 5, 10, 13] {
        let ex = self_dual(d).unwrap();
        let fam = admissible_family(&ex.a, &ex.a_hat).unwrap();
        match pp_search_family(&fam, &ex.a, &ex.a_hat, 6).unwrap() {
            PpVerdict::Found {
                h, coefficients, ..
            } => {
                let m = combine(&fam.maps, &coefficients);
                assert!(leading_minors_positive(&h), "d = {d}: {h}");
                assert!(leibniz_det(&m).abs().is_one(), "d = {d}");
                assert!(satisfies_relation(&h, &m, &ex.a, &ex.a_hat).unwrap());
                assert!(!obstruction_check(d as u64).unwrap());
            }
            v => panic!("d = {d}: {}", v.label()),
        }
    }
    for d in [3, 7] {
        let ex = self_dual(d).unwrap();
        let fam = admissible_family(&ex.a, &ex.a_hat).unwrap();
        let v = pp_search_family(&fam, &ex.a, &ex.a_hat, 6).unwrap();
        assert!(matches!(v, PpVerdict::NotFoundUpToBound { .. }), "d = {d}");
        assert!(obstruction_check(d as u64).unwrap());
    }
}
