mod common;

use avtk::examples::{elliptic_product, general_product, surface};
use avtk::homs::{analytic_rep, hom_module, idempotent, isom_search, IsomVerdict};
use avtk::linalg::{IntMatrix, RatMatrix};
use avtk::scalars::GeneratorSet;
use avtk::torus::{isogeny_degree, PolarisedTorus};
use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn nonsingular(rng: &mut StdRng, n: usize) -> IntMatrix {
    loop {
        let m = random_int_matrix(rng, n, n, 5);
        if !leibniz_det(&m).is_zero() {
            return m;
        }
    }
}

proptest! {
    #[test]
    fn degree_is_multiplicative(n in 1usize..5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (a, b) = (nonsingular(&mut rng, n), nonsingular(&mut rng, n));
        let da = isogeny_degree(&a)?;
        prop_assert_eq!(&da, &leibniz_det(&a).abs());
        prop_assert_eq!(isogeny_degree(&a.checked_mul(&b)?)?, da * isogeny_degree(&b)?);
        let k = rng_scalar(seed);
        let mult = IntMatrix::identity(2 * n).scale(&k.into());
        prop_assert_eq!(isogeny_degree(&mult)?, num_bigint::BigInt::from(k).pow(2 * n as u32));
    }

    #[test]
    fn isom_search_finds_an_automorphism(d in 1i64..6) {
        let x = surface(d)?;
        match isom_search(&x, &x, 1, true)? {
            IsomVerdict::Found { witness, .. } => {
                prop_assert!(leibniz_det(&witness).abs() == 1.into());
                prop_assert!(analytic_rep(&x, &x, &witness).is_ok());
                prop_assert_eq!(
                    witness.transpose().checked_mul(x.gram())?.checked_mul(&witness)?,
                    x.gram().clone()
                );
            }
            v => prop_assert!(false, "{}", v.label()),
        }
    }
}

fn rng_scalar(seed: u64) -> i64 {
    (seed % 5) as i64 + 1
}

#[test]
fn idempotent_identities() {
    for ty in [&[1, 2][..], &[1, 3], &[1, 2, 4], &[1, 1, 3]] {
        for ex in [elliptic_product(ty).unwrap(), general_product(ty).unwrap()] {
            let dim = 2 * ex.quotient.torus.dim();
            let ie = idempotent(&ex.e_in_a).unwrap();
            let ib = idempotent(&ex.b_in_a).unwrap();
            for eps in [&ie.epsilon, &ib.epsilon] {
                assert_eq!(&eps.checked_mul(eps).unwrap(), eps, "{ty:?}");
            }
            let sum = ie.epsilon.checked_add(&ib.epsilon).unwrap();
            assert_eq!(sum, RatMatrix::identity(dim), "{ty:?}");
            assert!(ie.epsilon.checked_mul(&ib.epsilon).unwrap().is_zero());
            let lhs = IntMatrix::identity(dim).scale(&(&ie.exponent * &ib.exponent));
            let rhs = ie
                .norm
                .scale(&ib.exponent)
                .checked_add(&ib.norm.scale(&ie.exponent))
                .unwrap();
            assert_eq!(lhs, rhs, "{ty:?}");
            // Nm_E is an endomorphism of A
            assert!(analytic_rep(&ex.quotient.torus, &ex.quotient.torus, &ie.norm).is_ok());
        }
    }
}

#[test]
fn hom_ranks() {
    let gens = GeneratorSet::new(["tau_E", "tau_F"]).unwrap();
    let e = PolarisedTorus::elliptic(&gens, "tau_E", 1).unwrap();
    let e2 = PolarisedTorus::elliptic(&gens, "tau_E", 2).unwrap();
    let f = PolarisedTorus::elliptic(&gens, "tau_F", 3).unwrap();
    let ee = e.product(&e2).unwrap();
    let ef = e.product(&f).unwrap();
    let all = [&e, &e2, &f, &ee, &ef];
    for x in all {
        for y in all {
            let xy = hom_module(x, y).unwrap().len();
            assert_eq!(xy, hom_module(y, x).unwrap().len());
        }
    }
    let rank = |x, y| hom_module(x, y).unwrap().len();
    assert_eq!(rank(&e, &e), 1);
    assert_eq!(rank(&e, &e2), 1);
    assert_eq!(rank(&e, &f), 0);
    assert_eq!(rank(&ee, &ee), 4);
    assert_eq!(rank(&ef, &ef), 2);
    assert_eq!(rank(&e, &ef), 1);
    for g in hom_module(&ef, &ee).unwrap() {
        assert_eq!(
            analytic_rep(&ef, &ee, &g.rational_rep).unwrap(),
            g.analytic_rep
        );
    }
}
