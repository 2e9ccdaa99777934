mod common;

use avtk::linalg::{hnf, int_kernel, snf, span_equal, symplectic_basis, IntMatrix};
use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn unit(m: &IntMatrix) -> bool {
    leibniz_det(m).abs().is_one()
}

fn is_hnf_shaped(h: &IntMatrix) -> bool {
    // pivots strictly move down; entries left of a pivot are reduced
    let mut last: Option<usize> = None;
    for j in 0..h.cols() {
        let col = h.column(j);
        let Some(p) = col.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        if last.is_some_and(|l| p <= l) || !col[p].is_positive() {
            return false;
        }
        for k in 0..j {
            let x = &h[(p, k)];
            if x.is_negative() || x >= &col[p] {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

proptest! {
    #[test]
    fn hnf_reconstructs((r, c) in (1usize..5, 1usize..6), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_int_matrix(&mut rng, r, c, 6);
        let (h, u) = hnf(&m);
        prop_assert_eq!(m.checked_mul(&u)?, h.clone());
        prop_assert!(unit(&u));
        prop_assert!(is_hnf_shaped(&h), "{}", h);
        prop_assert_eq!(hnf(&h).0, h);
    }

    #[test]
    fn snf_reconstructs((r, c) in (1usize..5, 1usize..5), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_int_matrix(&mut rng, r, c, 9);
        let f = snf(&m);
        prop_assert_eq!(f.u.checked_mul(&m)?.checked_mul(&f.v)?, f.s.clone());
        prop_assert!(unit(&f.u) && unit(&f.v));
        for i in 0..r {
            for j in 0..c {
                prop_assert!(i == j || f.s[(i, j)].is_zero());
            }
        }
        let inv = f.invariants();
        prop_assert!(inv.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        prop_assert!(inv.iter().all(Signed::is_positive));
        prop_assert_eq!(inv, elementary_divisors(&m));
    }

    #[test]
    fn kernel_is_saturated_and_complete((r, c) in (1usize..4, 2usize..6), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_int_matrix(&mut rng, r, c, 4);
        let k = int_kernel(&m);
        let rank = elementary_divisors(&m).len();
        prop_assert_eq!(k.cols(), c - rank);
        prop_assert!(m.checked_mul(&k)?.is_zero());
        if k.cols() > 0 {
            prop_assert!(elementary_divisors(&k).iter().all(One::is_one));
        }
    }

    #[test]
    fn span_equal_is_an_equivalence(d in 1i64..5, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let pi = avtk::examples::surface(d)?.periods().clone();
        let x = loop {
            let x = random_int_matrix(&mut rng, 4, 4, 4);
            if !leibniz_det(&x).is_zero() {
                break x;
            }
        };
        let at = |m: &IntMatrix| pi.mul_rational(&m.to_rational());
        let a = x.clone();
        let b = a.checked_mul(&random_unimodular(&mut rng, 4, 6))?;
        let c = b.checked_mul(&random_unimodular(&mut rng, 4, 6))?;
        let (sa, sb, sc) = (at(&a)?, at(&b)?, at(&c)?);
        prop_assert!(span_equal(&sa, &sa)?);
        prop_assert_eq!(span_equal(&sa, &sb)?, span_equal(&sb, &sa)?);
        prop_assert!(span_equal(&sa, &sb)? && span_equal(&sb, &sc)? && span_equal(&sa, &sc)?);
        let mut two = IntMatrix::identity(4);
        two[(0, 0)] = BigInt::from(2);
        let sd = at(&a.checked_mul(&two)?)?;
        prop_assert!(!span_equal(&sa, &sd)?);
        prop_assert_eq!(span_equal(&sd, &sa)?, false);
    }

    #[test]
    fn formal_spans_survive_unimodular_changes(d in 1i64..6, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = avtk::examples::surface(d)?;
        let u = random_unimodular(&mut rng, 4, 8);
        let moved = s.periods().mul_rational(&u.to_rational())?;
        prop_assert!(span_equal(s.periods(), &moved)?);
        let mut half = IntMatrix::identity(4);
        half[(3, 3)] = BigInt::from(3);
        let sub = s.periods().mul_rational(&half.to_rational())?;
        prop_assert!(!span_equal(s.periods(), &sub)?);
    }

    #[test]
    fn symplectic_basis_postcondition(n in 1usize..4, seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let e = random_alternating(&mut rng, n, 4);
        let (u, d) = symplectic_basis(&e)?;
        prop_assert!(unit(&u));
        let mut want = IntMatrix::zeros(2 * n, 2 * n);
        for (i, x) in d.iter().enumerate() {
            want[(i, n + i)] = x.clone();
            want[(n + i, i)] = -x;
        }
        prop_assert_eq!(u.transpose().checked_mul(&e)?.checked_mul(&u)?, want);
        let ed = elementary_divisors(&e);
        let every_other: Vec<BigInt> = ed.iter().step_by(2).cloned().collect();
        prop_assert_eq!(d, every_other);
    }
}
