use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::examples::{elliptic_product, self_dual, surface};
use crate::scalars::GeneratorSet;
use crate::torus::isogeny_degree;

fn curves() -> (PolarisedTorus, PolarisedTorus) {
    let g = GeneratorSet::new(["tau_E", "tau_F"]).unwrap();
    (
        PolarisedTorus::elliptic(&g, "tau_E", 1).unwrap(),
        PolarisedTorus::elliptic(&g, "tau_F", 1).unwrap(),
    )
}

fn check_identity(x: &PolarisedTorus, y: &PolarisedTorus, homs: &[HomGenerator]) {
    for h in homs {
        let lhs = h.analytic_rep.checked_mul(x.periods()).unwrap();
        let rhs = y
            .periods()
            .mul_rational(&h.rational_rep.to_rational())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn elliptic_curve_homs() {
    let (e, f) = curves();
    let end = hom_module(&e, &e).unwrap();
    assert_eq!(end.len(), 1);
    assert!(end[0].rational_rep.is_identity());
    assert!(hom_module(&e, &f).unwrap().is_empty());
    assert!(hom_module(&f, &e).unwrap().is_empty());
}

#[test]
fn product_of_independent_curves() {
    let (e, f) = curves();
    let x = e.product(&f).unwrap();
    let end = hom_module(&x, &x).unwrap();
    assert_eq!(end.len(), 2);
    check_identity(&x, &x, &end);
    // the two projections, up to the basis of the saturated kernel
    let p1 = IntMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 0]]);
    let basis: Vec<IntMatrix> = end.iter().map(|h| h.rational_rep.clone()).collect();
    let found = crate::homs::coefficient_vectors(2, 2).any(|c| combine(&basis, &c) == p1);
    assert!(found);
}

#[test]
fn analytic_rep_rejects_non_homs() {
    let (e, _) = curves();
    let swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
    assert!(analytic_rep(&e, &e, &swap).is_err());
}

#[test]
fn dual_of_identity_and_multiplication() {
    let s = surface(3).unwrap();
    let id = HomGenerator::identity(&s);
    let d = dual_hom(&id, &s, &s).unwrap();
    assert!(d.rational_rep.is_identity());
    let k = BigInt::from(5);
    let mk = HomGenerator {
        rational_rep: IntMatrix::identity(4).scale(&k),
        analytic_rep: id
            .analytic_rep
            .mul_rational(&RatMatrix::identity(2).scale(&BigRational::from_integer(k.clone())))
            .unwrap(),
    };
    let dk = dual_hom(&mk, &s, &s).unwrap();
    assert_eq!(dk.rational_rep, IntMatrix::identity(4).scale(&k));
}

#[test]
fn polarising_isogeny_degree() {
    let s = surface(3).unwrap();
    let phi = polarisation_hom(&s).unwrap();
    assert_eq!(isogeny_degree(&phi.rational_rep).unwrap(), BigInt::from(9));
}

#[test]
fn dual_of_quotient_composes_to_the_product_polarisation() {
    let ex = elliptic_product(&[1, 3]).unwrap();
    let fr = ex.quotient.torus.to_standard_frame().unwrap();
    let a = &fr.torus;
    // π on the standard frame of A
    let uinv = fr
        .lattice_change
        .to_rational()
        .inverse()
        .unwrap()
        .to_integer()
        .unwrap();
    let pi_m = uinv.checked_mul(&ex.quotient.rational_rep).unwrap();
    let pi = HomGenerator {
        analytic_rep: analytic_rep(&ex.product, a, &pi_m).unwrap(),
        rational_rep: pi_m,
    };
    let pi_hat = dual_hom(&pi, &ex.product, a).unwrap();
    let phi_a = polarisation_hom(a).unwrap();
    let phi_x = polarisation_hom(&ex.product).unwrap();
    let composite = pi_hat
        .rational_rep
        .checked_mul(&phi_a.rational_rep)
        .unwrap()
        .checked_mul(&pi.rational_rep)
        .unwrap();
    assert_eq!(composite, phi_x.rational_rep);
    let degrees: Vec<BigInt> = [&pi_hat.rational_rep, &phi_a.rational_rep, &pi.rational_rep]
        .iter()
        .map(|m| isogeny_degree(m).unwrap())
        .collect();
    assert_eq!(
        degrees,
        vec![BigInt::from(3), BigInt::from(9), BigInt::from(3)]
    );
    assert_eq!(isogeny_degree(&composite).unwrap(), BigInt::from(81));
}

#[test]
fn hom_rank_is_symmetric_under_duals() {
    let ex = self_dual(3).unwrap();
    let (s, sh) = (&ex.s, &ex.s_hat);
    let fwd = hom_module(s, sh).unwrap();
    let back = hom_module(&sh.dual().unwrap().torus, &s.dual().unwrap().torus).unwrap();
    assert_eq!(fwd.len(), back.len());
    assert_eq!(fwd.len(), 1);
    for h in &fwd {
        let d = dual_hom(h, s, sh).unwrap();
        check_identity(&sh.dual().unwrap().torus, &s.dual().unwrap().torus, &[d]);
    }
}

#[test]
fn idempotents_of_the_quotient() {
    let ex = elliptic_product(&[1, 3]).unwrap();
    let e = &ex.e_in_a;
    let r = e.restricted_polarisation().unwrap();
    assert_eq!(r.exponent, BigInt::from(3));
    let ie = idempotent(e).unwrap();
    assert_eq!(ie.epsilon.checked_mul(&ie.epsilon).unwrap(), ie.epsilon);
    let c = complementary_subvariety(e).unwrap();
    assert_eq!(c.dim(), 1);
    let ic = idempotent(&c).unwrap();
    let sum = ie.epsilon.checked_add(&ic.epsilon).unwrap();
    assert!(sum.is_identity());
    let (ee, eb) = (&ie.exponent, &ic.exponent);
    let lhs = IntMatrix::identity(4).scale(&(ee * eb));
    let rhs = ie.norm.scale(eb).checked_add(&ic.norm.scale(ee)).unwrap();
    assert_eq!(lhs, rhs);
    // the complement is the image of the second factor
    assert_eq!(c.sublattice(), ex.b_in_a.sublattice());
    let (ct, _) = c.subtorus().unwrap();
    let (et, _) = e.subtorus().unwrap();
    assert!(hom_module(&ct, &et).unwrap().is_empty());
}

#[test]
fn whole_and_zero_complements() {
    let s = surface(3).unwrap();
    let whole = crate::torus::SubvarietyEmbedding::whole(s);
    assert!(idempotent(&whole).unwrap().epsilon.is_identity());
    let c = complementary_subvariety(&whole).unwrap();
    assert_eq!(c.dim(), 0);
}

#[test]
fn search_finds_the_identity() {
    let s = surface(3).unwrap();
    match isom_search(&s, &s, 1, true).unwrap() {
        IsomVerdict::Found {
            witness,
            coefficients,
            ..
        } => {
            assert!(witness.is_identity());
            assert_eq!(coefficients, vec![1]);
        }
        other => panic!("{other:?}"),
    }
    let (e, f) = curves();
    assert_eq!(isom_search(&e, &f, 3, false).unwrap(), IsomVerdict::NoHoms);
}

#[test]
fn swap_is_found_for_the_self_dual_product() {
    let ex = self_dual(3).unwrap();
    let v = isom_search(&ex.a, &ex.a_hat, 3, false).unwrap();
    let IsomVerdict::Found {
        witness,
        coefficients,
        ..
    } = v
    else {
        panic!("{v:?}");
    };
    assert!(coefficients.iter().all(|c| c.abs() <= 3));
    let mut swap = IntMatrix::zeros(8, 8);
    for (i, j) in [
        (0, 2),
        (1, 3),
        (2, 0),
        (3, 1),
        (4, 6),
        (5, 7),
        (6, 4),
        (7, 5),
    ] {
        swap[(i, j)] = 1.into();
    }
    assert_eq!(witness, swap);
}

#[test]
fn quotient_is_not_isomorphic_to_its_dual_up_to_bound() {
    let ex = elliptic_product(&[1, 3]).unwrap();
    let a = ex.quotient.torus.to_standard_frame().unwrap().torus;
    let a_hat = a.dual().unwrap().torus;
    let v = isom_search(&a, &a_hat, 10, false).unwrap();
    assert!(matches!(
        v,
        IsomVerdict::NotFoundUpToBound { bound: 10, .. }
    ));
}
