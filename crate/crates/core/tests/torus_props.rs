mod common;

use avtk::examples::{symmetric_generators, symmetric_names};
use avtk::linalg::{IntMatrix, RatMatrix};
use avtk::scalars::GeneratorSet;
use avtk::torus::{FiniteSubgroup, PolarisationType, PolarisedTorus};
use common::elementary_divisors;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn general(ty: &[i64]) -> PolarisedTorus {
    let n = ty.len();
    let gens = GeneratorSet::new(symmetric_names("z", n)).unwrap();
    let z = symmetric_generators(&gens, "z", n).unwrap();
    let d: Vec<BigInt> = ty.iter().map(|&x| x.into()).collect();
    PolarisedTorus::from_frame(&z, &d, "generic").unwrap()
}

/// Divisibility chains of length 1..=3 with small entries.
fn chain() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=3, 1i64..=3, prop::collection::vec(1i64..=3, 2)).prop_map(|(n, d1, m)| {
        let mut out = vec![d1];
        for k in 1..n {
            out.push(out[k - 1] * m[k - 1]);
        }
        out
    })
}

/// Type of the form on `Z^2n + Z x`, from a Gram matrix of the generating
/// set `[I | x]`.
fn over_lattice_type(gram: &IntMatrix, x: &[BigRational]) -> Vec<BigInt> {
    let m = gram.rows();
    let mut g = RatMatrix::zeros(m, m + 1);
    for i in 0..m {
        g[(i, i)] = BigRational::one();
        g[(i, m)] = x[i].clone();
    }
    let form = g
        .transpose()
        .checked_mul(&gram.to_rational())
        .unwrap()
        .checked_mul(&g)
        .unwrap()
        .to_integer()
        .expect("x lies in the polarising kernel");
    elementary_divisors(&form).into_iter().step_by(2).collect()
}

proptest! {
    #[test]
    fn kernel_order_and_invariants(ty in chain()) {
        let t = general(&ty);
        let k = t.polarising_kernel();
        let prod: i64 = ty.iter().product();
        prop_assert_eq!(k.order(), BigInt::from(prod * prod));
        let mut want: Vec<BigInt> = ty
            .iter()
            .filter(|&&d| d > 1)
            .flat_map(|&d| [BigInt::from(d), BigInt::from(d)])
            .collect();
        want.sort();
        prop_assert_eq!(k.invariants(), want);
        prop_assert_eq!(t.polarisation_type()?, PolarisationType::from_i64(&ty));
    }

    #[test]
    fn dual_of_dual(ty in chain()) {
        let t = general(&ty);
        let d = t.dual()?;
        prop_assert_eq!(&d.raw.dual()?.raw, &t);
        let want = PolarisationType::from_i64(&ty).dual();
        prop_assert_eq!(d.torus.polarisation_type()?, want);
        prop_assert!(d.torus.standard_frame_divisors().is_some());
    }
}

#[test]
fn cyclic_quotients_match_the_over_lattice_oracle() {
    for ty in [&[1, 2][..], &[1, 3], &[2, 2], &[1, 4]] {
        let t = general(ty);
        let kernel = t.polarising_kernel();
        for x in kernel.elements() {
            let g = FiniteSubgroup::from_points(t.gram().rows(), std::slice::from_ref(&x));
            let perp = t.symplectic_complement(std::slice::from_ref(&x)).unwrap();
            assert!(g.is_subgroup_of(&perp), "cyclic subgroups are isotropic");
            assert_eq!(perp.order() * g.order(), kernel.order());

            let q = t.quotient_map(&x).unwrap();
            let want = over_lattice_type(t.gram(), x.coords());
            assert_eq!(
                q.torus.polarisation_type().unwrap().values(),
                &want[..],
                "{ty:?} {x}"
            );
            let image = perp.map(&q.rational_rep.to_rational()).unwrap();
            assert_eq!(image, q.torus.polarising_kernel(), "{ty:?} {x}");
        }
    }
}
