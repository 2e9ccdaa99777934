//! Constructors for the worked examples: `E × F^(n-1)` and its quotient,
//! the variant with a general factor, and `S × Ŝ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::scalars::{FormalScalar, GeneratorSet, ScalarMatrix};
use crate::torus::{
    PolarisedTorus, QuotientMap, SubvarietyEmbedding, TorsionPoint, DEFAULT_ASSUMPTIONS,
};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Check `(1, d_2, .., d_n)`: divisibility chain with `d_n > 1`.
pub fn check_type(ty: &[i64]) -> Result<()> {
    if ty.len() < 2 || ty[0] != 1 {
        return Err(Error::Precondition(format!(
            "type must be (1, d_2, .., d_n) with n >= 2, got {ty:?}"
        )));
    }
    if ty.iter().any(|&d| d < 1) || ty.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(Error::Precondition(format!(
            "{ty:?} is not a divisibility chain"
        )));
    }
    if *ty.last().unwrap() < 2 {
        return Err(Error::Precondition("d_n must exceed 1".into()));
    }
    Ok(())
}

/// Data of the quotient construction `A = (E × B) / <(P, Q)>`.
#[derive(Clone, Debug)]
pub struct QuotientExample {
    /// `(1, d_2, .., d_n)`.
    pub ty: Vec<i64>,
    pub e: PolarisedTorus,
    pub b: PolarisedTorus,
    pub product: PolarisedTorus,
    /// Image of the ambient vector `(1, 0, .., 0, -1)`.
    pub point: TorsionPoint,
    pub quotient: QuotientMap,
    /// Hand-chosen lattice basis of `A` in product coordinates:
    /// `f_1, .., f_(n-1), f_n + f_1, e_1 - e_n, d_2 e_2, .., d_n e_n`.
    pub hand_basis: RatMatrix,
    /// Complex coordinates `z'_n = z_n + z_1`.
    pub hand_complex: RatMatrix,
    /// `A` on the hand-chosen basis.
    pub hand_torus: PolarisedTorus,
    /// `E = π(E × 0)` inside the quotient (canonical basis).
    pub e_in_a: SubvarietyEmbedding,
    /// `π(0 × B)` inside the quotient (canonical basis).
    pub b_in_a: SubvarietyEmbedding,
}

fn quotient_example(ty: &[i64], gens: GeneratorSet, b: PolarisedTorus) -> Result<QuotientExample> {
    let n = ty.len();
    let dn = ty[n - 1];
    let tau = FormalScalar::generator(&gens, "tau_E")?.scale(&q(dn));
    let z = ScalarMatrix::from_rows(&gens, vec![vec![tau]])?;
    let e = PolarisedTorus::from_frame(&z, &[BigInt::from(dn)], DEFAULT_ASSUMPTIONS)?;
    let product = e.product(&b)?;
    let mut amb = vec![BigRational::from_integer(0.into()); n];
    amb[0] = q(1);
    amb[n - 1] = q(-1);
    let point = product.point_from_ambient(&amb)?;
    let quotient = product.quotient_map(&point)?;

    let dim = 2 * n;
    let mut basis = RatMatrix::zeros(dim, dim);
    for k in 0..n - 1 {
        basis[(k, k)] = q(1);
    }
    basis[(n - 1, n - 1)] = q(1);
    basis[(0, n - 1)] = q(1);
    basis[(n, n)] = BigRational::new(1.into(), dn.into());
    basis[(2 * n - 1, n)] = BigRational::new((-1).into(), dn.into());
    for k in 1..n {
        basis[(n + k, n + k)] = q(1);
    }
    let mut complex = RatMatrix::identity(n);
    complex[(n - 1, 0)] = q(1);
    // the hand-chosen basis in the canonical basis of the quotient lattice
    let u = quotient
        .rational_rep
        .to_rational()
        .checked_mul(&basis)?
        .to_integer()
        .ok_or_else(|| Error::Precondition("basis is not in the quotient lattice".into()))?;
    let hand_torus = quotient.torus.change_frame(&u, &complex)?;

    let to_a = |cols: &[usize]| -> Result<SubvarietyEmbedding> {
        let sel = IntMatrix::identity(dim).select_columns(cols);
        let img = quotient.rational_rep.checked_mul(&sel)?;
        SubvarietyEmbedding::from_generators(quotient.torus.clone(), &img)
    };
    let e_in_a = to_a(&[0, n])?;
    let b_cols: Vec<usize> = (1..n).chain(n + 1..dim).collect();
    let b_in_a = to_a(&b_cols)?;
    Ok(QuotientExample {
        ty: ty.to_vec(),
        e,
        b,
        product,
        point,
        quotient,
        hand_basis: basis,
        hand_complex: complex,
        hand_torus,
        e_in_a,
        b_in_a,
    })
}

/// `E × F^(n-1)` with `E = [d_n τ_E | d_n]`, the `k`-th copy of `F` equal
/// to `[τ_F | d_k]`, divided by the image of `(1, 0, .., 0, -1)`.
pub fn elliptic_product(ty: &[i64]) -> Result<QuotientExample> {
    check_type(ty)?;
    let gens = GeneratorSet::new(["tau_E", "tau_F"])?;
    let mut b: Option<PolarisedTorus> = None;
    for &d in &ty[1..] {
        let f = PolarisedTorus::elliptic(&gens, "tau_F", d)?;
        b = Some(match b {
            None => f,
            Some(acc) => acc.product(&f)?,
        });
    }
    quotient_example(ty, gens, b.expect("n >= 2"))
}

impl QuotientExample {
    /// Closed form of the period matrix of `A` on the hand-chosen basis:
    /// `Z = d_n τ_E (e_1 + e_n)(e_1 + e_n)ᵀ + (0 ⊕ Z_B)` next to
    /// `diag(1, d_2, .., d_n)`.
    pub fn closed_form_lattice(&self) -> Result<ScalarMatrix> {
        let n = self.ty.len();
        let gens = self.product.generators();
        let dn = q(self.ty[n - 1]);
        let tau = FormalScalar::generator(gens, "tau_E")?.scale(&dn);
        let zb = self.b.periods();
        let mut m = ScalarMatrix::zeros(gens, n, 2 * n);
        for i in 1..n {
            for j in 1..n {
                m.set(i, j, zb.get(i - 1, j - 1).clone());
            }
        }
        for (i, j) in [(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)] {
            let v = m.get(i, j).checked_add(&tau)?;
            m.set(i, j, v);
        }
        for (k, &d) in self.ty.iter().enumerate() {
            m.set(k, n + k, FormalScalar::integer(gens, d));
        }
        Ok(m)
    }
}

/// Names `b_i_j` (`i <= j`) of a symmetric small period matrix.
pub fn symmetric_names(prefix: &str, m: usize) -> Vec<String> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i..=m {
            out.push(format!("{prefix}_{i}_{j}"));
        }
    }
    out
}

/// Symmetric matrix of generators `prefix_i_j`.
pub fn symmetric_generators(gens: &GeneratorSet, prefix: &str, m: usize) -> Result<ScalarMatrix> {
    let mut z = ScalarMatrix::zeros(gens, m, m);
    for i in 0..m {
        for j in i..m {
            let g = FormalScalar::generator(gens, &format!("{prefix}_{}_{}", i + 1, j + 1))?;
            z.set(i, j, g.clone());
            z.set(j, i, g);
        }
    }
    Ok(z)
}

/// `E × B` with `B` a general torus of type `(d_2, .., d_n)`, divided by
/// the image of `(1, 0, .., 0, -1)`.
pub fn general_product(ty: &[i64]) -> Result<QuotientExample> {
    check_type(ty)?;
    let m = ty.len() - 1;
    let mut names = vec!["tau_E".to_string()];
    names.extend(symmetric_names("b", m));
    let gens = GeneratorSet::new(names)?;
    let z = symmetric_generators(&gens, "b", m)?;
    let d: Vec<BigInt> = ty[1..].iter().map(|&x| x.into()).collect();
    let b = PolarisedTorus::from_frame(&z, &d, DEFAULT_ASSUMPTIONS)?;
    quotient_example(ty, gens, b)
}

/// `S`, `Ŝ`, `A = S × Ŝ` and `Â` for a surface of type `(1, d)`.
#[derive(Clone, Debug)]
pub struct SelfDualExample {
    pub d: i64,
    pub s: PolarisedTorus,
    pub s_hat: PolarisedTorus,
    pub a: PolarisedTorus,
    pub a_hat: PolarisedTorus,
}

/// Surface `[[a, b, 1, 0], [b, c, 0, d]]` of type `(1, d)`.
pub fn surface(d: i64) -> Result<PolarisedTorus> {
    if d < 1 {
        return Err(Error::Precondition("d must be positive".into()));
    }
    let gens = GeneratorSet::new(["a", "b", "c"])?;
    let z = symmetric_surface_z(&gens)?;
    PolarisedTorus::from_frame(&z, &[BigInt::one(), BigInt::from(d)], DEFAULT_ASSUMPTIONS)
}

fn symmetric_surface_z(gens: &GeneratorSet) -> Result<ScalarMatrix> {
    let a = FormalScalar::generator(gens, "a")?;
    let b = FormalScalar::generator(gens, "b")?;
    let c = FormalScalar::generator(gens, "c")?;
    ScalarMatrix::from_rows(gens, vec![vec![a, b.clone()], vec![b, c]])
}

/// `A = S × Ŝ` with the dual left in its unsorted coordinates, and `Â`.
pub fn self_dual(d: i64) -> Result<SelfDualExample> {
    if d < 2 {
        return Err(Error::Precondition("d must be at least 2".into()));
    }
    let s = surface(d)?;
    let s_hat = s.dual()?.raw;
    let a = s.product(&s_hat)?;
    let a_hat = a.dual()?.raw;
    Ok(SelfDualExample {
        d,
        s,
        s_hat,
        a,
        a_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_scalar;
    use crate::torus::PolarisationType;

    fn smat(g: &GeneratorSet, rows: &[&[&str]]) -> ScalarMatrix {
        ScalarMatrix::from_rows(
            g,
            rows.iter()
                .map(|r| r.iter().map(|e| parse_scalar(e, g).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn elliptic_product_reproduces_the_closed_form_lattice() {
        let ex = elliptic_product(&[1, 3]).unwrap();
        let g = ex.product.generators().clone();
        assert_eq!(
            ex.product.periods(),
            &smat(
                &g,
                &[&["3*tau_E", "0", "3", "0"], &["0", "tau_F", "0", "3"]]
            )
        );
        assert_eq!(
            ex.point,
            TorsionPoint::from_ratios(&[(0, 1), (0, 1), (1, 3), (2, 3)])
        );
        assert_eq!(
            ex.hand_torus.periods(),
            &smat(
                &g,
                &[
                    &["3*tau_E", "3*tau_E", "1", "0"],
                    &["3*tau_E", "3*tau_E + tau_F", "0", "3"]
                ]
            )
        );
        assert_eq!(
            ex.hand_torus.standard_frame_divisors(),
            Some(vec![1.into(), 3.into()])
        );
        assert_eq!(
            ex.quotient.torus.polarisation_type().unwrap(),
            PolarisationType::from_i64(&[1, 3])
        );
    }

    #[test]
    fn general_product_shape() {
        let ex = general_product(&[1, 2, 4]).unwrap();
        assert_eq!(
            ex.product.polarisation_type().unwrap(),
            PolarisationType::from_i64(&[2, 4, 4])
        );
        assert_eq!(
            ex.quotient.torus.polarisation_type().unwrap(),
            PolarisationType::from_i64(&[1, 2, 4])
        );
        assert!(ex.hand_torus.standard_frame_divisors().is_some());
    }

    #[test]
    fn self_dual_lattices() {
        let ex = self_dual(3).unwrap();
        let g = ex.a.generators().clone();
        let la = smat(
            &g,
            &[
                &["a", "b", "0", "0", "1", "0", "0", "0"],
                &["b", "c", "0", "0", "0", "3", "0", "0"],
                &["0", "0", "3*a", "b", "0", "0", "3", "0"],
                &["0", "0", "b", "c/3", "0", "0", "0", "1"],
            ],
        );
        let lah = smat(
            &g,
            &[
                &["3*a", "b", "0", "0", "3", "0", "0", "0"],
                &["b", "c/3", "0", "0", "0", "1", "0", "0"],
                &["0", "0", "a", "b", "0", "0", "1", "0"],
                &["0", "0", "b", "c", "0", "0", "0", "3"],
            ],
        );
        assert_eq!(ex.a.periods(), &la);
        assert_eq!(ex.a_hat.periods(), &lah);
    }

    #[test]
    fn closed_form_lattice_matches_the_replayed_base_change() {
        for ty in [&[1, 3][..], &[1, 2, 4], &[1, 1, 3], &[1, 2, 2, 6]] {
            let ex = elliptic_product(ty).unwrap();
            assert_eq!(
                ex.hand_torus.periods(),
                &ex.closed_form_lattice().unwrap(),
                "{ty:?}"
            );
            let ex = general_product(ty).unwrap();
            assert_eq!(
                ex.hand_torus.periods(),
                &ex.closed_form_lattice().unwrap(),
                "{ty:?}"
            );
        }
    }

    #[test]
    fn type_validation() {
        assert!(check_type(&[1, 3]).is_ok());
        assert!(check_type(&[2, 4]).is_err());
        assert!(check_type(&[1, 2, 3]).is_err());
        assert!(check_type(&[1, 1]).is_err());
    }
}
