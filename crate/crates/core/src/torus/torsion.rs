use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hnf, snf, IntMatrix, RatMatrix};
use crate::parse::format_rational;

/// Point of finite order, in lattice coordinates modulo `Z^2n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorsionPoint {
    coords: Vec<BigRational>,
    order: BigInt,
}

fn frac(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl TorsionPoint {
    /// Reduces `coords` into `[0, 1)` and computes the order.
    pub fn new(coords: Vec<BigRational>) -> Self {
        let coords: Vec<BigRational> = coords.iter().map(frac).collect();
        let order = coords
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        TorsionPoint { coords, order }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![BigRational::zero(); dim])
    }

    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        Self::new(
            coords
                .iter()
                .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        let kq = BigRational::from_integer(k.clone());
        Self::new(self.coords.iter().map(|q| q * &kq).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) of order {}",
            self.to_strings().join(", "),
            self.order
        )
    }
}

impl fmt::Debug for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorsionPoint{self}")
    }
}

/// Finite subgroup of `Q^2n / Z^2n`, stored as the over-lattice
/// `L ⊇ Z^2n` it corresponds to. The basis is canonical (scaled column
/// Hermite form), so equality of groups is equality of values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteSubgroup {
    basis: RatMatrix,
}

impl FiniteSubgroup {
    pub fn trivial(dim: usize) -> Self {
        FiniteSubgroup {
            basis: RatMatrix::identity(dim),
        }
    }

    /// Subgroup generated by the classes of the columns of `gens`
    /// (2n x k, rational).
    pub fn from_lattice_generators(gens: &RatMatrix) -> Self {
        let dim = gens.rows();
        let all = RatMatrix::identity(dim).hstack(gens).expect("same rows");
        let (m, l) = all.clear_denominators();
        let (h, _) = hnf(&m);
        let lq = BigRational::from_integer(l).recip();
        let basis = h
            .select_columns(&(0..dim).collect::<Vec<_>>())
            .to_rational()
            .scale(&lq);
        FiniteSubgroup { basis }
    }

    pub fn from_points(dim: usize, points: &[TorsionPoint]) -> Self {
        let cols: Vec<Vec<BigRational>> = points.iter().map(|p| p.coords.clone()).collect();
        Self::from_lattice_generators(&RatMatrix::from_columns(&cols, dim))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Basis (columns) of the over-lattice.
    pub fn lattice_basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn order(&self) -> BigInt {
        let d = self.basis.det().expect("square");
        let inv = d.abs().recip();
        debug_assert!(inv.is_integer());
        inv.to_integer()
    }

    pub fn contains(&self, p: &TorsionPoint) -> bool {
        let col = RatMatrix::from_columns(std::slice::from_ref(&p.coords), self.dim());
        let ext = FiniteSubgroup::from_lattice_generators(&self.basis.hstack(&col).unwrap());
        ext == *self
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        let joined = FiniteSubgroup::from_lattice_generators(
            &other.basis.hstack(&self.basis).expect("same dimension"),
        );
        joined == *other
    }

    /// Invariant-factor decomposition: generators with orders `s_1 | s_2 | ..`,
    /// trivial factors dropped.
    pub fn generators(&self) -> Vec<TorsionPoint> {
        let dim = self.dim();
        // Z^2n in the coordinates of the over-lattice basis
        let c = self
            .basis
            .inverse()
            .expect("basis is invertible")
            .to_integer()
            .expect("over-lattice contains Z^2n");
        let f = snf(&c);
        let uinv = f.u.to_rational().inverse().expect("unimodular");
        let b = self.basis.checked_mul(&uinv).unwrap();
        (0..dim)
            .filter(|&i| !f.s[(i, i)].is_one())
            .map(|i| TorsionPoint::new(b.column(i)))
            .collect()
    }

    /// Orders of the invariant-factor generators.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.generators().iter().map(|p| p.order.clone()).collect()
    }

    /// All elements; intended for small groups.
    pub fn elements(&self) -> Vec<TorsionPoint> {
        let gens = self.generators();
        let mut out = vec![TorsionPoint::zero(self.dim())];
        for g in &gens {
            let ord: usize = g.order.clone().try_into().expect("small group");
            let mut next = Vec::with_capacity(out.len() * ord);
            for p in &out {
                let mut q = p.clone();
                for _ in 0..ord {
                    next.push(q.clone());
                    q = q.add(g);
                }
            }
            out = next;
        }
        out
    }

    /// Image under the linear map `m` (new coordinates = m * old), taken
    /// modulo `Z^2n` in the new coordinates.
    pub fn map(&self, m: &RatMatrix) -> Result<Self> {
        if m.cols() != self.dim() || !m.is_square() {
            return Err(Error::Shape("subgroup map must be square".into()));
        }
        Ok(Self::from_lattice_generators(&m.checked_mul(&self.basis)?))
    }
}

/// Integer-valued lift check: `gram * x`, reported at the first
/// non-integral entry.
pub(crate) fn check_in_kernel(gram: &IntMatrix, x: &TorsionPoint) -> Result<()> {
    let g = gram.to_rational();
    for (i, v) in g.mul_vec(x.coords()).iter().enumerate() {
        if !v.is_integer() {
            return Err(Error::NotInKernel {
                index: i,
                pairing: format_rational(v),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_reduction() {
        let p = TorsionPoint::from_ratios(&[(0, 1), (4, 3), (-1, 3)]);
        assert_eq!(p.to_strings(), ["0", "1/3", "2/3"]);
        assert_eq!(p.order(), &BigInt::from(3));
        assert_eq!(TorsionPoint::zero(2).order(), &BigInt::one());
    }

    #[test]
    fn subgroup_structure() {
        let g = FiniteSubgroup::from_points(
            2,
            &[
                TorsionPoint::from_ratios(&[(1, 2), (0, 1)]),
                TorsionPoint::from_ratios(&[(0, 1), (1, 3)]),
            ],
        );
        assert_eq!(g.order(), BigInt::from(6));
        assert_eq!(g.invariants(), vec![BigInt::from(6)]);
        assert_eq!(g.elements().len(), 6);
        assert!(g.contains(&TorsionPoint::from_ratios(&[(1, 2), (2, 3)])));
        assert!(!g.contains(&TorsionPoint::from_ratios(&[(1, 3), (0, 1)])));
    }
}
