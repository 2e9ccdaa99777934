//! Polarised complex tori `C^n / Λ` with an integral Riemann form.

mod dual;
mod frame;
mod subvariety;
mod torsion;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int_kernel_rational, lattice_rank, snf, IntMatrix, RatMatrix};
use crate::scalars::{monomial_flatten, FormalScalar, GeneratorSet, ScalarMatrix};

pub use dual::Dual;
pub use frame::FrameChange;
pub use subvariety::{RestrictedPolarisation, SubvarietyEmbedding};
pub use torsion::{FiniteSubgroup, TorsionPoint};

/// Elementary divisors `(d_1, .., d_n)` of a polarisation, `d_i | d_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolarisationType(Vec<BigInt>);

impl PolarisationType {
    pub fn new(d: Vec<BigInt>) -> Self {
        PolarisationType(d)
    }

    pub fn from_i64(d: &[i64]) -> Self {
        PolarisationType(d.iter().map(|&x| x.into()).collect())
    }

    pub fn values(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_principal(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    /// Largest divisor; 1 for the empty type.
    pub fn exponent(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Type of the dual polarisation, `(d_1 d_n / d_n, .., d_1 d_n / d_1)`.
    pub fn dual(&self) -> Self {
        let (Some(first), Some(last)) = (self.0.first(), self.0.last()) else {
            return self.clone();
        };
        let p = first * last;
        PolarisationType(self.0.iter().rev().map(|d| &p / d).collect())
    }
}

impl fmt::Display for PolarisationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Collapse the elementary divisors of an alternating form into its type.
pub fn alternating_type(gram: &IntMatrix) -> Result<PolarisationType> {
    if !gram.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let inv = snf(gram).invariants();
    if inv.len() != gram.rows() {
        return Err(Error::Degenerate("Riemann form is singular".into()));
    }
    let paired = inv.chunks(2).all(|c| c.len() == 2 && c[0] == c[1]);
    if !paired {
        return Err(Error::OddMultiplicity(
            inv.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok(PolarisationType(inv.iter().step_by(2).cloned().collect()))
}

/// `[[0, D], [-D, 0]]`.
pub fn standard_gram(d: &[BigInt]) -> IntMatrix {
    let n = d.len();
    let mut m = IntMatrix::zeros(2 * n, 2 * n);
    for (i, x) in d.iter().enumerate() {
        m[(i, n + i)] = x.clone();
        m[(n + i, i)] = -x;
    }
    m
}

/// `|det M|`, the degree of the isogeny with rational representation `M`.
pub fn isogeny_degree(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "{}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    let d = m.det()?;
    if d.is_zero() {
        return Err(Error::NotAnIsogeny);
    }
    Ok(d.abs())
}

/// A torus `C^n / Λ` with period matrix `Π` (n x 2n, columns a basis of `Λ`)
/// and the Gram matrix of its Riemann form on that basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolarisedTorus {
    periods: ScalarMatrix,
    gram: IntMatrix,
    assumptions: String,
}

/// Result of [`PolarisedTorus::quotient_map`].
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub torus: PolarisedTorus,
    /// New lattice basis in old lattice coordinates.
    pub basis: RatMatrix,
    /// Rational representation of the projection, `basis^-1`.
    pub rational_rep: IntMatrix,
}

pub const DEFAULT_ASSUMPTIONS: &str = "Im Z > 0 (Riemann positivity) assumed";

impl PolarisedTorus {
    pub fn new(
        periods: ScalarMatrix,
        gram: IntMatrix,
        assumptions: impl Into<String>,
    ) -> Result<Self> {
        let n = periods.rows();
        if n == 0 || periods.cols() != 2 * n {
            return Err(Error::Shape(format!(
                "period matrix must be n x 2n, got {}x{}",
                n,
                periods.cols()
            )));
        }
        if gram.rows() != 2 * n || !gram.is_square() {
            return Err(Error::Shape(format!(
                "gram must be {0}x{0}, got {1}x{2}",
                2 * n,
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_alternating() {
            return Err(Error::NotAlternating);
        }
        if gram.det()?.is_zero() {
            return Err(Error::Degenerate("Riemann form is singular".into()));
        }
        let r = lattice_rank(&periods);
        if r != 2 * n {
            return Err(Error::RankDeficient(format!(
                "period columns have rank {r} over Q, expected {}",
                2 * n
            )));
        }
        Ok(PolarisedTorus {
            periods,
            gram,
            assumptions: assumptions.into(),
        })
    }

    /// Torus with periods `[Z | D]` and the standard form for `D`.
    pub fn from_frame(
        z: &ScalarMatrix,
        d: &[BigInt],
        assumptions: impl Into<String>,
    ) -> Result<Self> {
        let n = z.rows();
        if z.cols() != n || d.len() != n {
            return Err(Error::Shape("Z must be n x n with n divisors".into()));
        }
        if z != &z.transpose() {
            return Err(Error::Frame("Z is not symmetric".into()));
        }
        if d.iter().any(|x| !x.is_positive()) {
            return Err(Error::Frame("divisors must be positive".into()));
        }
        let dq: Vec<BigRational> = d.iter().cloned().map(BigRational::from_integer).collect();
        let right = ScalarMatrix::from_rational(z.generators(), &RatMatrix::diagonal(&dq));
        Self::new(z.hstack(&right)?, standard_gram(d), assumptions)
    }

    /// Elliptic curve with periods `[tau, d]` polarised by `[[0, d], [-d, 0]]`.
    pub fn elliptic(gens: &GeneratorSet, tau: &str, d: i64) -> Result<Self> {
        let t = FormalScalar::generator(gens, tau)?;
        let z = ScalarMatrix::from_rows(gens, vec![vec![t]])?;
        Self::from_frame(&z, &[BigInt::from(d)], DEFAULT_ASSUMPTIONS)
    }

    /// The standard form `[[0, D], [-D, 0]]` when `periods = [Z | D]` with
    /// `Z` symmetric and `D` a positive constant diagonal.
    pub fn infer_standard_gram(periods: &ScalarMatrix) -> Option<IntMatrix> {
        frame::standard_divisors(periods).map(|d| standard_gram(&d))
    }

    pub fn generators(&self) -> &GeneratorSet {
        self.periods.generators()
    }

    pub fn dim(&self) -> usize {
        self.periods.rows()
    }

    pub fn periods(&self) -> &ScalarMatrix {
        &self.periods
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn assumptions(&self) -> &str {
        &self.assumptions
    }

    pub fn polarisation_type(&self) -> Result<PolarisationType> {
        alternating_type(&self.gram)
    }

    /// `ker φ_L = gram^-1 Z^2n / Z^2n`.
    pub fn polarising_kernel(&self) -> FiniteSubgroup {
        let inv = self.gram.to_rational().inverse().expect("nondegenerate");
        FiniteSubgroup::from_lattice_generators(&inv)
    }

    pub fn check_in_kernel(&self, x: &TorsionPoint) -> Result<()> {
        self.check_point(x)?;
        torsion::check_in_kernel(&self.gram, x)
    }

    fn check_point(&self, x: &TorsionPoint) -> Result<()> {
        if x.dim() != 2 * self.dim() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, expected {}",
                x.dim(),
                2 * self.dim()
            )));
        }
        Ok(())
    }

    pub fn quotient(&self, x: &TorsionPoint) -> Result<PolarisedTorus> {
        Ok(self.quotient_map(x)?.torus)
    }

    /// Quotient by the cyclic group `<x>`, with the projection.
    pub fn quotient_map(&self, x: &TorsionPoint) -> Result<QuotientMap> {
        self.check_in_kernel(x)?;
        let dim = 2 * self.dim();
        let group = FiniteSubgroup::from_points(dim, std::slice::from_ref(x));
        let basis = group.lattice_basis().clone();
        let gram = basis
            .transpose()
            .checked_mul(&self.gram.to_rational())?
            .checked_mul(&basis)?
            .to_integer()
            .expect("isotropic descent keeps the form integral");
        let periods = self.periods.mul_rational(&basis)?;
        let rational_rep = basis
            .inverse()?
            .to_integer()
            .expect("new lattice contains the old one");
        let torus = PolarisedTorus {
            periods,
            gram,
            assumptions: self.assumptions.clone(),
        };
        Ok(QuotientMap {
            torus,
            basis,
            rational_rep,
        })
    }

    /// `G^⊥` inside `ker φ_L`, for the group generated by `points`.
    pub fn symplectic_complement(&self, points: &[TorsionPoint]) -> Result<FiniteSubgroup> {
        for p in points {
            self.check_in_kernel(p)?;
        }
        let g = FiniteSubgroup::from_points(2 * self.dim(), points);
        let pairing = g
            .lattice_basis()
            .transpose()
            .checked_mul(&self.gram.to_rational())?;
        Ok(FiniteSubgroup::from_lattice_generators(&pairing.inverse()?))
    }

    /// `X × Y` on the basis `(λ_X, λ_Y, μ_X, μ_Y)`, where each factor's basis
    /// is split into halves; standard frames stay standard.
    pub fn product(&self, other: &PolarisedTorus) -> Result<PolarisedTorus> {
        self.generators().check(other.generators())?;
        let (nx, ny) = (self.dim(), other.dim());
        let n = nx + ny;
        let map_x = |j: usize| if j < nx { j } else { j + ny };
        let map_y = |j: usize| if j < ny { nx + j } else { 2 * nx + j };
        let mut periods = ScalarMatrix::zeros(self.generators(), n, 2 * n);
        let mut gram = IntMatrix::zeros(2 * n, 2 * n);
        for j in 0..2 * nx {
            for i in 0..nx {
                periods.set(i, map_x(j), self.periods.get(i, j).clone());
            }
            for k in 0..2 * nx {
                gram[(map_x(j), map_x(k))] = self.gram[(j, k)].clone();
            }
        }
        for j in 0..2 * ny {
            for i in 0..ny {
                periods.set(nx + i, map_y(j), other.periods.get(i, j).clone());
            }
            for k in 0..2 * ny {
                gram[(map_y(j), map_y(k))] = other.gram[(j, k)].clone();
            }
        }
        let assumptions = if self.assumptions == other.assumptions {
            self.assumptions.clone()
        } else {
            format!("{}; {}", self.assumptions, other.assumptions)
        };
        PolarisedTorus::new(periods, gram, assumptions)
    }

    /// Saturated basis (columns) of the lattice vectors whose periods are
    /// constant, i.e. involve no generator.
    pub fn constant_sublattice(&self) -> IntMatrix {
        let f = monomial_flatten(&self.periods);
        let nonconst: Vec<usize> = (0..f.monomials.len())
            .filter(|&k| !f.monomials[k].is_one())
            .collect();
        let mut rows = Vec::new();
        for i in 0..f.rows {
            for &k in &nonconst {
                rows.push(
                    (0..f.cols)
                        .map(|j| f.coefficient(i, j)[k].clone())
                        .collect(),
                );
            }
        }
        if rows.is_empty() {
            return IntMatrix::identity(f.cols);
        }
        int_kernel_rational(&RatMatrix::from_rows(rows).expect("rectangular"))
    }

    /// Lattice coordinates of the point of `C^n` with the given (constant)
    /// ambient coordinates, expressed through the constant sublattice.
    pub fn point_from_ambient(&self, z: &[BigRational]) -> Result<TorsionPoint> {
        if z.len() != self.dim() {
            return Err(Error::Shape(format!(
                "ambient point has {} coordinates, expected {}",
                z.len(),
                self.dim()
            )));
        }
        let w = self.constant_sublattice();
        if w.cols() != self.dim() {
            return Err(Error::Frame(format!(
                "constant sublattice has rank {}, expected {}",
                w.cols(),
                self.dim()
            )));
        }
        let wq = w.to_rational();
        let k = self
            .periods
            .mul_rational(&wq)?
            .as_rational()
            .expect("constant by construction");
        let kinv = k
            .inverse()
            .map_err(|_| Error::Frame("constant periods do not span C^n".into()))?;
        let coords = wq.mul_vec(&kinv.mul_vec(z));
        Ok(TorsionPoint::new(coords))
    }

    /// Same torus on another lattice basis `U` (columns, unimodular) and
    /// complex coordinates `C`: periods `C Π U`, gram `Uᵀ E U`.
    pub fn change_frame(&self, u: &IntMatrix, c: &RatMatrix) -> Result<PolarisedTorus> {
        if !u.is_unimodular() {
            return Err(Error::Frame("lattice base change is not unimodular".into()));
        }
        let periods = self
            .periods
            .mul_rational(&u.to_rational())?
            .left_mul_rational(c)?;
        let gram = u.transpose().checked_mul(&self.gram)?.checked_mul(u)?;
        PolarisedTorus::new(periods, gram, self.assumptions.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_scalar;

    pub(crate) fn smat(g: &GeneratorSet, rows: &[&[&str]]) -> ScalarMatrix {
        ScalarMatrix::from_rows(
            g,
            rows.iter()
                .map(|r| r.iter().map(|e| parse_scalar(e, g).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn ls() -> PolarisedTorus {
        let g = GeneratorSet::new(["a", "b", "c"]).unwrap();
        let p = smat(&g, &[&["a", "b", "1", "0"], &["b", "c", "0", "3"]]);
        let gram = PolarisedTorus::infer_standard_gram(&p).unwrap();
        PolarisedTorus::new(p, gram, DEFAULT_ASSUMPTIONS).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn ef() -> PolarisedTorus {
        let g = GeneratorSet::new(["tau_E", "tau_F"]).unwrap();
        let e = PolarisedTorus::elliptic(&g, "tau_E", 3).unwrap();
        let f = PolarisedTorus::elliptic(&g, "tau_F", 3).unwrap();
        e.product(&f).unwrap()
    }

    #[test]
    fn type_of_ls_and_kernel() {
        let s = ls();
        assert_eq!(
            s.polarisation_type().unwrap(),
            PolarisationType::from_i64(&[1, 3])
        );
        let k = s.polarising_kernel();
        assert_eq!(k.invariants(), big(&[3, 3]));
        assert_eq!(k.order(), BigInt::from(9));
    }

    #[test]
    fn principal_kernel_is_trivial() {
        let g = GeneratorSet::new(["t"]).unwrap();
        let e = PolarisedTorus::elliptic(&g, "t", 1).unwrap();
        assert!(e.polarisation_type().unwrap().is_principal());
        assert_eq!(e.polarising_kernel(), FiniteSubgroup::trivial(2));
    }

    #[test]
    fn product_frame_and_kernel() {
        let x = ef();
        assert_eq!(
            x.polarisation_type().unwrap(),
            PolarisationType::from_i64(&[3, 3])
        );
        assert_eq!(x.gram(), &standard_gram(&big(&[3, 3])));
        let k = x.polarising_kernel();
        assert_eq!(k.order(), BigInt::from(81));
        assert_eq!(k.invariants(), big(&[3, 3, 3, 3]));
    }

    #[test]
    fn quotient_of_product() {
        let x = ef();
        let one = BigRational::one();
        let p = x.point_from_ambient(&[one.clone(), -one]).unwrap();
        assert_eq!(
            p,
            TorsionPoint::from_ratios(&[(0, 1), (0, 1), (1, 3), (-1, 3)])
        );
        let q = x.quotient_map(&p).unwrap();
        assert_eq!(
            q.torus.polarisation_type().unwrap(),
            PolarisationType::from_i64(&[1, 3])
        );
        assert_eq!(isogeny_degree(&q.rational_rep).unwrap(), BigInt::from(3));
        assert_eq!(x.quotient(&TorsionPoint::zero(4)).unwrap(), x);
    }

    #[test]
    fn quotient_rejects_points_outside_the_kernel() {
        let s = ls();
        let p = TorsionPoint::from_ratios(&[(1, 3), (0, 1), (0, 1), (0, 1)]);
        assert!(matches!(s.quotient(&p), Err(Error::NotInKernel { .. })));
    }

    #[test]
    fn complement_sizes() {
        let x = ef();
        let k = x.polarising_kernel();
        assert_eq!(x.symplectic_complement(&[]).unwrap(), k);
        assert_eq!(
            x.symplectic_complement(&k.generators()).unwrap(),
            FiniteSubgroup::trivial(4)
        );
        let p = TorsionPoint::from_ratios(&[(0, 1), (0, 1), (1, 3), (2, 3)]);
        let c = x.symplectic_complement(std::slice::from_ref(&p)).unwrap();
        assert_eq!(c.order(), BigInt::from(27));
        assert!(c.contains(&p));
    }

    #[test]
    fn degrees() {
        assert_eq!(
            isogeny_degree(&IntMatrix::identity(4)).unwrap(),
            BigInt::one()
        );
        let k = IntMatrix::identity(4).scale(&BigInt::from(5));
        assert_eq!(isogeny_degree(&k).unwrap(), BigInt::from(625));
        assert_eq!(
            isogeny_degree(&IntMatrix::zeros(2, 2)),
            Err(Error::NotAnIsogeny)
        );
    }

    #[test]
    fn odd_multiplicity_is_rejected() {
        let g = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert!(alternating_type(&g).is_err());
    }
}
