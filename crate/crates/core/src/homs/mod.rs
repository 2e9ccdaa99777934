//! Homomorphisms between polarised tori as integer matrices on lattice bases.

mod enumerate;
pub(crate) mod search;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{int_kernel_rational, saturate, IntMatrix, RatMatrix};
use crate::scalars::{monomial_flatten, FormalScalar, ScalarMatrix};
use crate::torus::{Dual, PolarisedTorus, SubvarietyEmbedding};

pub use enumerate::{coefficient_vectors, shell_vectors};
pub use search::{isom_search, IsomVerdict, DEFAULT_BOUND};

/// A homomorphism `X -> Y`: `analytic_rep * Π_X = Π_Y * rational_rep`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomGenerator {
    pub rational_rep: IntMatrix,
    pub analytic_rep: ScalarMatrix,
}

/// Constant part of the frame of `x`: the constant sublattice `W` and
/// `(Π_X W)^-1`.
fn constant_frame(x: &PolarisedTorus) -> Result<(RatMatrix, RatMatrix)> {
    let w = x.constant_sublattice();
    if w.cols() != x.dim() {
        return Err(Error::Frame(format!(
            "constant sublattice has rank {}, expected {}",
            w.cols(),
            x.dim()
        )));
    }
    let wq = w.to_rational();
    let k = x
        .periods()
        .mul_rational(&wq)?
        .as_rational()
        .expect("constant by construction");
    let kinv = k
        .inverse()
        .map_err(|_| Error::Frame("constant periods do not span C^n".into()))?;
    Ok((wq, kinv))
}

/// Analytic representation of the lattice map `m: Λ_X -> Λ_Y`, or an error
/// if `m` does not come from a complex-linear map.
pub fn analytic_rep(x: &PolarisedTorus, y: &PolarisedTorus, m: &IntMatrix) -> Result<ScalarMatrix> {
    x.generators().check(y.generators())?;
    if m.rows() != 2 * y.dim() || m.cols() != 2 * x.dim() {
        return Err(Error::Shape(format!(
            "rational representation must be {}x{}",
            2 * y.dim(),
            2 * x.dim()
        )));
    }
    let (w, kinv) = constant_frame(x)?;
    let ym = y.periods().mul_rational(&m.to_rational())?;
    let f = ym.mul_rational(&w.checked_mul(&kinv)?)?;
    if f.checked_mul(x.periods())? != ym {
        return Err(Error::Precondition(
            "matrix is not the rational representation of a homomorphism".into(),
        ));
    }
    Ok(f)
}

/// Basis of `Hom(X, Y)` as a free abelian group.
///
/// With `W` the constant sublattice of `X` and `K = Π_X W`, any analytic
/// representation is `F = Π_Y M W K^-1`, so `M` is a homomorphism iff
/// `Π_Y M (W K^-1 Π_X - 1) = 0`, a linear condition on the entries of `M`.
pub fn hom_module(x: &PolarisedTorus, y: &PolarisedTorus) -> Result<Vec<HomGenerator>> {
    x.generators().check(y.generators())?;
    let gens = x.generators();
    let (nx, ny) = (2 * x.dim(), 2 * y.dim());
    let (w, kinv) = constant_frame(x)?;
    let t = ScalarMatrix::from_rational(gens, &w.checked_mul(&kinv)?)
        .checked_mul(x.periods())?
        .checked_sub(&ScalarMatrix::from_rational(gens, &RatMatrix::identity(nx)))?;
    let py = y.periods();
    // row (i, c) of Π_Y M T, column (a, b) of M
    let mut system = ScalarMatrix::zeros(gens, y.dim() * nx, ny * nx);
    for i in 0..y.dim() {
        for c in 0..nx {
            for a in 0..ny {
                if py.get(i, a).is_zero() {
                    continue;
                }
                for b in 0..nx {
                    let v = py.get(i, a).checked_mul(t.get(b, c))?;
                    system.set(i * nx + c, a * nx + b, v);
                }
            }
        }
    }
    // one row per (equation, monomial), one column per unknown
    let eqs = monomial_flatten(&system).column_matrix();
    let kernel = int_kernel_rational(&eqs);
    let mut out = Vec::with_capacity(kernel.cols());
    for col in kernel.columns() {
        let m = IntMatrix::from_vec(ny, nx, col)?;
        let analytic_rep = analytic_rep(x, y, &m)?;
        out.push(HomGenerator {
            rational_rep: m,
            analytic_rep,
        });
    }
    Ok(out)
}

/// `J' = [[0, -1], [1, 0]]` of size `2n`.
fn jprime(n: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = (-1).into();
        j[(n + i, i)] = 1.into();
    }
    j
}

fn dual_of(t: &PolarisedTorus) -> Result<Dual> {
    t.dual()
}

/// Rational representation of `f̂: Ŷ -> X̂` in the bases produced by
/// [`PolarisedTorus::dual`]: `Q_Xᵀ J'^-1 Mᵀ J' Q_Y`.
pub fn dual_rational_rep(m: &IntMatrix, dx: &Dual, dy: &Dual) -> Result<IntMatrix> {
    let nx = dx.permutation.len();
    let ny = dy.permutation.len();
    let jx_inv = jprime(nx).transpose();
    dx.lattice_permutation()
        .transpose()
        .checked_mul(&jx_inv)?
        .checked_mul(&m.transpose())?
        .checked_mul(&jprime(ny))?
        .checked_mul(&dy.lattice_permutation())
}

/// The dual homomorphism `Ŷ -> X̂`; `x` and `y` must be in standard frames.
pub fn dual_hom(f: &HomGenerator, x: &PolarisedTorus, y: &PolarisedTorus) -> Result<HomGenerator> {
    let (dx, dy) = (dual_of(x)?, dual_of(y)?);
    let m = dual_rational_rep(&f.rational_rep, &dx, &dy)?;
    let analytic_rep = analytic_rep(&dy.torus, &dx.torus, &m).map_err(|e| match e {
        Error::Precondition(_) => Error::Frame("dual frames do not match".into()),
        other => other,
    })?;
    Ok(HomGenerator {
        rational_rep: m,
        analytic_rep,
    })
}

/// The polarising isogeny `φ_L: X -> X̂`, `X` in a standard frame.
pub fn polarisation_hom(x: &PolarisedTorus) -> Result<HomGenerator> {
    let d = x
        .standard_frame_divisors()
        .ok_or_else(|| Error::Frame("polarising isogeny needs a standard frame [Z | D]".into()))?;
    let dx = x.dual()?;
    let dd: Vec<BigInt> = d.iter().chain(d.iter()).cloned().collect();
    let m = dx
        .lattice_permutation()
        .transpose()
        .checked_mul(&IntMatrix::diagonal(&dd))?;
    let analytic_rep = analytic_rep(x, &dx.torus, &m)?;
    Ok(HomGenerator {
        rational_rep: m,
        analytic_rep,
    })
}

/// Symmetric idempotent of an abelian subvariety and its norm endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentData {
    pub epsilon: RatMatrix,
    pub exponent: BigInt,
    pub norm: IntMatrix,
}

/// `ε_B = J gram_B^-1 Jᵀ gram` on the lattice of the ambient torus.
pub fn idempotent(e: &SubvarietyEmbedding) -> Result<IdempotentData> {
    let dim = 2 * e.ambient().dim();
    if e.dim() == 0 {
        return Ok(IdempotentData {
            epsilon: RatMatrix::zeros(dim, dim),
            exponent: BigInt::one(),
            norm: IntMatrix::zeros(dim, dim),
        });
    }
    let r = e.restricted_polarisation()?;
    let j = e.sublattice().to_rational();
    let ginv = r
        .gram
        .to_rational()
        .inverse()
        .map_err(|_| Error::Degenerate("restricted polarisation is singular".into()))?;
    let epsilon = j
        .checked_mul(&ginv)?
        .checked_mul(&j.transpose())?
        .checked_mul(&e.ambient().gram().to_rational())?;
    let norm = epsilon
        .scale(&BigRational::from_integer(r.exponent.clone()))
        .to_integer()
        .expect("exponent clears the denominators of the idempotent");
    Ok(IdempotentData {
        epsilon,
        exponent: r.exponent,
        norm,
    })
}

/// Image of `1 - ε_B`, saturated.
pub fn complementary_subvariety(e: &SubvarietyEmbedding) -> Result<SubvarietyEmbedding> {
    let dim = 2 * e.ambient().dim();
    let eps = idempotent(e)?.epsilon;
    let image = RatMatrix::identity(dim).checked_sub(&eps)?;
    let (m, _) = image.clear_denominators();
    SubvarietyEmbedding::new(e.ambient().clone(), saturate(&m))
}

/// Sum of a generator list with integer coefficients.
pub fn combine(basis: &[IntMatrix], coeffs: &[i64]) -> IntMatrix {
    let first = &basis[0];
    let mut out = IntMatrix::zeros(first.rows(), first.cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            out = out
                .checked_add(&b.scale(&BigInt::from(c)))
                .expect("same shape");
        }
    }
    out
}

impl HomGenerator {
    /// Identity of the scalar matrix type for `x`.
    pub fn identity(x: &PolarisedTorus) -> Self {
        let n = x.dim();
        let mut f = ScalarMatrix::zeros(x.generators(), n, n);
        for i in 0..n {
            f.set(i, i, FormalScalar::one(x.generators()));
        }
        HomGenerator {
            rational_rep: IntMatrix::identity(2 * n),
            analytic_rep: f,
        }
    }
}

#[cfg(test)]
mod tests;
