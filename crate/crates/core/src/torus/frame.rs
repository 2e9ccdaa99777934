use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{standard_gram, PolarisedTorus};
use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix, RatMatrix};
use crate::scalars::ScalarMatrix;

/// Standard frame `[Z | D]` of a torus: `torus.periods = C Π U` and
/// `torus.gram = Uᵀ E U = [[0, D], [-D, 0]]`.
#[derive(Clone, Debug)]
pub struct FrameChange {
    pub torus: PolarisedTorus,
    pub lattice_change: IntMatrix,
    pub complex_change: RatMatrix,
    pub divisors: Vec<BigInt>,
}

/// `D` when `periods = [Z | D]` with `Z` symmetric and `D` a positive
/// constant diagonal.
pub(crate) fn standard_divisors(periods: &ScalarMatrix) -> Option<Vec<BigInt>> {
    let n = periods.rows();
    if periods.cols() != 2 * n {
        return None;
    }
    let right = periods.columns(n..2 * n).as_rational()?;
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let x = &right[(i, j)];
            if i == j {
                if !x.is_integer() || !x.is_positive() {
                    return None;
                }
                d.push(x.to_integer());
            } else if !x.is_zero() {
                return None;
            }
        }
    }
    let z = periods.columns(0..n);
    (z == z.transpose()).then_some(d)
}

impl PolarisedTorus {
    /// Divisors `D` if this torus is already in a standard frame.
    pub fn standard_frame_divisors(&self) -> Option<Vec<BigInt>> {
        standard_divisors(&self.periods).filter(|d| self.gram == standard_gram(d))
    }

    /// Move to a standard frame `[Z | D]`, with `D` in divisibility order.
    ///
    /// The frame is built from the constant sublattice, which must be a
    /// Lagrangian of rank n.
    pub fn to_standard_frame(&self) -> Result<FrameChange> {
        let n = self.dim();
        if let Some(d) = self.standard_frame_divisors() {
            return Ok(FrameChange {
                torus: self.clone(),
                lattice_change: IntMatrix::identity(2 * n),
                complex_change: RatMatrix::identity(n),
                divisors: d,
            });
        }
        let e = &self.gram;
        let w0 = self.constant_sublattice();
        if w0.cols() != n {
            return Err(Error::Frame(format!(
                "constant sublattice has rank {}, expected {n}",
                w0.cols()
            )));
        }
        if !w0.transpose().checked_mul(e)?.checked_mul(&w0)?.is_zero() {
            return Err(Error::Frame("constant sublattice is not isotropic".into()));
        }
        // complete the saturated W to a unimodular basis [V | W]
        let f = snf(&w0);
        let x =
            f.u.to_rational()
                .inverse()?
                .to_integer()
                .expect("unimodular");
        let mut w = x.select_columns(&(0..n).collect::<Vec<_>>());
        let mut v = x.select_columns(&(n..2 * n).collect::<Vec<_>>());
        let c = v.transpose().checked_mul(e)?.checked_mul(&w)?;
        let g = snf(&c);
        let d = g.invariants();
        if d.len() != n {
            return Err(Error::Degenerate("Riemann form is singular".into()));
        }
        v = v.checked_mul(&g.u.transpose())?;
        w = w.checked_mul(&g.v)?;
        // clear the λ-λ pairings: V <- V + W X
        let a = v.transpose().checked_mul(e)?.checked_mul(&v)?;
        let mut xm = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let (q, r) = a[(i, j)].div_rem(&d[i]);
                if !r.is_zero() {
                    return Err(Error::Frame(format!(
                        "pairing {} is not divisible by {}",
                        a[(i, j)],
                        d[i]
                    )));
                }
                xm[(i, j)] = -q;
            }
        }
        v = v.checked_add(&w.checked_mul(&xm)?)?;
        let u = v.hstack(&w)?;
        let gram = u.transpose().checked_mul(e)?.checked_mul(&u)?;
        debug_assert_eq!(gram, standard_gram(&d));
        let k = self
            .periods
            .mul_rational(&w.to_rational())?
            .as_rational()
            .expect("constant by construction");
        let kinv = k
            .inverse()
            .map_err(|_| Error::Frame("constant periods do not span C^n".into()))?;
        let dq: Vec<BigRational> = d.iter().cloned().map(BigRational::from_integer).collect();
        let complex = RatMatrix::diagonal(&dq).checked_mul(&kinv)?;
        let periods = self
            .periods
            .mul_rational(&u.to_rational())?
            .left_mul_rational(&complex)?;
        let z = periods.columns(0..n);
        if z != z.transpose() {
            return Err(Error::Frame(
                "period matrix is not compatible with the Riemann form (Z not symmetric)".into(),
            ));
        }
        Ok(FrameChange {
            torus: PolarisedTorus {
                periods,
                gram,
                assumptions: self.assumptions.clone(),
            },
            lattice_change: u,
            complex_change: complex,
            divisors: d,
        })
    }
}
