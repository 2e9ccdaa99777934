use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{alternating_type, PolarisationType, PolarisedTorus};
use crate::error::{Error, Result};
use crate::linalg::{saturate, snf, IntMatrix, RatMatrix};
use crate::scalars::{monomial_flatten, ScalarMatrix};

/// Abelian subvariety given by a saturated sublattice `Λ_B ⊆ Λ_A`.
///
/// That `Λ_B` spans a complex subspace is an assumption; only its rational
/// shadow is checked by [`SubvarietyEmbedding::subtorus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubvarietyEmbedding {
    ambient: PolarisedTorus,
    sublattice: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPolarisation {
    pub gram: IntMatrix,
    pub ptype: PolarisationType,
    pub exponent: BigInt,
}

impl SubvarietyEmbedding {
    pub fn new(ambient: PolarisedTorus, sublattice: IntMatrix) -> Result<Self> {
        let dim = 2 * ambient.dim();
        if sublattice.rows() != dim {
            return Err(Error::Shape(format!(
                "sublattice has {} rows, expected {dim}",
                sublattice.rows()
            )));
        }
        if !sublattice.cols().is_multiple_of(2) {
            return Err(Error::Shape("sublattice rank must be even".into()));
        }
        let f = snf(&sublattice);
        if f.rank() != sublattice.cols() || !f.invariants().iter().all(One::is_one) {
            return Err(Error::Precondition(
                "sublattice columns must be independent and saturated".into(),
            ));
        }
        Ok(SubvarietyEmbedding {
            ambient,
            sublattice,
        })
    }

    /// Saturation of the lattice spanned by the columns of `gens`.
    pub fn from_generators(ambient: PolarisedTorus, gens: &IntMatrix) -> Result<Self> {
        let j = saturate(gens);
        Self::new(ambient, j)
    }

    pub fn whole(ambient: PolarisedTorus) -> Self {
        let j = IntMatrix::identity(2 * ambient.dim());
        SubvarietyEmbedding {
            ambient,
            sublattice: j,
        }
    }

    pub fn ambient(&self) -> &PolarisedTorus {
        &self.ambient
    }

    pub fn sublattice(&self) -> &IntMatrix {
        &self.sublattice
    }

    /// Complex dimension of the subvariety.
    pub fn dim(&self) -> usize {
        self.sublattice.cols() / 2
    }

    pub fn restricted_polarisation(&self) -> Result<RestrictedPolarisation> {
        let j = &self.sublattice;
        let gram = j
            .transpose()
            .checked_mul(self.ambient.gram())?
            .checked_mul(j)?;
        if gram.rows() == 0 {
            return Ok(RestrictedPolarisation {
                gram,
                ptype: PolarisationType::new(Vec::new()),
                exponent: BigInt::one(),
            });
        }
        let ptype = alternating_type(&gram)?;
        let exponent = ptype.exponent();
        Ok(RestrictedPolarisation {
            gram,
            ptype,
            exponent,
        })
    }

    /// The subvariety as a torus of its own: periods `P` (m x 2m) with
    /// `Π J = W P` for a constant `W`; returns the torus and `W`.
    pub fn subtorus(&self) -> Result<(PolarisedTorus, RatMatrix)> {
        let pj = self
            .ambient
            .periods()
            .mul_rational(&self.sublattice.to_rational())?;
        let (pivots, w) = row_dependencies(&pj);
        if pivots.len() != self.dim() {
            return Err(Error::Precondition(format!(
                "periods of the sublattice span {} rational rows, expected {}",
                pivots.len(),
                self.dim()
            )));
        }
        let periods = pj.select_rows(&pivots);
        let gram = self.restricted_polarisation()?.gram;
        let t = PolarisedTorus::new(periods, gram, self.ambient.assumptions())?;
        Ok((t, w))
    }
}

/// First maximal Q-independent set of rows of `m`, and the constant matrix
/// `W` with `m = W m[pivots]`.
pub(crate) fn row_dependencies(m: &ScalarMatrix) -> (Vec<usize>, RatMatrix) {
    let f = monomial_flatten(m);
    let nm = f.monomials.len();
    // one column per row of m
    let mut t = RatMatrix::zeros(f.cols * nm, f.rows);
    for i in 0..f.rows {
        for j in 0..f.cols {
            for (k, c) in f.coefficient(i, j).iter().enumerate() {
                t[(j * nm + k, i)] = c.clone();
            }
        }
    }
    let (r, pivots) = t.rref();
    let mut w = RatMatrix::zeros(f.rows, pivots.len());
    for i in 0..f.rows {
        for k in 0..pivots.len() {
            w[(i, k)] = r[(k, i)].clone();
        }
    }
    debug_assert!(pivots
        .iter()
        .enumerate()
        .all(|(k, &p)| !w[(p, k)].is_zero()));
    (pivots, w)
}
