use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{standard_gram, PolarisedTorus};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::scalars::{FormalScalar, ScalarMatrix};

/// Dual torus of a standard frame `[Z | D]`.
#[derive(Clone, Debug)]
pub struct Dual {
    /// `[R Z D^-1 | R]` with `R = d_1 d_n D^-1`, rows in the input order.
    pub raw: PolarisedTorus,
    /// `raw` with coordinates stably sorted so the divisors increase.
    pub torus: PolarisedTorus,
    /// Coordinate `i` of `torus` is coordinate `permutation[i]` of `raw`.
    pub permutation: Vec<usize>,
}

impl Dual {
    /// `Q = diag(P, P)` with `torus.periods = P raw.periods Q`.
    pub fn lattice_permutation(&self) -> IntMatrix {
        let n = self.permutation.len();
        let mut q = IntMatrix::zeros(2 * n, 2 * n);
        for (k, &s) in self.permutation.iter().enumerate() {
            q[(s, k)] = 1.into();
            q[(n + s, n + k)] = 1.into();
        }
        q
    }

    /// Row permutation `P` (n x n) acting on complex coordinates.
    pub fn complex_permutation(&self) -> RatMatrix {
        let n = self.permutation.len();
        let mut p = RatMatrix::zeros(n, n);
        for (k, &s) in self.permutation.iter().enumerate() {
            p[(k, s)] = BigRational::from_integer(1.into());
        }
        p
    }
}

impl PolarisedTorus {
    /// Dual torus with its dual polarisation; the input must be in a
    /// standard frame.
    pub fn dual(&self) -> Result<Dual> {
        let Some(d) = self.standard_frame_divisors() else {
            return Err(Error::Frame(
                "dual needs a standard frame [Z | D]; convert with to_standard_frame first".into(),
            ));
        };
        let n = self.dim();
        let lo = d.iter().min().expect("n > 0");
        let hi = d.iter().max().expect("n > 0");
        let p = lo * hi;
        if d.iter().any(|x| !(&p % x).is_zero()) {
            return Err(Error::Frame(format!(
                "divisors {d:?} do not form a divisibility chain"
            )));
        }
        let r: Vec<BigInt> = d.iter().map(|x| &p / x).collect();
        let gens = self.generators();
        let mut periods = ScalarMatrix::zeros(gens, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let c = BigRational::new(r[i].clone(), d[j].clone());
                periods.set(i, j, self.periods.get(i, j).scale(&c));
            }
            periods.set(
                i,
                n + i,
                FormalScalar::constant(gens, BigRational::from_integer(r[i].clone())),
            );
        }
        let raw = PolarisedTorus::new(periods, standard_gram(&r), self.assumptions.clone())?;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by(|&a, &b| r[a].cmp(&r[b]));
        let mut sorted = ScalarMatrix::zeros(gens, n, 2 * n);
        for (i, &si) in perm.iter().enumerate() {
            for (j, &sj) in perm.iter().enumerate() {
                sorted.set(i, j, raw.periods.get(si, sj).clone());
                sorted.set(i, n + j, raw.periods.get(si, n + sj).clone());
            }
        }
        let rs: Vec<BigInt> = perm.iter().map(|&s| r[s].clone()).collect();
        let torus = PolarisedTorus::new(sorted, standard_gram(&rs), self.assumptions.clone())?;
        Ok(Dual {
            raw,
            torus,
            permutation: perm,
        })
    }
}
