//! Bounded search for principal polarisations `H` with `H Λ_A = Λ_Â`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::homs::search::{combine_small, find_first, is_unit_det, small_basis};
use crate::homs::{combine, shell_vectors};
use crate::linalg::{int_kernel_rational, span_equal, IntMatrix};
use crate::scalars::{monomial_flatten, FormalScalar, ScalarMatrix};
use crate::torus::PolarisedTorus;

/// Lattice of integer symmetric `H` with `H Λ_A ⊆ Λ_Â`, each basis element
/// paired with the integer matrix `M` of `H Π_A = Π_Â M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleFamily {
    pub basis: Vec<IntMatrix>,
    pub maps: Vec<IntMatrix>,
}

impl AdmissibleFamily {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

fn sym_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Solve `H Π_A = Π_Â M` for symmetric integer `H` and integer `M`.
pub fn admissible_family(a: &PolarisedTorus, ahat: &PolarisedTorus) -> Result<AdmissibleFamily> {
    a.generators().check(ahat.generators())?;
    if a.dim() != ahat.dim() {
        return Err(Error::Shape(format!(
            "dimensions differ: {} vs {}",
            a.dim(),
            ahat.dim()
        )));
    }
    let gens = a.generators();
    let n = a.dim();
    let sym = sym_index(n);
    let nh = sym.len();
    let nm = 4 * n * n;
    let (pa, ph) = (a.periods(), ahat.periods());
    let mut system = ScalarMatrix::zeros(gens, n * 2 * n, nh + nm);
    for r in 0..n {
        for c in 0..2 * n {
            let row = r * 2 * n + c;
            for (u, &(i, j)) in sym.iter().enumerate() {
                // H[r, s] with {r, s} = {i, j}
                let mut v = FormalScalar::zero(gens);
                if i == r {
                    v = v.checked_add(pa.get(j, c))?;
                }
                if j == r && i != j {
                    v = v.checked_add(pa.get(i, c))?;
                }
                system.set(row, u, v);
            }
            for k in 0..2 * n {
                system.set(row, nh + k * 2 * n + c, -ph.get(r, k));
            }
        }
    }
    let eqs = monomial_flatten(&system).column_matrix();
    // h coordinates come first, so the Hermite basis pivots on them
    let kernel = int_kernel_rational(&eqs);
    let mut basis = Vec::with_capacity(kernel.cols());
    let mut maps = Vec::with_capacity(kernel.cols());
    for col in kernel.columns() {
        let mut h = IntMatrix::zeros(n, n);
        for (u, &(i, j)) in sym.iter().enumerate() {
            h[(i, j)] = col[u].clone();
            h[(j, i)] = col[u].clone();
        }
        if h.is_zero() {
            return Err(Error::Degenerate(
                "periods of the target are dependent; M is not determined by H".into(),
            ));
        }
        basis.push(h);
        maps.push(IntMatrix::from_vec(2 * n, 2 * n, col[nh..].to_vec())?);
    }
    Ok(AdmissibleFamily { basis, maps })
}

/// `H Π_A == Π_Â M`.
pub fn satisfies_relation(
    h: &IntMatrix,
    m: &IntMatrix,
    a: &PolarisedTorus,
    ahat: &PolarisedTorus,
) -> Result<bool> {
    let lhs = a.periods().left_mul_rational(&h.to_rational())?;
    Ok(lhs == ahat.periods().mul_rational(&m.to_rational())?)
}

/// Sylvester's criterion with an early exit on `h_11 <= 0`.
pub fn is_positive_definite(h: &IntMatrix) -> bool {
    if h.rows() == 0 || !h[(0, 0)].is_positive() {
        return false;
    }
    h.leading_minors()
        .map(|m| m.iter().all(Signed::is_positive))
        .unwrap_or(false)
}

fn is_pd_small(h: &[i128], n: usize) -> Option<bool> {
    if h[0] <= 0 {
        return Some(false);
    }
    for k in 2..=n {
        let mut sub = Vec::with_capacity(k * k);
        for i in 0..k {
            sub.extend_from_slice(&h[i * n..i * n + k]);
        }
        if crate::homs::search::det_i128(sub, k)? <= 0 {
            return Some(false);
        }
    }
    Some(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PpVerdict {
    Found {
        h: IntMatrix,
        coefficients: Vec<i64>,
        tested: u64,
        family_rank: usize,
    },
    /// Bounded evidence only: no witness with coefficients up to `bound`.
    NotFoundUpToBound {
        bound: u32,
        tested: u64,
        family_rank: usize,
    },
}

impl PpVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            PpVerdict::Found { .. } => "found",
            PpVerdict::NotFoundUpToBound { .. } => "not-found-up-to-bound",
        }
    }
}

/// Search the admissible family for a positive definite `H` realising
/// `H Λ_A = Λ_Â`.
pub fn pp_search(a: &PolarisedTorus, ahat: &PolarisedTorus, bound: u32) -> Result<PpVerdict> {
    let fam = admissible_family(a, ahat)?;
    pp_search_family(&fam, a, ahat, bound)
}

pub fn pp_search_family(
    fam: &AdmissibleFamily,
    a: &PolarisedTorus,
    ahat: &PolarisedTorus,
    bound: u32,
) -> Result<PpVerdict> {
    let k = fam.rank();
    if k == 0 {
        return Ok(PpVerdict::NotFoundUpToBound {
            bound,
            tested: 0,
            family_rank: 0,
        });
    }
    let n = a.dim();
    let hs = small_basis(&fam.basis);
    let ms = small_basis(&fam.maps);
    let accept = |c: &[i64]| -> bool {
        let pd = match &hs {
            Some(b) => is_pd_small(&combine_small(b, c), n),
            None => None,
        };
        let pd = pd.unwrap_or_else(|| is_positive_definite(&combine(&fam.basis, c)));
        if !pd {
            return false;
        }
        match &ms {
            Some(b) => is_unit_det(&combine_small(b, c), 2 * n),
            None => combine(&fam.maps, c)
                .det()
                .map(|d| d.abs() == BigInt::from(1))
                .unwrap_or(false),
        }
    };
    let mut tested = 0u64;
    for s in 1..=i64::from(bound) {
        let shell = shell_vectors(k, s);
        if let Some(i) = find_first(&shell, accept) {
            tested += i as u64 + 1;
            let coefficients = shell[i].clone();
            let h = combine(&fam.basis, &coefficients);
            let hp = a.periods().left_mul_rational(&h.to_rational())?;
            if !span_equal(&hp, ahat.periods())? {
                return Err(Error::Precondition(
                    "unimodular lattice map without span equality".into(),
                ));
            }
            return Ok(PpVerdict::Found {
                h,
                coefficients,
                tested,
                family_rank: k,
            });
        }
        tested += shell.len() as u64;
    }
    Ok(PpVerdict::NotFoundUpToBound {
        bound,
        tested,
        family_rank: k,
    })
}

/// Residues of squares modulo `d`, with the verdict on `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionCertificate {
    pub d: u64,
    pub squares: Vec<u64>,
    /// `true` iff `-1` is not a square mod `d`.
    pub obstructed: bool,
}

impl fmt::Display for ObstructionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sq: Vec<String> = self.squares.iter().map(ToString::to_string).collect();
        let list = match sq.len() {
            1 => sq[0].clone(),
            _ => format!("{} or {}", sq[..sq.len() - 1].join(", "), sq[sq.len() - 1]),
        };
        write!(f, "h² ≡ {list} (mod {})", self.d)?;
        if self.obstructed {
            write!(f, "; -1 ≡ {} is not a square", self.d - 1)
        } else {
            write!(f, "; -1 ≡ {} is a square", self.d - 1)
        }
    }
}

pub fn obstruction_certificate(d: u64) -> Result<ObstructionCertificate> {
    if d < 2 {
        return Err(Error::Precondition(format!(
            "modulus must be at least 2, got {d}"
        )));
    }
    let mut squares: Vec<u64> = (0..d)
        .map(|h| {
            ((u128::from(h) * u128::from(h)) % u128::from(d))
                .to_u64()
                .expect("< d")
        })
        .collect();
    squares.sort_unstable();
    squares.dedup();
    let obstructed = squares.binary_search(&(d - 1)).is_err();
    Ok(ObstructionCertificate {
        d,
        squares,
        obstructed,
    })
}

/// `true` iff `-1` is a quadratic non-residue modulo `d`.
pub fn obstruction_check(d: u64) -> Result<bool> {
    Ok(obstruction_certificate(d)?.obstructed)
}

/// `(k, h, m)` when `H = [[dk, 0, h, 0], [0, k, 0, h], [h, 0, m, 0], [0, h, 0, dm]]`.
pub fn family_shape(h: &IntMatrix, d: i64) -> Option<(BigInt, BigInt, BigInt)> {
    if h.rows() != 4 || !h.is_square() || !h.is_symmetric() {
        return None;
    }
    let zero = [(0, 1), (0, 3), (1, 2), (2, 3)];
    if zero.iter().any(|&(i, j)| !h[(i, j)].is_zero()) {
        return None;
    }
    let d = BigInt::from(d);
    let k = h[(1, 1)].clone();
    let m = h[(2, 2)].clone();
    let hh = h[(0, 2)].clone();
    let ok = h[(0, 0)] == &d * &k && h[(3, 3)] == &d * &m && h[(1, 3)] == hh;
    ok.then_some((k, hh, m))
}

/// `H Π_A` for reports.
pub fn transformed_periods(h: &IntMatrix, a: &PolarisedTorus) -> Result<ScalarMatrix> {
    a.periods().left_mul_rational(&h.to_rational())
}

/// Rational `H` from a family coefficient vector.
pub fn family_member(fam: &AdmissibleFamily, c: &[i64]) -> IntMatrix {
    combine(&fam.basis, c)
}
