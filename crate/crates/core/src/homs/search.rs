use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{coefficient_vectors, combine, hom_module, shell_vectors};
use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix};
use crate::torus::PolarisedTorus;

pub const DEFAULT_BOUND: u32 = 10;

/// Outcome of a bounded isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsomVerdict {
    Found {
        witness: IntMatrix,
        coefficients: Vec<i64>,
        tested: u64,
    },
    /// No isomorphism among combinations with coefficients up to `bound`.
    NotFoundUpToBound {
        bound: u32,
        tested: u64,
        hom_rank: usize,
    },
    /// `Hom(X, Y) = 0`.
    NoHoms,
}

impl IsomVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            IsomVerdict::Found { .. } => "found",
            IsomVerdict::NotFoundUpToBound { .. } => "not-found-up-to-bound",
            IsomVerdict::NoHoms => "no-homs",
        }
    }
}

/// Determinant by fraction-free elimination in `i128`; `None` on overflow.
pub(crate) fn det_i128(mut a: Vec<i128>, n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        let p = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i * n + j]
                    .checked_mul(p)?
                    .checked_sub(a[i * n + k].checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
        }
        prev = p;
    }
    Some(sign * a[(n - 1) * n + (n - 1)])
}

/// `|det| == 1` for an integer matrix given as a flat `i128` buffer.
pub(crate) fn is_unit_det(flat: &[i128], n: usize) -> bool {
    match det_i128(flat.to_vec(), n) {
        Some(d) => d == 1 || d == -1,
        None => {
            let m = IntMatrix::from_vec(n, n, flat.iter().map(|&x| BigInt::from(x)).collect())
                .expect("square");
            m.det().map(|d| d.abs().is_one()).unwrap_or(false)
        }
    }
}

/// Determinant over GF(2) of a matrix given by row bitmasks.
fn det_gf2(mut rows: Vec<u128>) -> bool {
    let n = rows.len();
    for k in 0..n {
        let bit = 1u128 << k;
        let Some(p) = (k..n).find(|&i| rows[i] & bit != 0) else {
            return false;
        };
        rows.swap(k, p);
        for i in k + 1..n {
            if rows[i] & bit != 0 {
                rows[i] ^= rows[k];
            }
        }
    }
    true
}

/// Which parity classes of coefficient vectors can give an odd determinant.
pub(crate) struct ParityFilter {
    basis_mod2: Vec<Vec<u128>>,
    table: Option<Vec<bool>>,
}

impl ParityFilter {
    pub(crate) fn new(basis: &[IntMatrix]) -> Self {
        let basis_mod2: Vec<Vec<u128>> = basis
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|i| {
                        (0..m.cols())
                            .filter(|&j| m[(i, j)].bit(0))
                            .fold(0u128, |acc, j| acc | (1 << j))
                    })
                    .collect()
            })
            .collect();
        let k = basis.len();
        let mut f = ParityFilter {
            basis_mod2,
            table: None,
        };
        if k <= 16 {
            f.table = Some((0..1usize << k).map(|mask| f.compute(mask)).collect());
        }
        f
    }

    fn compute(&self, mask: usize) -> bool {
        let n = self.basis_mod2.first().map_or(0, Vec::len);
        let mut rows = vec![0u128; n];
        for (b, m) in self.basis_mod2.iter().enumerate() {
            if mask >> b & 1 == 1 {
                for (r, x) in rows.iter_mut().zip(m) {
                    *r ^= x;
                }
            }
        }
        det_gf2(rows)
    }

    pub(crate) fn allows(&self, coeffs: &[i64]) -> bool {
        let mask = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| *c & 1 == 1)
            .fold(0usize, |acc, (i, _)| acc | (1 << i));
        match &self.table {
            Some(t) => t[mask],
            None => self.compute(mask),
        }
    }
}

/// Flattened `i128` copies of the basis, for fast combination.
pub(crate) fn small_basis(basis: &[IntMatrix]) -> Option<Vec<Vec<i128>>> {
    basis
        .iter()
        .map(|m| m.entries().map(|x| x.to_i128()).collect())
        .collect()
}

pub(crate) fn combine_small(basis: &[Vec<i128>], coeffs: &[i64]) -> Vec<i128> {
    let mut out = vec![0i128; basis[0].len()];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            for (o, x) in out.iter_mut().zip(b) {
                *o += i128::from(c) * x;
            }
        }
    }
    out
}

/// Rewrite `basis` so that its first element is `target`, which must be a
/// primitive member of the span.
fn basis_starting_with(basis: &[IntMatrix], target: &IntMatrix) -> Option<Vec<IntMatrix>> {
    let k = basis.len();
    let cols: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|m| m.entries().cloned().collect())
        .collect();
    let len = cols[0].len();
    let b = IntMatrix::from_columns(&cols, len).to_rational();
    let v = IntMatrix::from_columns(&[target.entries().cloned().collect::<Vec<_>>()], len)
        .to_rational();
    let (r, pivots) = b.hstack(&v).ok()?.rref();
    if pivots.len() != k {
        return None;
    }
    let coords: Vec<BigInt> = (0..k)
        .map(|i| r[(i, k)].clone())
        .map(|q| q.is_integer().then(|| q.to_integer()))
        .collect::<Option<_>>()?;
    let f = snf(&IntMatrix::from_columns(std::slice::from_ref(&coords), k));
    if f.invariants() != vec![BigInt::one()] {
        return None;
    }
    let mut c = f.u.to_rational().inverse().ok()?.to_integer()?;
    if f.v[(0, 0)].is_negative() {
        for i in 0..k {
            c[(i, 0)] = -&c[(i, 0)];
        }
    }
    let out: Vec<IntMatrix> = (0..k)
        .map(|j| {
            let mut m = IntMatrix::zeros(basis[0].rows(), basis[0].cols());
            for (i, bi) in basis.iter().enumerate() {
                m = m.checked_add(&bi.scale(&c[(i, j)])).expect("same shape");
            }
            m
        })
        .collect();
    debug_assert_eq!(&out[0], target);
    Some(out)
}

#[cfg(feature = "parallel")]
pub(crate) fn find_first<F>(cands: &[Vec<i64>], test: F) -> Option<usize>
where
    F: Fn(&[i64]) -> bool + Sync,
{
    use rayon::prelude::*;
    cands.par_iter().position_first(|c| test(c))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first<F>(cands: &[Vec<i64>], test: F) -> Option<usize>
where
    F: Fn(&[i64]) -> bool,
{
    cands.iter().position(|c| test(c))
}

/// Search `Hom(X, Y)` for an isomorphism among combinations of the basis
/// with coefficients bounded by `bound`.
pub fn isom_search(
    x: &PolarisedTorus,
    y: &PolarisedTorus,
    bound: u32,
    polarised: bool,
) -> Result<IsomVerdict> {
    if x.dim() != y.dim() {
        return Err(Error::Precondition(format!(
            "dimensions differ: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    let homs = hom_module(x, y)?;
    if homs.is_empty() {
        return Ok(IsomVerdict::NoHoms);
    }
    let mut basis: Vec<IntMatrix> = homs.into_iter().map(|h| h.rational_rep).collect();
    if x == y {
        if let Some(b) = basis_starting_with(&basis, &IntMatrix::identity(2 * x.dim())) {
            basis = b;
        }
    }
    search_basis(&basis, x.gram(), y.gram(), bound, polarised)
}

fn search_basis(
    basis: &[IntMatrix],
    gram_x: &IntMatrix,
    gram_y: &IntMatrix,
    bound: u32,
    polarised: bool,
) -> Result<IsomVerdict> {
    let k = basis.len();
    let n = basis[0].rows();
    let parity = ParityFilter::new(basis);
    let small = small_basis(basis);
    let accept = |c: &[i64]| -> bool {
        if !parity.allows(c) {
            return false;
        }
        let unit = match &small {
            Some(sb) => is_unit_det(&combine_small(sb, c), n),
            None => combine(basis, c)
                .det()
                .map(|d| d.abs().is_one())
                .unwrap_or(false),
        };
        if !unit {
            return false;
        }
        if polarised {
            let m = combine(basis, c);
            let pulled = m
                .transpose()
                .checked_mul(gram_y)
                .and_then(|t| t.checked_mul(&m))
                .expect("square");
            return &pulled == gram_x;
        }
        true
    };
    let mut tested = 0u64;
    for s in 1..=i64::from(bound) {
        let shell = shell_vectors(k, s);
        if let Some(i) = find_first(&shell, accept) {
            tested += i as u64 + 1;
            let coefficients = shell[i].clone();
            return Ok(IsomVerdict::Found {
                witness: combine(basis, &coefficients),
                coefficients,
                tested,
            });
        }
        tested += shell.len() as u64;
    }
    debug_assert_eq!(
        tested as usize,
        coefficient_vectors(k, i64::from(bound)).count()
    );
    Ok(IsomVerdict::NotFoundUpToBound {
        bound,
        tested,
        hom_rank: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det_i128(vec![2, 0, 1, 1, 3, 2, 1, 1, 2], 3), Some(6));
        assert_eq!(det_i128(vec![0, 1, 1, 0], 2), Some(-1));
        assert!(is_unit_det(&[0, 1, 1, 0], 2));
        assert!(!is_unit_det(&[0, 0, 0, 0], 2));
        assert!(!is_unit_det(&[1, 2, 2, 4], 2));
    }

    #[test]
    fn gf2_determinant() {
        assert!(det_gf2(vec![0b01, 0b10]));
        assert!(!det_gf2(vec![0b11, 0b11]));
        assert!(det_gf2(vec![0b11, 0b01]));
    }

    #[test]
    fn parity_filter_matches_direct_check() {
        let basis = vec![
            IntMatrix::from_i64(&[&[1, 0], &[0, 1]]),
            IntMatrix::from_i64(&[&[1, 1], &[1, 1]]),
        ];
        let f = ParityFilter::new(&basis);
        for c in coefficient_vectors(2, 3) {
            let m = combine(&basis, &c);
            let odd = m.det().unwrap().bit(0);
            assert_eq!(f.allows(&c), odd, "{c:?}");
        }
    }
}
