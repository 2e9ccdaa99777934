use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{floor_div, IntMatrix};
use crate::error::{Error, Result};

/// Working state for the reduction: the current basis `u` (columns) and the
/// Gram matrix `g = uᵀ E u`, updated together.
struct Frame {
    g: IntMatrix,
    u: IntMatrix,
}

impl Frame {
    /// `b_target += q * b_source`
    fn add(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        self.u.add_col_multiple(target, source, q);
        self.g.add_col_multiple(target, source, q);
        self.g.add_row_multiple(target, source, q);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.u.swap_cols(a, b);
        self.g.swap_cols(a, b);
        self.g.swap_rows(a, b);
    }

    fn negate(&mut self, a: usize) {
        self.u.negate_col(a);
        self.g.negate_col(a);
        self.g.negate_row(a);
    }
}

/// Symplectic (Frobenius) basis of a nondegenerate alternating form.
///
/// Returns `(U, D)` with `Uᵀ E U = [[0, D], [-D, 0]]`, `U` unimodular and
/// `D = diag(d_1, .., d_n)` positive with `d_i | d_{i+1}`.
pub fn symplectic_basis(e: &IntMatrix) -> Result<(IntMatrix, Vec<BigInt>)> {
    if !e.is_alternating() {
        return Err(Error::NotAlternating);
    }
    let dim = e.rows();
    if !dim.is_multiple_of(2) {
        return Err(Error::Degenerate(format!("odd dimension {dim}")));
    }
    let n = dim / 2;
    let mut fr = Frame {
        g: e.clone(),
        u: IntMatrix::identity(dim),
    };
    let mut ds = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (2 * k, 2 * k + 1);
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in a..dim {
                for j in i + 1..dim {
                    let x = &fr.g[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < fr.g[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else {
                return Err(Error::Degenerate("alternating form is singular".into()));
            };
            // j > i >= a, so the first swap leaves j in place
            fr.swap(a, i);
            fr.swap(b, j);
            if fr.g[(a, b)].is_negative() {
                fr.negate(b);
            }
            let d = fr.g[(a, b)].clone();
            let mut clean = true;
            for l in b + 1..dim {
                // E(e, l - q f) = E(e, l) - q d
                let q = floor_div(&fr.g[(a, l)], &d);
                fr.add(l, b, &-q);
                // E(f, l + q e) = E(f, l) - q d
                let q = floor_div(&fr.g[(b, l)], &d);
                fr.add(l, a, &q);
                clean &= fr.g[(a, l)].is_zero() && fr.g[(b, l)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (b + 1..dim).find_map(|l| {
                (l + 1..dim)
                    .find(|&m| !(&fr.g[(l, m)] % &d).is_zero())
                    .map(|_| l)
            });
            match bad {
                // e + l pairs with some m to a value not divisible by d
                Some(l) => fr.add(a, l, &BigInt::from(1)),
                None => {
                    ds.push(d);
                    break;
                }
            }
        }
    }
    let order: Vec<usize> = (0..n)
        .map(|k| 2 * k)
        .chain((0..n).map(|k| 2 * k + 1))
        .collect();
    Ok((fr.u.select_columns(&order), ds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard(d: &[i64]) -> IntMatrix {
        let n = d.len();
        let mut m = IntMatrix::zeros(2 * n, 2 * n);
        for (i, &x) in d.iter().enumerate() {
            m[(i, n + i)] = x.into();
            m[(n + i, i)] = (-x).into();
        }
        m
    }

    fn check(e: &IntMatrix, expect: &[i64]) {
        let (u, d) = symplectic_basis(e).unwrap();
        assert!(u.is_unimodular());
        let got: Vec<i64> = d.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(got, expect);
        let t = u
            .transpose()
            .checked_mul(e)
            .unwrap()
            .checked_mul(&u)
            .unwrap();
        assert_eq!(t, standard(expect));
    }

    #[test]
    fn already_standard() {
        check(&standard(&[1, 3]), &[1, 3]);
    }

    #[test]
    fn one_dimensional() {
        check(&IntMatrix::from_i64(&[&[0, 2], &[-2, 0]]), &[2]);
    }

    #[test]
    fn product_type() {
        // (3) x (3) in the product frame
        check(&standard(&[3, 3]), &[3, 3]);
        check(&standard(&[3, 1]), &[1, 3]);
        check(&standard(&[2, 3]), &[1, 6]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(symplectic_basis(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).is_err());
        assert!(symplectic_basis(&IntMatrix::zeros(2, 2)).is_err());
        assert!(symplectic_basis(&IntMatrix::zeros(3, 3)).is_err());
    }
}
