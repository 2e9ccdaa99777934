use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{floor_div, IntMatrix, RatMatrix};

/// Column-style Hermite normal form: returns `(H, U)` with `H = M * U`,
/// `U` unimodular, and `H` lower echelon with positive pivots, entries left
/// of each pivot reduced into `[0, pivot)`, and zero columns last.
///
/// `H` depends only on the lattice spanned by the columns of `M`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let cols = m.cols();
    let mut pc = 0;
    for row in 0..m.rows() {
        if pc == cols {
            break;
        }
        loop {
            // smallest nonzero entry at or right of the pivot column
            let Some(j) = (pc..cols)
                .filter(|&j| !h[(row, j)].is_zero())
                .min_by(|&a, &b| h[(row, a)].abs().cmp(&h[(row, b)].abs()))
            else {
                break;
            };
            h.swap_cols(j, pc);
            u.swap_cols(j, pc);
            let mut done = true;
            for k in pc + 1..cols {
                if h[(row, k)].is_zero() {
                    continue;
                }
                let q = -floor_div(&h[(row, k)], &h[(row, pc)]);
                h.add_col_multiple(k, pc, &q);
                u.add_col_multiple(k, pc, &q);
                if !h[(row, k)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(row, pc)].is_zero() {
            continue;
        }
        if h[(row, pc)].is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        let p = h[(row, pc)].clone();
        for k in 0..pc {
            let q = -floor_div(&h[(row, k)], &p);
            h.add_col_multiple(k, pc, &q);
            u.add_col_multiple(k, pc, &q);
        }
        pc += 1;
    }
    (h, u)
}

/// Smith normal form `S = U * M * V` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariants(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k)
            .map(|i| self.s[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Snf { s, u, v };
            };
            s.swap_rows(pi, t);
            u.swap_rows(pi, t);
            s.swap_cols(pj, t);
            v.swap_cols(pj, t);
            let mut clean = true;
            for i in t + 1..rows {
                if !s[(i, t)].is_zero() {
                    let q = -floor_div(&s[(i, t)], &s[(t, t)]);
                    s.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !s[(t, j)].is_zero() {
                    let q = -floor_div(&s[(t, j)], &s[(t, t)]);
                    s.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let p = s[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&s[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { s, u, v }
}

/// Saturated basis (as columns) of `{x in Z^cols : M x = 0}`, in column
/// Hermite normal form.
pub fn int_kernel(m: &IntMatrix) -> IntMatrix {
    let f = snf(m);
    let r = f.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    let basis = f.v.select_columns(&idx);
    let (h, _) = hnf(&basis);
    h.select_columns(&(0..idx.len()).collect::<Vec<_>>())
}

/// Integer kernel of a rational system. Rows are first reduced over `Q`,
/// which leaves the solution set unchanged and keeps the integer step small.
pub fn int_kernel_rational(m: &RatMatrix) -> IntMatrix {
    let (r, pivots) = m.rref();
    let rows: Vec<Vec<BigInt>> = (0..pivots.len())
        .map(|i| {
            let row = RatMatrix::from_rows(vec![r.row(i).to_vec()]).unwrap();
            row.clear_denominators().0.row(0).to_vec()
        })
        .collect();
    if rows.is_empty() {
        return IntMatrix::identity(m.cols());
    }
    int_kernel(&IntMatrix::from_rows(rows).unwrap())
}

/// Basis (as columns, in Hermite normal form) of the saturation
/// `(span_Q M) ∩ Z^rows` of the column lattice of `M`.
pub fn saturate(m: &IntMatrix) -> IntMatrix {
    let f = snf(m);
    let r = f.rank();
    let uinv =
        f.u.to_rational()
            .inverse()
            .expect("unimodular")
            .to_integer()
            .expect("unimodular inverse is integral");
    let basis = uinv.select_columns(&(0..r).collect::<Vec<_>>());
    let (h, _) = hnf(&basis);
    h.select_columns(&(0..r).collect::<Vec<_>>())
}
