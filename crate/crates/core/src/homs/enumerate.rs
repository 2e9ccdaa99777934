//! Canonical enumeration order for bounded coefficient searches.
//!
//! Vectors are visited by sup-norm shell `s = 1, 2, ..`; within a shell by
//! support size, then support positions (lexicographic), then values
//! (lexicographic in the digit order `1, -1, 2, -2, ..`). The first hit in
//! this order is the reported witness.

/// Digit order `1, -1, 2, -2, .., s, -s`.
fn digits(s: i64) -> Vec<i64> {
    (1..=s).flat_map(|v| [v, -v]).collect()
}

fn combinations(k: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..t).collect();
    if t > k {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..t).rev().find(|&i| cur[i] < k - t + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..t {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All vectors of length `k` with sup-norm exactly `s`, in canonical order.
pub fn shell_vectors(k: usize, s: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if s == 0 {
        out.push(vec![0; k]);
        return out;
    }
    let ds = digits(s);
    for t in 1..=k {
        for support in combinations(k, t) {
            let mut idx = vec![0usize; t];
            loop {
                if idx.iter().any(|&i| ds[i].abs() == s) {
                    let mut v = vec![0; k];
                    for (p, &i) in support.iter().zip(&idx) {
                        v[*p] = ds[i];
                    }
                    out.push(v);
                }
                let Some(pos) = (0..t).rev().find(|&p| idx[p] + 1 < ds.len()) else {
                    break;
                };
                idx[pos] += 1;
                for q in idx.iter_mut().skip(pos + 1) {
                    *q = 0;
                }
            }
        }
    }
    out
}

/// Nonzero vectors of length `k` with sup-norm at most `bound`, shell by shell.
pub fn coefficient_vectors(k: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |s| shell_vectors(k, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn shells_partition_the_box() {
        for k in 1..=3 {
            for b in 0..=3i64 {
                let all: Vec<Vec<i64>> = coefficient_vectors(k, b).collect();
                let set: BTreeSet<Vec<i64>> = all.iter().cloned().collect();
                assert_eq!(set.len(), all.len());
                let side = (2 * b + 1) as usize;
                assert_eq!(all.len(), side.pow(k as u32) - 1);
            }
        }
    }

    #[test]
    fn order_starts_with_unit_vectors() {
        let v = shell_vectors(3, 1);
        assert_eq!(v[0], vec![1, 0, 0]);
        assert_eq!(v[1], vec![-1, 0, 0]);
        assert_eq!(v[2], vec![0, 1, 0]);
        assert_eq!(v[6], vec![1, 1, 0]);
    }
}
