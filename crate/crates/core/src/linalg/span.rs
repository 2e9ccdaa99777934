//! Comparison of Z-spans of columns of symbolic period matrices.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{hnf, IntMatrix, RatMatrix};
use crate::error::{Error, Result};
use crate::scalars::{monomial_flatten_with, Monomial, ScalarMatrix};

/// Flatten both matrices over a shared monomial support and scale both by
/// the same positive integer so that every coefficient is integral.
fn common_integer_columns(a: &ScalarMatrix, b: &ScalarMatrix) -> Result<(IntMatrix, IntMatrix)> {
    a.generators().check(b.generators())?;
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!(
            "row counts differ: {} vs {}",
            a.rows(),
            b.rows()
        )));
    }
    let support: Vec<Monomial> = a
        .entries()
        .chain(b.entries())
        .flat_map(|s| s.terms().keys().cloned())
        .collect();
    let fa = monomial_flatten_with(a, &support).column_matrix();
    let fb = monomial_flatten_with(b, &support).column_matrix();
    let l = fa.denominator_lcm().lcm(&fb.denominator_lcm());
    let lq = BigRational::from_integer(l);
    let to_int = |m: &RatMatrix| m.scale(&lq).to_integer().expect("cleared");
    Ok((to_int(&fa), to_int(&fb)))
}

fn hnf_basis(m: &IntMatrix) -> (IntMatrix, usize) {
    let (h, _) = hnf(m);
    let rank = (0..h.cols())
        .take_while(|&j| !h.column(j).iter().all(Zero::is_zero))
        .count();
    (h.select_columns(&(0..rank).collect::<Vec<_>>()), rank)
}

fn check_full(rank: usize, rows: usize, which: &str) -> Result<()> {
    if rank != 2 * rows {
        return Err(Error::RankDeficient(format!(
            "{which} spans a lattice of rank {rank}, expected {}",
            2 * rows
        )));
    }
    Ok(())
}

/// Rank of the Z-span of the columns (after flattening by monomial).
pub fn lattice_rank(a: &ScalarMatrix) -> usize {
    crate::scalars::monomial_flatten(a).column_matrix().rank()
}

/// `true` iff the columns of `a` and `b` span the same lattice.
pub fn span_equal(a: &ScalarMatrix, b: &ScalarMatrix) -> Result<bool> {
    let (ia, ib) = common_integer_columns(a, b)?;
    let (ha, ra) = hnf_basis(&ia);
    let (hb, rb) = hnf_basis(&ib);
    check_full(ra, a.rows(), "first matrix")?;
    check_full(rb, b.rows(), "second matrix")?;
    Ok(ha == hb)
}

/// `true` iff span(b) ⊆ span(a).
pub fn span_contains(a: &ScalarMatrix, b: &ScalarMatrix) -> Result<bool> {
    let (ia, ib) = common_integer_columns(a, b)?;
    let (ha, ra) = hnf_basis(&ia);
    let (_, rb) = hnf_basis(&ib);
    check_full(ra, a.rows(), "first matrix")?;
    check_full(rb, b.rows(), "second matrix")?;
    let (hab, _) = hnf_basis(&ia.hstack(&ib)?);
    Ok(hab == ha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_scalar;
    use crate::scalars::GeneratorSet;

    fn mat(g: &GeneratorSet, rows: &[&[&str]]) -> ScalarMatrix {
        ScalarMatrix::from_rows(
            g,
            rows.iter()
                .map(|r| r.iter().map(|e| parse_scalar(e, g).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn permuted_and_negated_columns() {
        let g = GeneratorSet::new(["a", "b", "c"]).unwrap();
        let ls = mat(&g, &[&["a", "b", "1", "0"], &["b", "c", "0", "3"]]);
        let perm = mat(&g, &[&["-1", "b", "a", "0"], &["0", "c", "b", "-3"]]);
        assert!(span_equal(&ls, &perm).unwrap());
        let doubled = mat(&g, &[&["2*a", "2*b", "2", "0"], &["2*b", "2*c", "0", "6"]]);
        assert!(!span_equal(&ls, &doubled).unwrap());
        assert!(span_contains(&ls, &doubled).unwrap());
        assert!(!span_contains(&doubled, &ls).unwrap());
    }

    #[test]
    fn rational_entries_use_a_common_scale() {
        let g = GeneratorSet::new(["a"]).unwrap();
        let x = mat(&g, &[&["a/3", "1/3"]]);
        let y = mat(&g, &[&["a/3 + 1/3", "1/3"]]);
        assert!(span_equal(&x, &y).unwrap());
        let z = mat(&g, &[&["a", "1"]]);
        assert!(!span_equal(&x, &z).unwrap());
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let g = GeneratorSet::new(["a"]).unwrap();
        let x = mat(&g, &[&["a", "2*a"]]);
        let y = mat(&g, &[&["a", "1"]]);
        assert!(matches!(span_equal(&x, &y), Err(Error::RankDeficient(_))));
    }
}
