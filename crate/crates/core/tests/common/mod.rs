//! Strategies and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use avtk::elliptic::{reduce_tau, QuadNumber, Sl2};
use avtk::linalg::IntMatrix;
use avtk::scalars::{FormalScalar, GeneratorSet, Monomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn gens() -> GeneratorSet {
    GeneratorSet::new(["a", "b", "c"]).unwrap()
}

pub fn int_matrix(rows: usize, cols: usize, r: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-r..=r, rows * cols).prop_map(move |v| {
        IntMatrix::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, r: i64) -> IntMatrix {
    let v = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-r..=r)))
        .collect();
    IntMatrix::from_vec(rows, cols, v).unwrap()
}

/// `Xᵀ J X` for random `X`, nondegenerate.
pub fn random_alternating<R: Rng>(rng: &mut R, n: usize, r: i64) -> IntMatrix {
    loop {
        let mut e = IntMatrix::zeros(2 * n, 2 * n);
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let v = BigInt::from(rng.gen_range(-r..=r));
                e[(j, i)] = -&v;
                e[(i, j)] = v;
            }
        }
        if !leibniz_det(&e).is_zero() {
            return e;
        }
    }
}

/// Random unimodular matrix as a product of elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            for k in 0..n {
                u[(k, i)] = -&u[(k, i)];
            }
            continue;
        }
        let c = BigInt::from(rng.gen_range(-2..=2));
        for k in 0..n {
            let add = &c * &u[(k, j)];
            u[(k, i)] += add;
        }
    }
    u
}

/// Determinant by permutation expansion.
pub fn leibniz_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigInt::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        let mut prod = BigInt::from(if inv % 2 == 0 { 1 } else { -1 });
        for (i, &j) in p.iter().enumerate() {
            prod *= &m[(i, j)];
        }
        total += prod;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Elementary divisors from determinantal divisors: `s_k = D_k / D_(k-1)`,
/// `D_k` the gcd of all `k x k` minors.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let mut sub = IntMatrix::zeros(k, k);
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        sub[(a, b)] = m[(i, j)].clone();
                    }
                }
                g = g.gcd(&leibniz_det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

/// Polynomials of degree at most 2 in `a, b, c`.
pub fn scalar() -> impl Strategy<Value = FormalScalar> {
    let exps = prop::collection::vec(0u32..=1, 3);
    prop::collection::vec((exps, small_rational()), 0..4).prop_map(|terms| {
        let g = gens();
        let mut s = FormalScalar::zero(&g);
        for (e, c) in terms {
            let m = FormalScalar::monomial(&g, Monomial::from_exponents(e), c);
            s = s.checked_add(&m).unwrap();
        }
        s
    })
}

/// Every `g` in `SL(2, Z)` with entries bounded by `r`.
pub fn sl2_box(r: i64) -> Vec<Sl2> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    if a * d - b * c == 1 {
                        out.push(Sl2::from_i64(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

/// Random point of the upper half plane in `Q(√Δ)` with small `Δ`.
pub fn random_quad<R: Rng>(rng: &mut R) -> QuadNumber {
    let deltas = [-1, -2, -3, -5, -6, -7, -11];
    let d = deltas[rng.gen_range(0..deltas.len())];
    QuadNumber::new(
        rng.gen_range(-12..=12),
        rng.gen_range(1..=4),
        rng.gen_range(1..=9),
        d,
    )
    .unwrap()
}

/// `true` iff some `g` with entries `<= r` maps `s` to `t`.
pub fn orbit_contains(s: &QuadNumber, t: &QuadNumber, box_: &[Sl2]) -> bool {
    s.delta() == t.delta() && box_.iter().any(|g| s.mobius(g).as_ref() == Ok(t))
}

/// `-1/2 <= Re < 1/2` and `|τ| > 1`, or `|τ| = 1` with `Re <= 0`.
pub fn in_domain(t: &QuadNumber) -> bool {
    let half = BigRational::new(1.into(), 2.into());
    let re = t.re();
    let n = t.norm_sq();
    re >= -half.clone()
        && re < half
        && (n > BigRational::one() || (n.is_one() && re <= BigRational::from_integer(0.into())))
}

pub fn random_sl2(rng: &mut StdRng, box_: &[Sl2]) -> Sl2 {
    box_[rng.gen_range(0..box_.len())].clone()
}

/// Orbit cross-check against every matrix with entries at most 6.
pub fn orbit_oracle(cases: usize, seed: u64) -> Result<(), String> {
    let small = sl2_box(3);
    let big = sl2_box(6);
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..cases {
        let t0 = reduce_tau(&random_quad(&mut rng)).reduced;
        let t = t0
            .mobius(&random_sl2(&mut rng, &small))
            .map_err(|e| e.to_string())?;
        let reduced = reduce_tau(&t).reduced;
        let hits: Vec<QuadNumber> = big
            .iter()
            .filter_map(|g| t.mobius(g).ok())
            .filter(in_domain)
            .collect();
        if hits.is_empty() || hits.iter().any(|h| *h != reduced) {
            return Err(format!(
                "{t}: reduced {reduced}, orbit representatives {hits:?}"
            ));
        }
    }
    Ok(())
}
