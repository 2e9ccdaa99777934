//! Exact polynomial arithmetic over the rationals in a finite set of formally
//! independent generators.
//!
//! Period entries such as `a`, `tau_E` or `c/3` are modelled as elements of
//! `Q[x_1, ..., x_k]` with no relations among the generators. Equality is
//! structural: terms are kept in a canonical map with no zero coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

/// Ordered, duplicate-free list of generator names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet(Arc<[String]>);

impl GeneratorSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            let valid = n
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Generators(format!("invalid generator name {n:?}")));
            }
            if n == "sqrt" {
                return Err(Error::Generators("`sqrt` is reserved".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Generators(format!("duplicate generator {n:?}")));
            }
        }
        Ok(GeneratorSet(names.into()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub(crate) fn check(&self, other: &GeneratorSet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GeneratorMismatch {
                left: self.0.to_vec(),
                right: other.0.to_vec(),
            })
        }
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector over a [`GeneratorSet`], ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into())
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e.into())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn display(&self, gens: &GeneratorSet) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (name, &e) in gens.names().iter().zip(self.0.iter()) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients in formally independent generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalScalar {
    gens: GeneratorSet,
    terms: BTreeMap<Monomial, BigRational>,
}

impl FormalScalar {
    pub fn zero(gens: &GeneratorSet) -> Self {
        FormalScalar {
            gens: gens.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(gens: &GeneratorSet) -> Self {
        Self::constant(gens, BigRational::one())
    }

    pub fn constant(gens: &GeneratorSet, c: BigRational) -> Self {
        Self::monomial(gens, Monomial::one(gens.len()), c)
    }

    pub fn integer(gens: &GeneratorSet, c: i64) -> Self {
        Self::constant(gens, BigRational::from_integer(c.into()))
    }

    pub fn monomial(gens: &GeneratorSet, m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        FormalScalar {
            gens: gens.clone(),
            terms,
        }
    }

    /// The generator `name` as a scalar.
    pub fn generator(gens: &GeneratorSet, name: &str) -> Result<Self> {
        let i = gens
            .index_of(name)
            .ok_or_else(|| Error::Generators(format!("unknown generator {name:?}")))?;
        Ok(Self::monomial(
            gens,
            Monomial::var(gens.len(), i),
            BigRational::one(),
        ))
    }

    pub fn from_terms(
        gens: &GeneratorSet,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut s = Self::zero(gens);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the scalar has no generator dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.gens.check(&other.gens)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.gens.check(&other.gens)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.gens.check(&other.gens)?;
        let mut out = Self::zero(&self.gens);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.gens);
        }
        FormalScalar {
            gens: self.gens.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.gens);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Coefficient of `x_var^k`, as a polynomial free of `x_var`.
    fn coeff_in(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(&self.gens);
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut e = m.0.to_vec();
                e[var] = 0;
                out.add_term(Monomial(e.into()), c.clone());
            }
        }
        out
    }

    fn mul_monomial(&self, m: &Monomial) -> Self {
        FormalScalar {
            gens: self.gens.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.mul(m), c.clone()))
                .collect(),
        }
    }

    fn first_variable(&self) -> Option<usize> {
        (0..self.gens.len()).find(|&v| self.terms.keys().any(|m| m.0[v] > 0))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact multivariate division; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.gens);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            let t = Self::monomial(&self.gens, qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Greatest common divisor, normalised to leading coefficient 1.
    /// Zero only when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        self.gens.check(&other.gens).expect("generator sets differ");
        poly_gcd(self, other)
    }

    pub fn display(&self) -> String {
        self.to_string()
    }

    /// Evaluate with rational values for the generators (test helper).
    pub fn evaluate(&self, values: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in values.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }
}

fn content_in(f: &FormalScalar, var: usize) -> FormalScalar {
    let d = f.degree_in(var).unwrap_or(0);
    let mut g = FormalScalar::zero(&f.gens);
    for k in 0..=d {
        let c = f.coeff_in(var, k);
        if !c.is_zero() {
            g = poly_gcd(&g, &c);
            if g.as_constant().is_some() {
                break;
            }
        }
    }
    g
}

fn prim_part(f: &FormalScalar, var: usize) -> FormalScalar {
    let c = content_in(f, var);
    f.div_exact(&c).expect("content divides").monic()
}

fn pseudo_rem(a: &FormalScalar, b: &FormalScalar, var: usize) -> FormalScalar {
    let db = b.degree_in(var).unwrap_or(0);
    let lb = b.coeff_in(var, db);
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var) {
        if dr < db || r.is_zero() {
            break;
        }
        let lr = r.coeff_in(var, dr);
        let mut e = vec![0; a.gens.len()];
        e[var] = dr - db;
        let shift = Monomial(e.into());
        r = &(&lb * &r) - &(&lr * &b.mul_monomial(&shift));
    }
    r
}

fn poly_gcd(f: &FormalScalar, g: &FormalScalar) -> FormalScalar {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let var = match (f.first_variable(), g.first_variable()) {
        (None, _) | (_, None) => return FormalScalar::one(&f.gens),
        (Some(a), Some(b)) => a.min(b),
    };
    let df = f.degree_in(var).unwrap_or(0);
    let dg = g.degree_in(var).unwrap_or(0);
    if df == 0 {
        return poly_gcd(f, &content_in(g, var));
    }
    if dg == 0 {
        return poly_gcd(&content_in(f, var), g);
    }
    let cont = poly_gcd(&content_in(f, var), &content_in(g, var));
    let (mut a, mut b) = (prim_part(f, var), prim_part(g, var));
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break;
        }
        if r.degree_in(var) == Some(0) {
            // b and r coprime in var: the primitive gcd is 1
            b = FormalScalar::one(&f.gens);
            break;
        }
        a = b;
        b = prim_part(&r, var);
    }
    (&cont * &prim_part(&b, var)).monic()
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&FormalScalar> for &FormalScalar {
            type Output = FormalScalar;
            /// Panics if the generator sets differ.
            fn $method(self, rhs: &FormalScalar) -> FormalScalar {
                self.$checked(rhs).expect("generator sets differ")
            }
        }
    };
}
scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &FormalScalar {
    type Output = FormalScalar;
    fn neg(self) -> FormalScalar {
        self.scale(&-BigRational::one())
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for FormalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest monomial first
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", m.display(&self.gens))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), m.display(&self.gens))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FormalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalScalar({self})")
    }
}

/// Element of the fraction field, reduced by polynomial gcd with a monic
/// denominator.
#[derive(Clone, Debug)]
pub struct ScalarFraction {
    num: FormalScalar,
    den: FormalScalar,
}

impl ScalarFraction {
    pub fn new(num: FormalScalar, den: FormalScalar) -> Result<Self> {
        num.gens.check(&den.gens)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: FormalScalar, den: FormalScalar) -> Self {
        if num.is_zero() {
            let one = FormalScalar::one(&den.gens);
            return ScalarFraction { num, den: one };
        }
        let g = poly_gcd(&num, &den);
        let mut n = num.div_exact(&g).expect("gcd divides numerator");
        let mut d = den.div_exact(&g).expect("gcd divides denominator");
        let lc = d.leading_term().unwrap().1.clone();
        n = n.scale(&lc.recip());
        d = d.scale(&lc.recip());
        ScalarFraction { num: n, den: d }
    }

    pub fn from_scalar(s: FormalScalar) -> Self {
        let one = FormalScalar::one(&s.gens);
        ScalarFraction { num: s, den: one }
    }

    pub fn numerator(&self) -> &FormalScalar {
        &self.num
    }

    pub fn denominator(&self) -> &FormalScalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some` when the denominator is a constant.
    pub fn as_scalar(&self) -> Option<FormalScalar> {
        let d = self.den.as_constant()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        let n = self
            .num
            .checked_mul(&o.den)?
            .checked_add(&o.num.checked_mul(&self.den)?)?;
        Ok(Self::reduced(n, &self.den * &o.den))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        let n = self
            .num
            .checked_mul(&o.den)?
            .checked_sub(&o.num.checked_mul(&self.den)?)?;
        Ok(Self::reduced(n, &self.den * &o.den))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        let n = self.num.checked_mul(&o.num)?;
        Ok(Self::reduced(n, &self.den * &o.den))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.num.checked_mul(&o.den)?;
        Ok(Self::reduced(n, &self.den * &o.num))
    }
}

impl PartialEq for ScalarFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for ScalarFraction {}

impl fmt::Display for ScalarFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Dense matrix of [`FormalScalar`]s sharing one generator set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarMatrix {
    gens: GeneratorSet,
    rows: usize,
    cols: usize,
    data: Vec<FormalScalar>,
}

impl ScalarMatrix {
    pub fn zeros(gens: &GeneratorSet, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            gens: gens.clone(),
            rows,
            cols,
            data: vec![FormalScalar::zero(gens); rows * cols],
        }
    }

    pub fn from_rows(gens: &GeneratorSet, rows: Vec<Vec<FormalScalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::Shape("ragged scalar matrix".into()));
            }
            for s in r {
                gens.check(&s.gens)?;
                data.push(s);
            }
        }
        Ok(ScalarMatrix {
            gens: gens.clone(),
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_rational(gens: &GeneratorSet, m: &RatMatrix) -> Self {
        let mut out = Self::zeros(gens, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, FormalScalar::constant(gens, m[(i, j)].clone()));
            }
        }
        out
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FormalScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FormalScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FormalScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &FormalScalar> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FormalScalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.gens, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(&self.gens, self.rows, range.len());
        for i in 0..self.rows {
            for (k, j) in range.clone().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(&self.gens, idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(k, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(&self.gens, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.gens.check(&other.gens)?;
        if self.rows != other.rows {
            return Err(Error::Shape("hstack row mismatch".into()));
        }
        let mut out = Self::zeros(&self.gens, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.gens.check(&other.gens)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.gens, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = FormalScalar::zero(&self.gens);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.gens.check(&other.gens)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("subtraction shape mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ScalarMatrix {
            gens: self.gens.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `self * m` for a rational matrix `m`.
    pub fn mul_rational(&self, m: &RatMatrix) -> Result<Self> {
        if self.cols != m.rows() {
            return Err(Error::Shape("scalar * rational shape mismatch".into()));
        }
        let mut out = Self::zeros(&self.gens, self.rows, m.cols());
        for i in 0..self.rows {
            for j in 0..m.cols() {
                let mut acc = FormalScalar::zero(&self.gens);
                for k in 0..self.cols {
                    let c = &m[(k, j)];
                    if !c.is_zero() {
                        acc = &acc + &self.get(i, k).scale(c);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `m * self` for a rational matrix `m`.
    pub fn left_mul_rational(&self, m: &RatMatrix) -> Result<Self> {
        if m.cols() != self.rows {
            return Err(Error::Shape("rational * scalar shape mismatch".into()));
        }
        let mut out = Self::zeros(&self.gens, m.rows(), self.cols);
        for i in 0..m.rows() {
            for j in 0..self.cols {
                let mut acc = FormalScalar::zero(&self.gens);
                for k in 0..self.rows {
                    let c = &m[(i, k)];
                    if !c.is_zero() {
                        acc = &acc + &self.get(k, j).scale(c);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `Some` when every entry is a constant.
    pub fn as_rational(&self) -> Option<RatMatrix> {
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).as_constant()?;
            }
        }
        Some(out)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_strings();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Result of [`monomial_flatten`]: the monomials occurring in a matrix and
/// the coefficient vector of every entry (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct Flattened {
    pub gens: GeneratorSet,
    pub rows: usize,
    pub cols: usize,
    pub monomials: Vec<Monomial>,
    pub coefficients: Vec<Vec<BigRational>>,
}

impl Flattened {
    pub fn coefficient(&self, i: usize, j: usize) -> &[BigRational] {
        &self.coefficients[i * self.cols + j]
    }

    pub fn unflatten(&self) -> ScalarMatrix {
        let mut out = ScalarMatrix::zeros(&self.gens, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let terms = self
                    .monomials
                    .iter()
                    .cloned()
                    .zip(self.coefficient(i, j).iter().cloned());
                out.set(i, j, FormalScalar::from_terms(&self.gens, terms));
            }
        }
        out
    }

    /// Rational matrix with one row per (matrix row, monomial) pair and one
    /// column per matrix column: the columns of the original matrix written
    /// in `Q^(rows * monomials)`.
    pub fn column_matrix(&self) -> RatMatrix {
        let nm = self.monomials.len();
        let mut out = RatMatrix::zeros(self.rows * nm, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (k, c) in self.coefficient(i, j).iter().enumerate() {
                    out[(i * nm + k, j)] = c.clone();
                }
            }
        }
        out
    }
}

/// Split a scalar matrix into its monomial support and rational coefficients.
pub fn monomial_flatten(m: &ScalarMatrix) -> Flattened {
    monomial_flatten_with(m, &[])
}

/// Like [`monomial_flatten`], with extra monomials forced into the support.
pub fn monomial_flatten_with(m: &ScalarMatrix, extra: &[Monomial]) -> Flattened {
    let mut set: std::collections::BTreeSet<Monomial> = extra.iter().cloned().collect();
    for s in m.entries() {
        set.extend(s.terms.keys().cloned());
    }
    let monomials: Vec<Monomial> = set.into_iter().collect();
    let coefficients = m
        .entries()
        .map(|s| {
            monomials
                .iter()
                .map(|mono| s.terms.get(mono).cloned().unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect();
    Flattened {
        gens: m.gens.clone(),
        rows: m.rows,
        cols: m.cols,
        monomials,
        coefficients,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_scalar;

    fn gens() -> GeneratorSet {
        GeneratorSet::new(["a", "b", "c"]).unwrap()
    }

    fn s(e: &str) -> FormalScalar {
        parse_scalar(e, &gens()).unwrap()
    }

    #[test]
    fn additive_inverse() {
        assert!((&s("a") + &s("-a")).is_zero());
    }

    #[test]
    fn free_product() {
        let ab = &s("a") * &s("b");
        assert_eq!(ab.terms().len(), 1);
        let (m, c) = ab.leading_term().unwrap();
        assert_eq!(m.exponents(), &[1, 1, 0]);
        assert!(c.is_one());
    }

    #[test]
    fn distributivity_example() {
        assert_eq!(&s("3*a + b") * &s("b"), s("3*a*b + b*b"));
    }

    #[test]
    fn generator_mismatch_is_an_error() {
        let other = GeneratorSet::new(["a", "b"]).unwrap();
        let x = FormalScalar::generator(&other, "a").unwrap();
        assert!(matches!(
            s("a").checked_add(&x),
            Err(Error::GeneratorMismatch { .. })
        ));
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exponents(vec![1, 0, 0]);
        let b = Monomial::from_exponents(vec![0, 1, 0]);
        let bb = Monomial::from_exponents(vec![0, 2, 0]);
        assert!(a > b);
        assert!(bb > a);
        assert!(Monomial::one(3) < b);
    }

    #[test]
    fn flatten_read_off() {
        let g = GeneratorSet::new(["a", "b"]).unwrap();
        let m = ScalarMatrix::from_rows(
            &g,
            vec![vec![
                parse_scalar("a", &g).unwrap(),
                parse_scalar("1/3*b", &g).unwrap(),
            ]],
        )
        .unwrap();
        let f = monomial_flatten(&m);
        // grlex ascending: b < a
        let names: Vec<String> = f.monomials.iter().map(|m| m.display(&g)).collect();
        assert_eq!(names, ["b", "a"]);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(f.coefficient(0, 0), &[q(0, 1), q(1, 1)]);
        assert_eq!(f.coefficient(0, 1), &[q(1, 3), q(0, 1)]);
        assert_eq!(f.unflatten(), m);
    }

    #[test]
    fn flatten_zero_matrix() {
        let m = ScalarMatrix::zeros(&gens(), 2, 3);
        let f = monomial_flatten(&m);
        assert!(f.monomials.is_empty());
        assert_eq!(f.unflatten(), m);
    }

    #[test]
    fn gcd_of_products() {
        let f = &s("a + b") * &s("a - c");
        let g = &s("a + b") * &s("b*c + 2");
        assert_eq!(f.gcd(&g), s("a + b"));
        assert_eq!(s("a*a - b*b").gcd(&s("a*a + 2*a*b + b*b")), s("a + b"));
        assert_eq!(s("2*a").gcd(&s("3*b")), s("1"));
        assert_eq!(s("a*b*c").gcd(&s("a*c*c")), s("a*c"));
    }

    #[test]
    fn fraction_reduces() {
        let num = &s("a + b") * &s("c");
        let den = &s("2*a + 2*b") * &s("a");
        let q = ScalarFraction::new(num, den).unwrap();
        assert_eq!(q.numerator(), &s("1/2*c"));
        assert_eq!(q.denominator(), &s("a"));
    }

    #[test]
    fn fraction_arithmetic() {
        let x = ScalarFraction::new(s("1"), s("a")).unwrap();
        let y = ScalarFraction::new(s("1"), s("b")).unwrap();
        let sum = x.checked_add(&y).unwrap();
        assert_eq!(sum, ScalarFraction::new(s("a + b"), s("a*b")).unwrap());
        let back = sum.checked_sub(&y).unwrap();
        assert_eq!(back, x);
        assert!(ScalarFraction::new(s("1"), s("0")).is_err());
    }
}
