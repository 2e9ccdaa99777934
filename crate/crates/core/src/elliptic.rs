//! Elliptic-curve periods in imaginary quadratic fields and reduction to the
//! standard fundamental domain of `SL(2, Z)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::bigint_str;

/// `(p + q √Δ) / r` with `Δ < 0` squarefree, `r > 0`, `gcd(p, q, r) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    delta: i64,
}

fn squarefree_part(d: i64) -> (i64, i64) {
    // d = s * k^2 with s squarefree; returns (s, k)
    let mut s = d.abs();
    let mut k = 1i64;
    let mut f = 2i64;
    while f * f <= s {
        while s % (f * f) == 0 {
            s /= f * f;
            k *= f;
        }
        f += 1;
    }
    (s * d.signum(), k)
}

impl QuadNumber {
    /// Normalises signs, common factors and square factors of `Δ`.
    /// Requires `q > 0` after normalisation.
    pub fn new(
        p: impl Into<BigInt>,
        q: impl Into<BigInt>,
        r: impl Into<BigInt>,
        delta: i64,
    ) -> Result<Self> {
        let x = Self::from_parts(p.into(), q.into(), r.into(), delta)?;
        if !x.q.is_positive() {
            return Err(Error::Precondition(format!(
                "{x} is not in the upper half plane"
            )));
        }
        Ok(x)
    }

    fn from_parts(p: BigInt, q: BigInt, r: BigInt, delta: i64) -> Result<Self> {
        if delta >= 0 {
            return Err(Error::Precondition(format!(
                "discriminant must be negative, got {delta}"
            )));
        }
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (s, k) = squarefree_part(delta);
        let mut x = QuadNumber {
            p,
            q: q * k,
            r,
            delta: s,
        };
        x.normalise();
        Ok(x)
    }

    fn normalise(&mut self) {
        if self.r.is_negative() {
            self.p = -&self.p;
            self.q = -&self.q;
            self.r = -&self.r;
        }
        let g = self.p.gcd(&self.q).gcd(&self.r);
        if !g.is_one() {
            self.p /= &g;
            self.q /= &g;
            self.r /= &g;
        }
    }

    /// `√Δ` itself.
    pub fn sqrt(delta: i64) -> Result<Self> {
        Self::new(0, 1, 1, delta)
    }

    fn from_rationals(x: &BigRational, y: &BigRational, delta: i64) -> Self {
        let r = x.denom().lcm(y.denom());
        let p = x.numer() * (&r / x.denom());
        let q = y.numer() * (&r / y.denom());
        let mut out = QuadNumber { p, q, r, delta };
        out.normalise();
        out
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Real part `p / r`.
    pub fn re(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.r.clone())
    }

    /// Coefficient `q / r` of `√Δ`.
    pub fn sqrt_coeff(&self) -> BigRational {
        BigRational::new(self.q.clone(), self.r.clone())
    }

    /// `|τ|² = (p² − q² Δ) / r²`.
    pub fn norm_sq(&self) -> BigRational {
        BigRational::new(
            &self.p * &self.p - &self.q * &self.q * BigInt::from(self.delta),
            &self.r * &self.r,
        )
    }

    /// Floating approximations `(Re, Im)` for display only.
    pub fn approx(&self) -> (f64, f64) {
        let re = self.re().to_f64().unwrap_or(f64::NAN);
        let im = self.sqrt_coeff().to_f64().unwrap_or(f64::NAN) * (-(self.delta as f64)).sqrt();
        (re, im)
    }

    pub fn translate(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        out.p += k * &self.r;
        out
    }

    /// `−1/τ`.
    pub fn invert(&self) -> Self {
        let n = &self.p * &self.p - &self.q * &self.q * BigInt::from(self.delta);
        let mut out = QuadNumber {
            p: -&self.p * &self.r,
            q: &self.q * &self.r,
            r: n,
            delta: self.delta,
        };
        out.normalise();
        out
    }

    /// `τ / n`.
    pub fn div_int(&self, n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = self.clone();
        out.r *= n;
        out.normalise();
        Ok(out)
    }

    /// `(aτ + b) / (cτ + d)`.
    pub fn mobius(&self, m: &Sl2) -> Result<Self> {
        let (x, y) = (self.re(), self.sqrt_coeff());
        let [a, b, c, d] = m.entries().map(|e| BigRational::from_integer(e.clone()));
        let (nx, ny) = (&a * &x + b, &a * &y);
        let (dx, dy) = (&c * &x + d, &c * &y);
        let delta = BigRational::from_integer(self.delta.into());
        let den = &dx * &dx - &dy * &dy * &delta;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (nx + ny√Δ)(dx − dy√Δ) / den
        let re = (&nx * &dx - &ny * &dy * &delta) / &den;
        let im = (&ny * &dx - &nx * &dy) / &den;
        Ok(Self::from_rationals(&re, &im, self.delta))
    }

    /// `−1/2 ≤ Re < 1/2`, `|τ| ≥ 1`, and `Re ≤ 0` when `|τ| = 1`.
    pub fn in_fundamental_domain(&self) -> bool {
        let half = BigRational::new(1.into(), 2.into());
        let re = self.re();
        if re < -half.clone() || re >= half {
            return false;
        }
        let n =
            &self.p * &self.p - &self.q * &self.q * BigInt::from(self.delta) - &self.r * &self.r;
        match n.sign() {
            num_bigint::Sign::Minus => false,
            num_bigint::Sign::NoSign => !re.is_positive(),
            num_bigint::Sign::Plus => true,
        }
    }
}

impl fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = if self.delta == -1 {
            "i".to_string()
        } else {
            format!("sqrt({})", self.delta)
        };
        let imag = if self.q.is_one() {
            root
        } else if (-&self.q).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.q)
        };
        let body = if self.p.is_zero() {
            imag
        } else if self.q.is_negative() {
            format!("{}{imag}", self.p)
        } else {
            format!("{}+{imag}", self.p)
        };
        if self.r.is_one() {
            write!(f, "{body}")
        } else if self.p.is_zero() {
            write!(f, "{body}/{}", self.r)
        } else {
            write!(f, "({body})/{}", self.r)
        }
    }
}

impl fmt::Debug for QuadNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadNumber({self})")
    }
}

impl Serialize for QuadNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parser for `(p+q*sqrt(-D))/r` and the shorthands `i`, `sqrt(-2)/2`,
/// `5+i`, `2*sqrt(-3)`.
impl FromStr for QuadNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuadParser {
            src: s,
            chars: s.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
        .parse()
    }
}

struct QuadParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl QuadParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            column: self.pos + 1,
            message: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let k: Vec<char> = kw.chars().collect();
        if self.chars[self.pos..].starts_with(&k) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    /// `i` or `sqrt(-D)`; returns `Δ`.
    fn root(&mut self) -> Result<Option<i64>> {
        if self.keyword("sqrt(") {
            if !self.eat('-') {
                return Err(self.err("expected sqrt(-D) with D > 0"));
            }
            let d = self.integer()?;
            if d.is_zero() {
                return Err(self.err("expected sqrt(-D) with D > 0"));
            }
            self.expect(')')?;
            let d = d
                .to_i64()
                .ok_or_else(|| self.err("discriminant too large"))?;
            return Ok(Some(-d));
        }
        if self.eat('i') {
            return Ok(Some(-1));
        }
        Ok(None)
    }

    fn term(&mut self, acc: &mut (BigInt, BigInt, Option<i64>), sign: i32) -> Result<()> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.integer()?;
            if self.eat('*') {
                Some(c)
            } else if let Some(d) = self.root()? {
                return self.add_root(acc, sign, c, d);
            } else {
                acc.0 += if sign < 0 { -c } else { c };
                return Ok(());
            }
        } else {
            None
        };
        let d = self
            .root()?
            .ok_or_else(|| self.err("expected i or sqrt(-D)"))?;
        self.add_root(acc, sign, coeff.unwrap_or_else(BigInt::one), d)
    }

    fn add_root(
        &self,
        acc: &mut (BigInt, BigInt, Option<i64>),
        sign: i32,
        c: BigInt,
        d: i64,
    ) -> Result<()> {
        if acc.2.is_some_and(|e| e != d) {
            return Err(self.err("mixed square roots"));
        }
        acc.2 = Some(d);
        acc.1 += if sign < 0 { -c } else { c };
        Ok(())
    }

    fn parse(mut self) -> Result<QuadNumber> {
        let paren = self.eat('(');
        let mut acc = (BigInt::zero(), BigInt::zero(), None);
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            self.term(&mut acc, sign)?;
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        if paren {
            self.expect(')')?;
        }
        let r = if self.eat('/') {
            let neg = self.eat('-');
            let r = self.integer()?;
            if neg {
                -r
            } else {
                r
            }
        } else {
            BigInt::one()
        };
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected trailing input"));
        }
        let delta = acc.2.ok_or_else(|| self.err("no imaginary part"))?;
        QuadNumber::from_parts(acc.0, acc.1, r, delta).and_then(|x| {
            if x.q.is_positive() {
                Ok(x)
            } else {
                Err(self.err("period must lie in the upper half plane"))
            }
        })
    }
}

/// Element `[[a, b], [c, d]]` of `SL(2, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sl2 {
    #[serde(serialize_with = "bigint_str")]
    pub a: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub b: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub c: BigInt,
    #[serde(serialize_with = "bigint_str")]
    pub d: BigInt,
}

impl Sl2 {
    pub fn identity() -> Self {
        Sl2::from_i64(1, 0, 0, 1)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Sl2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> Sl2 {
        Sl2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }
}

/// A single reduction move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    /// `τ ↦ τ + k`.
    T(#[serde(serialize_with = "bigint_str")] BigInt),
    /// `τ ↦ −1/τ`.
    S,
}

impl Move {
    pub fn matrix(&self) -> Sl2 {
        match self {
            Move::T(k) => Sl2 {
                a: BigInt::one(),
                b: k.clone(),
                c: BigInt::zero(),
                d: BigInt::one(),
            },
            Move::S => Sl2::from_i64(0, -1, 1, 0),
        }
    }

    pub fn apply(&self, t: &QuadNumber) -> QuadNumber {
        match self {
            Move::T(k) => t.translate(k),
            Move::S => t.invert(),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::T(k) => write!(f, "T^{k}"),
            Move::S => write!(f, "S"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauClass {
    pub reduced: QuadNumber,
    pub trail: Vec<Move>,
}

impl TauClass {
    /// Composite `g` of the trail, so that `g · input = reduced`.
    pub fn matrix(&self) -> Sl2 {
        self.trail
            .iter()
            .fold(Sl2::identity(), |acc, m| m.matrix().mul(&acc))
    }

    /// Intermediate points, starting at `input` and ending at `reduced`.
    pub fn path(&self, input: &QuadNumber) -> Vec<QuadNumber> {
        let mut out = vec![input.clone()];
        for m in &self.trail {
            let next = m.apply(out.last().expect("nonempty"));
            out.push(next);
        }
        out
    }
}

/// `k` with `−1/2 ≤ x + k < 1/2`.
fn centring_shift(x: &BigRational) -> BigInt {
    let half = BigRational::new(1.into(), 2.into());
    (-half - x).ceil().to_integer()
}

pub fn reduce_tau(t: &QuadNumber) -> TauClass {
    let mut cur = t.clone();
    let mut trail = Vec::new();
    loop {
        let k = centring_shift(&cur.re());
        if !k.is_zero() {
            cur = cur.translate(&k);
            trail.push(Move::T(k));
        }
        let n = cur.norm_sq();
        if n < BigRational::one() || (n.is_one() && cur.re().is_positive()) {
            cur = cur.invert();
            trail.push(Move::S);
            continue;
        }
        break;
    }
    debug_assert!(cur.in_fundamental_domain());
    TauClass {
        reduced: cur,
        trail,
    }
}

/// `E_τ ≅ E_{τ/n}`, decided by comparing reduced periods.
pub fn quotient_isomorphic(t: &QuadNumber, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let tn = t.div_int(&BigInt::from(n))?;
    Ok(reduce_tau(t).reduced == reduce_tau(&tn).reduced)
}

/// The full comparison behind [`quotient_isomorphic`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientComparison {
    pub tau: QuadNumber,
    pub n: u64,
    pub quotient: QuadNumber,
    pub tau_class: TauClass,
    pub quotient_class: TauClass,
    pub isomorphic: bool,
    /// `g` with `g · τ = τ / n` when isomorphic.
    pub witness: Option<Sl2>,
}

pub fn compare_quotient(t: &QuadNumber, n: u64) -> Result<QuotientComparison> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let quotient = t.div_int(&BigInt::from(n))?;
    let tau_class = reduce_tau(t);
    let quotient_class = reduce_tau(&quotient);
    let isomorphic = tau_class.reduced == quotient_class.reduced;
    let witness = isomorphic.then(|| quotient_class.matrix().inverse().mul(&tau_class.matrix()));
    Ok(QuotientComparison {
        tau: t.clone(),
        n,
        quotient,
        tau_class,
        quotient_class,
        isomorphic,
        witness,
    })
}

/// Why `E_τ` and `E_{τ/n}` differ when `τ` is a free generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormalCertificate {
    pub generator: String,
    pub n: u64,
    pub isomorphic: bool,
    pub reasons: Vec<String>,
}

pub fn formal_quotient_isomorphic(generator: &str, n: u64) -> Result<FormalCertificate> {
    if n <= 1 {
        return Err(Error::Precondition(format!(
            "n must exceed 1 (the subgroup is trivial for n = {n})"
        )));
    }
    let t = generator;
    let reasons = vec![
        format!(
            "an isomorphism means (a*{t} + b)/(c*{t} + d) = {t}/{n} for some [a b; c d] in SL(2,Z)"
        ),
        format!(
            "c = 0: then a = d = ±1 and (1 - 1/{n})*{t} = ±b, so {t} would be rational"
        ),
        format!(
            "c != 0: then c*{t}^2 + (d - {n}*a)*{t} - {n}*b = 0, so {t} would be algebraic of degree <= 2"
        ),
        format!("{t} is a free generator, so neither relation holds"),
    ];
    Ok(FormalCertificate {
        generator: generator.to_string(),
        n,
        isomorphic: false,
        reasons,
    })
}
