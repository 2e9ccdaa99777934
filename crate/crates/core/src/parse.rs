//! Scalar expression syntax: integer literals, generator names, `+ - * /`,
//! `^` with a non-negative integer exponent, and parentheses. Division is
//! only allowed by constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{FormalScalar, GeneratorSet};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

pub(crate) fn tokenize(input: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start + 1, Tok::Int(s.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start + 1, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i + 1, Tok::Op(c)));
            i += 1;
        } else {
            return Err(parse_err(
                input,
                i + 1,
                format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(out)
}

pub(crate) fn parse_err(input: &str, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        column,
        message: message.into(),
    }
}

/// Operations a value type needs for the shared recursive-descent parser.
pub(crate) trait ExprValue: Sized + Clone {
    fn integer(&self, n: BigInt) -> Self;
    fn ident(&self, name: &str, args: Option<Self>) -> std::result::Result<Self, String>;
    fn add(&self, o: &Self) -> std::result::Result<Self, String>;
    fn sub(&self, o: &Self) -> std::result::Result<Self, String>;
    fn mul(&self, o: &Self) -> std::result::Result<Self, String>;
    fn div(&self, o: &Self) -> std::result::Result<Self, String>;
    fn neg(&self) -> Self;
    fn wants_call(&self, name: &str) -> bool;
}

pub(crate) struct Parser<'a, V> {
    input: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    proto: V,
}

impl<'a, V: ExprValue> Parser<'a, V> {
    pub(crate) fn new(input: &'a str, proto: V) -> Result<Self> {
        Ok(Parser {
            input,
            toks: tokenize(input)?,
            pos: 0,
            proto,
        })
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.input.chars().count() + 1, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.input, self.col(), msg)
    }

    fn lift(&self, col: usize, r: std::result::Result<V, String>) -> Result<V> {
        r.map_err(|m| parse_err(self.input, col, m))
    }

    pub(crate) fn parse_all(mut self) -> Result<V> {
        if self.toks.is_empty() {
            return Err(self.err("empty expression"));
        }
        let v = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<V> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            let col = self.col();
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                self.lift(col, acc.add(&rhs))?
            } else {
                self.lift(col, acc.sub(&rhs))?
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<V> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let col = self.col();
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                self.lift(col, acc.mul(&rhs))?
            } else {
                self.lift(col, acc.div(&rhs))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<V> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<V> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            let col = self.col();
            self.pos += 1;
            let e = match self.peek().cloned() {
                Some(Tok::Int(n)) => n,
                _ => return Err(self.err("expected integer exponent")),
            };
            self.pos += 1;
            let e: u32 = e
                .try_into()
                .map_err(|_| parse_err(self.input, col, "exponent too large"))?;
            let mut acc = self.proto.integer(1.into());
            for _ in 0..e {
                acc = self.lift(col, acc.mul(&base))?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<V> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(self.proto.integer(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.proto.wants_call(&name) {
                    if self.peek() != Some(&Tok::Op('(')) {
                        return Err(self.err(format!("expected '(' after {name}")));
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    if self.peek() != Some(&Tok::Op(')')) {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    self.lift(col, self.proto.ident(&name, Some(arg)))
                } else {
                    self.lift(col, self.proto.ident(&name, None))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

impl ExprValue for FormalScalar {
    fn integer(&self, n: BigInt) -> Self {
        FormalScalar::constant(self.generators(), BigRational::from_integer(n))
    }

    fn ident(&self, name: &str, _: Option<Self>) -> std::result::Result<Self, String> {
        FormalScalar::generator(self.generators(), name).map_err(|e| e.to_string())
    }

    fn add(&self, o: &Self) -> std::result::Result<Self, String> {
        Ok(self + o)
    }

    fn sub(&self, o: &Self) -> std::result::Result<Self, String> {
        Ok(self - o)
    }

    fn mul(&self, o: &Self) -> std::result::Result<Self, String> {
        Ok(self * o)
    }

    fn div(&self, o: &Self) -> std::result::Result<Self, String> {
        match o.as_constant() {
            Some(c) if !c.is_zero() => Ok(self.scale(&c.recip())),
            Some(_) => Err("division by zero".into()),
            None => Err("division by a non-constant expression".into()),
        }
    }

    fn neg(&self) -> Self {
        -self
    }

    fn wants_call(&self, _: &str) -> bool {
        false
    }
}

/// Parse a scalar expression over `gens`.
pub fn parse_scalar(input: &str, gens: &GeneratorSet) -> Result<FormalScalar> {
    Parser::new(input, FormalScalar::zero(gens))?.parse_all()
}

/// Parse a rational literal such as `"-2/3"` or `"5"`.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let empty = GeneratorSet::new(Vec::<String>::new())?;
    let s = parse_scalar(input, &empty)?;
    Ok(s.as_constant().expect("no generators"))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
