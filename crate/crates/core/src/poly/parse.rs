//! Expression parser for coefficients and polynomials.
//!
//! ```text
//! expr  := ('+'|'-')? term (('+'|'-') term)*
//! term  := power (('*'|'/')? power)*
//! power := atom ('^' integer)?
//! atom  := number | 'i' | variable | 'sqrt' '(' expr ')' | '(' expr ')' | '-' power
//! ```
//! Integer and `p/q` literals stay exact; literals with a decimal point or exponent are
//! read as floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Poly;
use crate::scalar::{Radical, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(BigRational),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let mut decimal = false;
            let mut frac_digits = 0usize;
            if i < b.len() && b[i] == b'.' {
                decimal = true;
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                    frac_digits += 1;
                }
            }
            let mant_end = i;
            let mut exp: i64 = 0;
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    let es = i + 1;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    exp =
                        src[es..j].parse().map_err(|_| ParseError { pos: es, msg: "exponent out of range".into() })?;
                    decimal = true;
                    i = j;
                }
            }
            let digits: String = src[start..mant_end].chars().filter(|c| *c != '.').collect();
            let mant: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
            if decimal {
                let e = exp - frac_digits as i64;
                let ten = BigInt::from(10);
                let r = if e >= 0 {
                    BigRational::from_integer(mant * num_traits::pow(ten, e as usize))
                } else {
                    BigRational::new(mant, num_traits::pow(ten, (-e) as usize))
                };
                out.push((start, Tok::Decimal(r)));
            } else {
                out.push((start, Tok::Int(mant)));
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'\'') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn nv(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Decimal(_) | Tok::Ident(_) | Tok::Sym('(')))
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.power()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(ParseError { pos, msg: "division only by a nonzero constant".into() });
                }
                let inv = d.constant_term().inv().ok_or(ParseError { pos, msg: "division by zero".into() })?;
                acc = acc.scale(&inv);
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let nv = self.nv();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Poly::constant(nv, Scalar::bigint(n)))
            }
            Some(Tok::Decimal(r)) => {
                self.at += 1;
                Ok(Poly::constant(nv, Scalar::rational(r).to_float()))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.at += 1;
                Ok(self.power()?.neg())
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(k) = self.names.iter().position(|n| *n == name) {
                    return Ok(Poly::var(nv, k));
                }
                match name.as_str() {
                    "i" => Ok(Poly::constant(nv, Scalar::i())),
                    "sqrt" => self.sqrt_call(),
                    _ => Err(ParseError { pos: self.toks[self.at - 1].0, msg: format!("unknown identifier '{name}'") }),
                }
            }
            Some(Tok::Sym(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn sqrt_call(&mut self) -> Result<Poly, ParseError> {
        let nv = self.nv();
        if !self.eat('(') {
            return self.err("expected '(' after sqrt");
        }
        let pos = self.pos();
        let arg = self.expr()?;
        if !self.eat(')') {
            return self.err("expected ')'");
        }
        let bad = |msg: &str| ParseError { pos, msg: msg.into() };
        if !arg.is_constant() {
            return Err(bad("sqrt argument must be constant"));
        }
        let c = arg.constant_term();
        match &c {
            Scalar::Exact(r) => {
                let q = r.as_rational().ok_or_else(|| bad("sqrt argument must be rational"))?;
                if q.is_negative() {
                    return Err(bad("negative radicand"));
                }
                let s = Radical::sqrt_rational(&q).ok_or_else(|| bad("radicand too large to factor"))?;
                Ok(Poly::constant(nv, Scalar::Exact(s)))
            }
            Scalar::Float(_) => {
                if !c.is_real() {
                    return Err(bad("sqrt argument must be real"));
                }
                if c.is_negative() {
                    return Err(bad("negative radicand"));
                }
                Ok(Poly::constant(nv, c.sqrt()))
            }
        }
    }
}

/// Parses a polynomial expression over the given variable names.
pub fn parse_poly(src: &str, names: &[String]) -> Result<Poly, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, at: 0, end: src.len(), names };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a constant coefficient expression.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    let p = parse_poly(src, &[])?;
    Ok(p.constant_term())
}
