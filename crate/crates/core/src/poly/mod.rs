//! Sparse multivariate polynomials over [`Scalar`].
//!
//! Monomials are ordered graded-lexicographically with the highest-index variable most
//! significant, so for variables `z1, ..., zn, t` the order is `z1 < ... < zn < t`.

mod coprime;
mod parse;
pub mod upoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Backend, Scalar};

pub use coprime::{coprime_check, Coprimality};
pub use parse::{parse_poly, parse_scalar, ParseError};
pub use upoly::UPoly;

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn format(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// All exponent vectors in `nvars` variables of total degree `d`, in ascending order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(0, d, &mut vec![0; nvars], &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("target degree {k} is below the polynomial degree {deg}")]
    DegreeTooLow { k: u32, deg: u32 },
    #[error("not divisible")]
    NotDivisible { remainder: Poly },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Poly::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly::term(Monomial::var(nvars, i), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        Poly::from_terms(n, coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn coeff_of(&self, exps: &[u32]) -> Scalar {
        self.coeff(&Monomial(exps.to_vec()))
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn backend(&self) -> Backend {
        if self.terms.values().all(Scalar::is_exact) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    pub fn is_exact(&self) -> bool {
        self.backend() == Backend::Exact
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.try_add(other).expect("variable count mismatch")
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.try_sub(other).expect("variable count mismatch")
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.try_mul(other).expect("variable count mismatch")
    }

    pub fn neg(&self) -> Poly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Conjugates every coefficient.
    pub fn conj_coeffs(&self) -> Poly {
        self.map_coeffs(Scalar::conj)
    }

    pub fn to_float(&self) -> Poly {
        self.map_coeffs(Scalar::to_float)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.nvars, "evaluation arity");
        let mut powers: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]; self.nvars];
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * &x[i];
                    pw.push(next);
                }
                if e > 0 {
                    v = &v * &pw[e as usize];
                }
            }
            acc = &acc + &v;
        }
        acc
    }

    pub fn eval_c64(&self, x: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_c64();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v *= x[i].powu(e);
                }
            }
            acc += v;
        }
        acc
    }

    /// Substitutes `x_i := subs[i]`; all substitutes share one arity.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars, "composition arity");
        let target = subs.first().map_or(0, Poly::nvars);
        let mut cache: Vec<Vec<Poly>> = subs.iter().map(|s| vec![Poly::one(s.nvars), s.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut v = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&subs[i]);
                    cache[i].push(next);
                }
                v = v.mul(&cache[i][e as usize]);
            }
            out = out.add(&v);
        }
        out
    }

    /// Fixes `x_var := value`, keeping the arity.
    pub fn substitute(&self, var: usize, value: &Scalar) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0);
            p.add_term(Monomial(e), c * &value.pow(k));
        }
        p
    }

    /// Re-indexes variables: variable `i` becomes variable `map[i]` among `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.nvars);
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; nvars];
                for (i, &k) in m.0.iter().enumerate() {
                    e[map[i]] += k;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Drops trailing variables that must not occur.
    pub fn truncate_vars(&self, nvars: usize) -> Poly {
        Poly::from_terms(
            nvars,
            self.terms.iter().map(|(m, c)| {
                assert!(m.0[nvars..].iter().all(|&e| e == 0), "dropped variable occurs");
                (Monomial(m.0[..nvars].to_vec()), c.clone())
            }),
        )
    }

    /// `t^k p(x/t)` with `t` appended as the last variable.
    pub fn homogenize(&self, k: u32) -> Result<HomPoly, PolyError> {
        let deg = self.degree();
        if k < deg && !self.is_zero() {
            return Err(PolyError::DegreeTooLow { k, deg });
        }
        let nv = self.nvars + 1;
        let p = Poly::from_terms(
            nv,
            self.terms.iter().map(|(m, c)| {
                let mut e = m.0.clone();
                e.push(k - m.degree());
                (Monomial(e), c.clone())
            }),
        );
        Ok(HomPoly { poly: p, degree: k })
    }

    /// Sets the last variable to 1 and drops it.
    pub fn dehomogenize(&self) -> Poly {
        let nv = self.nvars - 1;
        let mut p = Poly::zero(nv);
        for (m, c) in &self.terms {
            p.add_term(Monomial(m.0[..nv].to_vec()), c.clone());
        }
        p
    }

    /// Multivariate division by a single polynomial in graded-lex order.
    pub fn div_rem(&self, g: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check(g)?;
        let (lm, lc) = g.leading().ok_or(PolyError::DivisionByZero)?;
        let lm = lm.clone();
        let lc_inv = lc.inv().ok_or(PolyError::DivisionByZero)?;
        let mut p = self.clone();
        let mut q = Poly::zero(self.nvars);
        let mut r = Poly::zero(self.nvars);
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c * &lc_inv;
                for (gm, gc) in &g.terms {
                    p.add_term(gm.mul(&qm), -(&qc * gc));
                }
                p.terms.remove(&m);
                q.add_term(qm, qc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    pub fn exact_divide(&self, g: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.div_rem(g)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible { remainder: r })
        }
    }

    /// Largest absolute coefficient modulus, as f64.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }

    /// Extracts the univariate polynomial in `var` when no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let mut c = vec![Scalar::zero(); self.degree_in(var) as usize + 1];
        for (m, v) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return None;
            }
            c[m.0[var] as usize] = v.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[var] -= 1;
            p.add_term(Monomial(e), c * &Scalar::from_i64(k as i64));
        }
        p
    }

    /// Variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    /// Collects `self` as a polynomial in `var` with coefficients in the remaining variables
    /// (arity unchanged, `var` absent from the coefficients).
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0) as usize;
            out[k].add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = format_coeff(c);
            let mono = m.format(names);
            let piece = match (body.as_str(), mono.as_str()) {
                (b, "1") => b.to_string(),
                ("1", mo) => mo.to_string(),
                (b, mo) => format!("{b}*{mo}"),
            };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            s.push_str(&piece);
        }
        s
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// Splits a coefficient into sign and a parenthesized body suitable for a product.
fn format_coeff(c: &Scalar) -> (bool, String) {
    let text = c.to_string();
    let single = match c {
        Scalar::Exact(r) => {
            r.terms().count() == 1 && {
                let (_, g) = r.terms().next().unwrap();
                g.re.is_zero() || g.im.is_zero()
            }
        }
        Scalar::Float(f) => {
            let (re, im) = f.to_f64();
            re.abs() < f.eps || im.abs() < f.eps
        }
    };
    if single {
        if let Some(rest) = text.strip_prefix('-') {
            return (true, rest.to_string());
        }
        (false, text)
    } else {
        (false, format!("({text})"))
    }
}

use num_traits::Zero as _;

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(&Poly::default_names(self.nvars)))
    }
}

/// A polynomial whose terms all have total degree `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomPoly {
    poly: Poly,
    degree: u32,
}

impl HomPoly {
    pub fn new(poly: Poly, degree: u32) -> Option<Self> {
        poly.terms.keys().all(|m| m.degree() == degree).then_some(HomPoly { poly, degree })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }
}

impl std::ops::Deref for HomPoly {
    type Target = Poly;
    fn deref(&self) -> &Poly {
        &self.poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str, vars: &[&str]) -> Poly {
        parse_poly(s, &names(vars)).unwrap()
    }

    #[test]
    fn order_is_graded_with_last_variable_heaviest() {
        let z = Monomial(vec![1, 0, 0]);
        let w = Monomial(vec![0, 1, 0]);
        let t = Monomial(vec![0, 0, 1]);
        assert!(z < w && w < t);
        assert!(t < Monomial(vec![2, 0, 0]));
        assert!(Monomial(vec![1, 1, 0]) < Monomial(vec![1, 0, 1]));
        let all = Monomial::all_of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn arithmetic_examples() {
        let v = ["z", "w", "t"];
        assert_eq!(p("z", &v).mul(&p("z", &v)), p("z^2", &v));
        assert_eq!(p("t + 2*i*w", &v).mul(&p("t - 2*i*w", &v)), p("t^2 + 4*w^2", &v));
        assert_eq!(p("z + w", &v).add(&p("-z", &v)), p("w", &v));
        assert!(p("z", &["z"]).try_add(&p("z", &v)).is_err());
    }

    #[test]
    fn homogenize_examples() {
        let v = ["z", "w"];
        let h = p("z + (i/2)*z*w", &v).homogenize(2).unwrap();
        assert_eq!(*h.poly(), p("t*z + (i/2)*z*w", &["z", "w", "t"]));
        assert_eq!(*p("1", &v).homogenize(2).unwrap(), p("t^2", &["z", "w", "t"]));
        assert_eq!(*p("w^2", &v).homogenize(3).unwrap(), p("t*w^2", &["z", "w", "t"]));
        assert!(p("w^2", &v).homogenize(1).is_err());
        assert_eq!(h.dehomogenize(), p("z + (i/2)*z*w", &v));
    }

    #[test]
    fn division_examples() {
        let v = ["z", "w", "t"];
        assert_eq!(p("z^2 - w^2", &v).exact_divide(&p("z - w", &v)).unwrap(), p("z + w", &v));
        let l = p("t + 2*i*w", &v);
        assert_eq!(l.mul(&l).exact_divide(&l).unwrap(), l);
        match p("z^2 + 1", &v).exact_divide(&p("z - w", &v)) {
            Err(PolyError::NotDivisible { remainder }) => assert!(!remainder.is_zero()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compose_and_eval() {
        let v = ["z", "w"];
        let f = p("z^2 + 3*w", &v);
        let g = f.compose(&[p("z + w", &v), p("z", &v)]);
        assert_eq!(g, p("z^2 + 2*z*w + w^2 + 3*z", &v));
        let val = g.eval(&[Scalar::from_i64(1), Scalar::from_i64(2)]);
        assert_eq!(val, Scalar::from_i64(12));
    }

    #[test]
    fn formatting_round_trips() {
        let v = ["z", "w", "t"];
        for s in ["t^2 - 2*i*t*w + (3 + i)*z*sqrt(2)", "-z + 1/3*sqrt(39)*w", "0"] {
            let q = p(s, &v);
            assert_eq!(p(&q.format(&names(&v)), &v), q, "{s}");
        }
    }
}
