//! Dense univariate polynomials: gcd, complex roots, and exact real root isolation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

/// Coefficients in ascending order, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly {
    c: Vec<Scalar>,
}

/// An isolated real root: `lo < root < hi`, or `lo == hi == root` when exact.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: Option<BigRational>,
}

impl RealRoot {
    pub fn midpoint(&self) -> BigRational {
        match &self.exact {
            Some(r) => r.clone(),
            None => (&self.lo + &self.hi) / BigRational::from_integer(2.into()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl UPoly {
    pub fn new(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_rationals(c: &[BigRational]) -> Self {
        UPoly::new(c.iter().cloned().map(Scalar::rational).collect())
    }

    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial at 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_exact(&self) -> bool {
        self.c.iter().all(Scalar::is_exact)
    }

    pub fn lead(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.c.iter().rev() {
            acc = acc * x + a.to_c64();
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(k, a)| a * &Scalar::from_i64(k as i64)).collect())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        UPoly::new(c)
    }

    pub fn scale(&self, s: &Scalar) -> UPoly {
        UPoly::new(self.c.iter().map(|a| a * s).collect())
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &UPoly) -> Option<(UPoly, UPoly)> {
        if d.is_zero() {
            return None;
        }
        let inv = d.lead().inv()?;
        let dn = d.degree();
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return Some((UPoly::zero(), self.clone()));
        }
        let mut q = vec![Scalar::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let f = &r[k + dn] * &inv;
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&f * b);
            }
            r[k + dn] = Scalar::zero();
            q[k] = f;
        }
        Some((UPoly::new(q), UPoly::new(r)))
    }

    pub fn monic(&self) -> UPoly {
        match self.lead().inv() {
            Some(inv) if !self.is_zero() => self.scale(&inv),
            _ => self.clone(),
        }
    }

    /// Drops coefficients below `tol` times the largest one (float inputs only).
    fn clean(&self, tol: f64) -> UPoly {
        if self.is_exact() {
            return self.clone();
        }
        let m = self.c.iter().map(|a| a.to_c64().norm()).fold(0.0, f64::max);
        UPoly::new(
            self.c.iter().map(|a| if a.to_c64().norm() <= tol * m { Scalar::zero() } else { a.clone() }).collect(),
        )
    }

    /// Monic gcd; approximate (relative tolerance `1e-12`) when coefficients are floats.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.clean(1e-12).monic();
            if !b.is_exact() && b.c.iter().all(|x| x.to_c64().norm() < 1e-12) {
                b = UPoly::zero();
            }
        }
        a.monic()
    }

    /// All complex roots with multiplicity (Aberth iteration in double precision).
    pub fn roots_c64(&self) -> Vec<Complex64> {
        let c: Vec<Complex64> = self.c.iter().map(Scalar::to_c64).collect();
        roots_of_c64(&c)
    }

    /// Real coefficients: all of them real in the exact sense (or within tolerance for floats).
    pub fn is_real(&self) -> bool {
        self.c.iter().all(Scalar::is_real)
    }

    /// Isolates the distinct real roots of an exact real polynomial and refines each interval
    /// to width below `2^-bits`; rational roots are detected and reported exactly.
    /// Returns `None` if coefficients are not exact reals.
    pub fn real_roots_exact(&self, bits: u32) -> Option<Vec<RealRoot>> {
        if !self.is_exact() || !self.is_real() {
            return None;
        }
        if self.is_constant() {
            return Some(vec![]);
        }
        let g = self.gcd(&self.derivative());
        let sf = if g.is_constant() { self.monic() } else { self.div_rem(&g)?.0.monic() };
        let chain = sturm_chain(&sf);
        let bound = root_bound(&sf);
        let lo = -bound.clone();
        let hi = bound;
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone(), variations(&chain, &lo), variations(&chain, &hi))];
        let two = BigRational::from_integer(2.into());
        while let Some((a, b, va, vb)) = stack.pop() {
            let count = va - vb;
            if count == 0 {
                continue;
            }
            let mid = (&a + &b) / &two;
            let fm = sign_at(&sf, &mid);
            if count == 1 {
                out.push(refine(&sf, a, b, bits));
                continue;
            }
            if fm == 0 {
                out.push(RealRoot { lo: mid.clone(), hi: mid.clone(), exact: Some(mid.clone()) });
                let eps = (&b - &a) / BigRational::from_integer(1024.into());
                let (l, r) = (&mid - &eps, &mid + &eps);
                let (vl, vr) = (variations(&chain, &l), variations(&chain, &r));
                stack.push((a, l, va, vl));
                stack.push((r, b, vr, vb));
                continue;
            }
            let vm = variations(&chain, &mid);
            stack.push((a, mid.clone(), va, vm));
            stack.push((mid, b, vm, vb));
        }
        out.sort_by_key(|x| x.midpoint());
        Some(out)
    }

    /// Real roots as f64, exact isolation when possible, else filtered complex roots.
    pub fn real_roots_f64(&self) -> Vec<f64> {
        if let Some(rs) = self.real_roots_exact(60) {
            return rs.iter().map(RealRoot::to_f64).collect();
        }
        let scale = self.c.iter().map(|a| a.to_c64().norm()).fold(0.0, f64::max).max(1.0);
        let mut v: Vec<f64> = self
            .roots_c64()
            .into_iter()
            .filter(|z| {
                z.im.abs() <= 1e-7 * (1.0 + z.re.abs())
                    || self.eval_c64(Complex64::new(z.re, 0.0)).norm() < 1e-9 * scale
            })
            .map(|z| z.re)
            .collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        v
    }
}

/// Roots of `sum c_k x^k` (ascending coefficients, nonzero leading term).
pub fn roots_of_c64(c: &[Complex64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return vec![];
    }
    let n = c.len() - 1;
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Coefficients of `p(a + s d)` in `s`, in double precision.
pub fn restrict_to_line_c64(p: &crate::poly::Poly, a: &[Complex64], d: &[Complex64]) -> Vec<Complex64> {
    let deg = p.degree() as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (m, c) in p.terms() {
        let mut acc = vec![c.to_c64()];
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
                for (k, v) in acc.iter().enumerate() {
                    next[k] += v * a[i];
                    next[k + 1] += v * d[i];
                }
                acc = next;
            }
        }
        for (k, v) in acc.into_iter().enumerate() {
            out[k] += v;
        }
    }
    out
}

fn sturm_chain(p: &UPoly) -> Vec<UPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&Scalar::from_i64(-1)));
    }
    chain
}

fn sign_at(p: &UPoly, x: &BigRational) -> i8 {
    p.eval(&Scalar::rational(x.clone())).sign().expect("real polynomial")
}

fn variations(chain: &[UPoly], x: &BigRational) -> i64 {
    let mut last = 0i8;
    let mut v = 0;
    for p in chain {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Cauchy bound `1 + max |a_k / a_n|`, rounded up to an integer.
fn root_bound(monic: &UPoly) -> BigRational {
    let n = monic.degree();
    let m = monic.c[..n].iter().map(|a| a.to_c64().norm()).fold(0.0, f64::max);
    BigRational::from_integer(BigInt::from((m.ceil() as i64).max(0) + 2))
}

fn refine(p: &UPoly, mut a: BigRational, mut b: BigRational, bits: u32) -> RealRoot {
    let two = BigRational::from_integer(2.into());
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let mut sa = sign_at(p, &a);
    if sa == 0 {
        return RealRoot { lo: a.clone(), hi: a.clone(), exact: Some(a) };
    }
    if sign_at(p, &b) == 0 {
        return RealRoot { lo: b.clone(), hi: b.clone(), exact: Some(b) };
    }
    let mut checked_simple = false;
    while &b - &a > width {
        let m = (&a + &b) / &two;
        let sm = sign_at(p, &m);
        if sm == 0 {
            return RealRoot { lo: m.clone(), hi: m.clone(), exact: Some(m) };
        }
        if sm == sa {
            a = m;
            sa = sm;
        } else {
            b = m;
        }
        if !checked_simple && &b - &a < BigRational::new(1.into(), BigInt::from(1u64 << 40)) {
            checked_simple = true;
            let s = simplest_between(&a, &b);
            if sign_at(p, &s) == 0 {
                return RealRoot { lo: s.clone(), hi: s.clone(), exact: Some(s) };
            }
        }
    }
    let s = simplest_between(&a, &b);
    if sign_at(p, &s) == 0 {
        return RealRoot { lo: s.clone(), hi: s.clone(), exact: Some(s) };
    }
    RealRoot { lo: a, hi: b, exact: None }
}

/// The rational with smallest denominator in the closed interval `[a, b]`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    if a > b {
        return simplest_between(b, a);
    }
    if a.is_negative() && b.is_positive() || a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let fl = a.floor();
    if &fl == a {
        return fl;
    }
    if fl.clone() + BigRational::one() <= *b {
        return fl + BigRational::one();
    }
    // a, b share the integer part; recurse on reciprocals of the fractional parts.
    let fa = a - &fl;
    let fb = b - &fl;
    let inner = simplest_between(&fb.recip(), &fa.recip());
    fl + inner.recip()
}

/// Closest rational with denominator at most `max_den` to a big rational (continued fractions).
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let (a, r) = n.div_mod_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_den - &q0) / &q1;
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

/// Exact roots of `a x^2 + b x + c` (`a != 0`), through [`Scalar::sqrt`].
pub fn quadratic_roots(a: &Scalar, b: &Scalar, c: &Scalar) -> [Scalar; 2] {
    let disc = &(b * b) - &(&Scalar::from_i64(4) * &(a * c));
    let s = disc.sqrt();
    let den = (&Scalar::from_i64(2) * a).inv().expect("leading coefficient nonzero");
    [&(&-b + &s) * &den, &(&-b - &s) * &den]
}
