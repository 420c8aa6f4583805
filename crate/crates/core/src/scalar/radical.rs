//! Exact arithmetic in the multi-quadratic extension `Q(i)(sqrt p_1, ..., sqrt p_m)`.
//!
//! An element is stored as a finite sum `sum_k g_k * sqrt(d_k)` where every `g_k` is a
//! Gaussian rational and every `d_k` is a squarefree positive integer, kept as the sorted
//! list of its prime factors. The square roots of distinct squarefree integers are
//! linearly independent over `Q(i)`, so this representation is canonical and structural
//! equality is field equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Squarefree radicand, as its sorted list of distinct primes. The empty list is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RadKey(Vec<u64>);

impl RadKey {
    pub fn one() -> Self {
        RadKey(Vec::new())
    }

    pub fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        primes.dedup();
        RadKey(primes)
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    /// The integer `d` this key stands for.
    pub fn value(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, &p| acc * p)
    }

    /// `sqrt(a) * sqrt(b) = common * sqrt(rest)`: returns `(common, rest)`.
    fn mul(&self, other: &RadKey) -> (BigUint, RadKey) {
        let mut common = BigUint::one();
        let mut rest = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    common *= a;
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    rest.push(a);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    rest.push(b);
                    j += 1;
                }
                (Some(&a), None) => {
                    rest.push(a);
                    i += 1;
                }
                (None, Some(&b)) => {
                    rest.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        (common, RadKey(rest))
    }
}

impl fmt::Display for RadKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Gaussian rational `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gauss { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Gauss::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Gauss::real(BigRational::one())
    }

    pub fn i() -> Self {
        Gauss::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn scale(&self, r: &BigRational) -> Gauss {
        Gauss::new(&self.re * r, &self.im * r)
    }

    pub fn neg(&self) -> Gauss {
        Gauss::new(-&self.re, -&self.im)
    }

    pub fn conj(&self) -> Gauss {
        Gauss::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Gauss> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Gauss::new(&self.re / &n, -&self.im / &n))
    }
}

/// Exact element of `Q(i)(sqrt d_1, sqrt d_2, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Radical {
    terms: BTreeMap<RadKey, Gauss>,
}

impl Radical {
    pub fn zero() -> Self {
        Radical::default()
    }

    pub fn one() -> Self {
        Radical::from_gauss(Gauss::one())
    }

    pub fn i() -> Self {
        Radical::from_gauss(Gauss::i())
    }

    pub fn from_gauss(g: Gauss) -> Self {
        Radical::term(RadKey::one(), g)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Radical::from_gauss(Gauss::real(r))
    }

    pub fn from_i64(n: i64) -> Self {
        Radical::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Radical::from_rational(BigRational::new(p.into(), q.into()))
    }

    pub fn term(key: RadKey, g: Gauss) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(key, g);
        }
        Radical { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RadKey, &Gauss)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_gauss().is_some_and(|g| g == Gauss::one())
    }

    /// `Some` when the element lies in `Q(i)`.
    pub fn as_gauss(&self) -> Option<Gauss> {
        match self.terms.len() {
            0 => Some(Gauss::zero()),
            1 => self.terms.get(&RadKey::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gauss().filter(|g| g.im.is_zero()).map(|g| g.re)
    }

    /// Every prime occurring under some square root.
    pub fn primes(&self) -> BTreeSet<u64> {
        self.terms.keys().flat_map(|k| k.primes().iter().copied()).collect()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|g| g.im.is_zero())
    }

    pub fn re(&self) -> Radical {
        self.map_coeffs(|g| Gauss::real(g.re.clone()))
    }

    pub fn im(&self) -> Radical {
        self.map_coeffs(|g| Gauss::real(g.im.clone()))
    }

    fn map_coeffs(&self, f: impl Fn(&Gauss) -> Gauss) -> Radical {
        let terms = self.terms.iter().map(|(k, g)| (k.clone(), f(g))).filter(|(_, g)| !g.is_zero()).collect();
        Radical { terms }
    }

    fn accumulate(terms: &mut BTreeMap<RadKey, Gauss>, key: RadKey, g: Gauss) {
        if g.is_zero() {
            return;
        }
        match terms.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&g);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(g);
            }
        }
    }

    pub fn add(&self, o: &Radical) -> Radical {
        let mut terms = self.terms.clone();
        for (k, g) in &o.terms {
            Radical::accumulate(&mut terms, k.clone(), g.clone());
        }
        Radical { terms }
    }

    pub fn neg(&self) -> Radical {
        self.map_coeffs(Gauss::neg)
    }

    pub fn sub(&self, o: &Radical) -> Radical {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Radical) -> Radical {
        let mut terms = BTreeMap::new();
        for (ka, ga) in &self.terms {
            for (kb, gb) in &o.terms {
                let (common, key) = ka.mul(kb);
                let c = BigRational::from_integer(BigInt::from(common));
                Radical::accumulate(&mut terms, key, ga.mul(gb).scale(&c));
            }
        }
        Radical { terms }
    }

    pub fn scale_gauss(&self, g: &Gauss) -> Radical {
        self.map_coeffs(|c| c.mul(g))
    }

    /// Complex conjugation; square roots of positive integers are real.
    pub fn conj(&self) -> Radical {
        self.map_coeffs(Gauss::conj)
    }

    /// The Galois automorphism `sqrt p -> -sqrt p`.
    pub fn flip_prime(&self, p: u64) -> Radical {
        let terms = self
            .terms
            .iter()
            .map(|(k, g)| if k.contains(p) { (k.clone(), g.neg()) } else { (k.clone(), g.clone()) })
            .collect();
        Radical { terms }
    }

    /// Multiplicative inverse by iterated conjugation over each prime present.
    ///
    /// Returns `None` for zero. `max_primes` caps the number of distinct primes;
    /// `Err(count)` is returned when the element exceeds it.
    pub fn inv(&self, max_primes: usize) -> Result<Option<Radical>, usize> {
        if self.is_zero() {
            return Ok(None);
        }
        if self.terms.len() == 1 {
            // (g sqrt d)^-1 = sqrt d / (g d)
            let (k, g) = self.terms.iter().next().unwrap();
            let d = BigRational::from_integer(BigInt::from(k.value()));
            let inv = g.inv().unwrap().scale(&(BigRational::one() / d));
            return Ok(Some(Radical::term(k.clone(), inv)));
        }
        let primes = self.primes();
        if primes.len() > max_primes {
            return Err(primes.len());
        }
        let mut num = Radical::one();
        let mut den = self.clone();
        for &p in primes.iter().rev() {
            let c = den.flip_prime(p);
            num = num.mul(&c);
            den = den.mul(&c);
        }
        let g = den.as_gauss().expect("norm over all primes lies in Q(i)");
        Ok(Some(num.scale_gauss(&g.inv().expect("nonzero norm"))))
    }

    /// Exact sign of a real element: -1, 0 or 1. `None` if not real.
    pub fn sign(&self) -> Option<i8> {
        if !self.is_real() {
            return None;
        }
        Some(real_sign(self))
    }

    /// Split off the prime `p`: `self = rest + part * sqrt p` with neither containing `p`.
    fn split_prime(&self, p: u64) -> (Radical, Radical) {
        let mut rest = BTreeMap::new();
        let mut part = BTreeMap::new();
        for (k, g) in &self.terms {
            if k.contains(p) {
                let primes: Vec<u64> = k.primes().iter().copied().filter(|&q| q != p).collect();
                part.insert(RadKey(primes), g.clone());
            } else {
                rest.insert(k.clone(), g.clone());
            }
        }
        (Radical { terms: rest }, Radical { terms: part })
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, g) in &self.terms {
            let s = k.value().to_f64().unwrap_or(f64::INFINITY).sqrt();
            re += g.re.to_f64().unwrap_or(f64::NAN) * s;
            im += g.im.to_f64().unwrap_or(f64::NAN) * s;
        }
        (re, im)
    }

    /// Exact square root of a rational number, when its squarefree kernel can be found.
    /// Negative rationals give `i * sqrt(-r)`.
    pub fn sqrt_rational(r: &BigRational) -> Option<Radical> {
        if r.is_zero() {
            return Some(Radical::zero());
        }
        let neg = r.is_negative();
        let a = r.abs();
        // sqrt(p/q) = sqrt(p q) / q
        let pq = a.numer() * a.denom();
        let (square, kernel) = squarefree_split(&pq.to_biguint()?)?;
        let coeff = BigRational::new(BigInt::from(square), a.denom().clone());
        let g = if neg { Gauss::new(BigRational::zero(), coeff) } else { Gauss::real(coeff) };
        Some(Radical::term(kernel, g))
    }

    /// Exact principal square root, for Gaussian rationals whose modulus is rational,
    /// and for rationals. `None` otherwise.
    pub fn sqrt(&self) -> Option<Radical> {
        let g = self.as_gauss()?;
        if g.im.is_zero() {
            return Radical::sqrt_rational(&g.re);
        }
        // sqrt(a+bi) = sqrt((m+a)/2) + i sgn(b) sqrt((m-a)/2), m = |a+bi|
        let m = Radical::sqrt_rational(&g.norm())?.as_rational()?;
        let two = BigRational::from_integer(2.into());
        let x = Radical::sqrt_rational(&((&m + &g.re) / &two))?;
        let mut y = Radical::sqrt_rational(&((&m - &g.re) / &two))?;
        if g.im.is_negative() {
            y = y.neg();
        }
        Some(x.add(&y.mul(&Radical::i())))
    }
}

fn real_sign(x: &Radical) -> i8 {
    if x.is_zero() {
        return 0;
    }
    let primes = x.primes();
    let Some(&p) = primes.iter().next_back() else {
        let r = &x.terms.values().next().unwrap().re;
        return if r.is_positive() { 1 } else { -1 };
    };
    // x = b + c sqrt p
    let (b, c) = x.split_prime(p);
    let sb = real_sign(&b);
    let sc = real_sign(&c);
    if sc == 0 {
        return sb;
    }
    if sb == 0 || sb == sc {
        return sc;
    }
    // opposite signs: sign(x) = sign(b) * sign(b^2 - p c^2)
    let pr = Radical::from_i64(p as i64);
    let d = b.mul(&b).sub(&pr.mul(&c).mul(&c));
    sb * real_sign(&d)
}

/// `n = square^2 * kernel` with `kernel` squarefree.
fn squarefree_split(n: &BigUint) -> Option<(BigUint, RadKey)> {
    let factors: BTreeMap<BigUint, usize> = {
        let v = n.to_u128()?;
        num_prime::nt_funcs::factorize128(v).into_iter().map(|(p, e)| (BigUint::from(p), e)).collect()
    };
    let mut square = BigUint::one();
    let mut kernel = Vec::new();
    for (p, e) in factors {
        if e % 2 == 1 {
            kernel.push(p.to_u64()?);
        }
        square *= p.pow((e / 2) as u32);
    }
    Some((square, RadKey::from_primes(kernel)))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_gauss(g: &Gauss) -> String {
    match (g.re.is_zero(), g.im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => fmt_rational(&g.re),
        (true, false) => {
            if g.im.is_one() {
                "i".into()
            } else if (-&g.im).is_one() {
                "-i".into()
            } else {
                format!("{}*i", fmt_rational(&g.im))
            }
        }
        (false, false) => {
            let im = if g.im.is_one() {
                "i".to_string()
            } else if (-&g.im).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rational(&g.im))
            };
            if let Some(abs) = im.strip_prefix('-') {
                format!("({} - {})", fmt_rational(&g.re), abs)
            } else {
                format!("({} + {})", fmt_rational(&g.re), im)
            }
        }
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, g) in &self.terms {
            let mut s = if k.is_one() {
                fmt_gauss(g)
            } else if g == &Gauss::one() {
                format!("sqrt({})", k)
            } else if g == &Gauss::one().neg() {
                format!("-sqrt({})", k)
            } else {
                format!("{}*sqrt({})", fmt_gauss(g), k)
            };
            if !first {
                if let Some(rest) = s.strip_prefix('-') {
                    s = format!(" - {}", rest);
                } else {
                    s = format!(" + {}", s);
                }
            }
            first = false;
            f.write_str(&s)?;
        }
        Ok(())
    }
}
