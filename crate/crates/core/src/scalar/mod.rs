//! Scalars: exact elements of a multi-quadratic extension of `Q(i)`, with a
//! high-precision complex float fallback.

mod float;
mod radical;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use float::{default_eps, default_precision, set_defaults, FloatC};
pub use radical::{Gauss, RadKey, Radical};

pub(crate) use float::{best_rational, bf_to_f64};

/// Exact inversion is attempted for elements with at most this many distinct primes under
/// square roots; beyond it the result degrades to the float backend.
pub const MAX_INV_PRIMES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Radical),
    Float(FloatC),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Radical::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Radical::one())
    }

    pub fn i() -> Self {
        Scalar::Exact(Radical::i())
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::Exact(Radical::from_i64(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(Radical::ratio(p, q))
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Exact(Radical::from_rational(r))
    }

    pub fn gauss(re: BigRational, im: BigRational) -> Self {
        Scalar::Exact(Radical::from_gauss(Gauss::new(re, im)))
    }

    /// `sqrt(p/q)`, exact.
    pub fn sqrt_ratio(p: i64, q: i64) -> Self {
        Scalar::ratio(p, q).sqrt()
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Scalar::Float(FloatC::from_f64(re, im))
    }

    pub fn from_c64(z: Complex64) -> Self {
        Scalar::from_f64(z.re, z.im)
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_radical(&self) -> Option<&Radical> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_radical().and_then(Radical::as_rational)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one()).is_zero()
    }

    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_real(),
            Scalar::Float(f) => f.is_real(),
        }
    }

    pub fn to_float_with(&self, prec: usize, eps: f64) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Float(FloatC::from_radical(r, prec, eps)),
            Scalar::Float(f) => {
                let mut g = f.clone();
                g.eps = eps;
                if prec != f.prec {
                    g = FloatC::from_f64_with(0.0, 0.0, prec, eps).add(f);
                }
                Scalar::Float(g)
            }
        }
    }

    pub fn to_float(&self) -> Scalar {
        match self {
            Scalar::Float(_) => self.clone(),
            Scalar::Exact(_) => self.to_float_with(default_precision(), default_eps()),
        }
    }

    fn as_floatc(&self, like: &FloatC) -> FloatC {
        match self {
            Scalar::Exact(r) => FloatC::from_radical(r, like.prec, like.eps),
            Scalar::Float(f) => f.clone(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => {
                let (re, im) = r.to_f64_parts();
                Complex64::new(re, im)
            }
            Scalar::Float(f) => {
                let (re, im) = f.to_f64();
                Complex64::new(re, im)
            }
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.conj()),
            Scalar::Float(f) => Scalar::Float(f.conj()),
        }
    }

    pub fn re(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.re()),
            Scalar::Float(f) => {
                let z = FloatC::zero_with(f.prec, f.eps);
                Scalar::Float(FloatC::new(f.re.clone(), z.im, f.prec, f.eps))
            }
        }
    }

    pub fn im(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.im()),
            Scalar::Float(f) => {
                let z = FloatC::zero_with(f.prec, f.eps);
                Scalar::Float(FloatC::new(f.im.clone(), z.im, f.prec, f.eps))
            }
        }
    }

    /// `|x|^2`, a real scalar.
    pub fn abs_sqr(&self) -> Scalar {
        (self * &self.conj()).re()
    }

    /// Sign of a real scalar; exact in the exact backend, within tolerance otherwise.
    /// `None` when the scalar is not real.
    pub fn sign(&self) -> Option<i8> {
        match self {
            Scalar::Exact(r) => r.sign(),
            Scalar::Float(f) => f.is_real().then(|| f.real_sign()),
        }
    }

    /// Sign of the real part.
    pub fn re_sign(&self) -> i8 {
        self.re().sign().unwrap_or(0)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Some(1)
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Some(-1)
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => match r.inv(MAX_INV_PRIMES) {
                Ok(inv) => inv.map(Scalar::Exact),
                Err(count) => {
                    log::warn!("inverting an element with {count} distinct radicals; falling back to floats");
                    self.to_float().inv()
                }
            },
            Scalar::Float(f) => f.inv().map(Scalar::Float),
        }
    }

    /// Exact inverse only; `None` if zero or beyond the radical cap.
    pub fn inv_exact(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(r) => r.inv(MAX_INV_PRIMES).ok().flatten().map(Scalar::Exact),
            Scalar::Float(_) => None,
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Principal square root: exact for rationals and Gaussian rationals of rational
    /// modulus, float otherwise.
    pub fn sqrt(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => match r.sqrt() {
                Some(s) => Scalar::Exact(s),
                None => {
                    log::debug!("no exact square root of {r}; using floats");
                    self.to_float().sqrt()
                }
            },
            Scalar::Float(f) => Scalar::Float(f.sqrt()),
        }
    }

    /// `|x|`, exact whenever the modulus lies in the radical field in an easily
    /// recognised way (real, imaginary, rational modulus, or a Gaussian multiple of a
    /// real radical).
    pub fn abs(&self) -> Scalar {
        let Scalar::Exact(r) = self else {
            return self.abs_sqr().sqrt();
        };
        if let Some(s) = r.sign() {
            return if s < 0 { self.neg() } else { self.clone() };
        }
        let im = r.im();
        if r.re().is_zero() {
            let s = im.sign().unwrap_or(0);
            let v = Scalar::Exact(im);
            return if s < 0 { -v } else { v };
        }
        let sq = self.abs_sqr();
        if let Some(q) = sq.as_rational() {
            if let Some(s) = Radical::sqrt_rational(&q) {
                return Scalar::Exact(s);
            }
        }
        let (_, g0) = r.terms().next().expect("nonzero");
        let g0 = g0.clone();
        let unit = Scalar::Exact(Radical::from_gauss(g0.conj()));
        let real = self * &unit;
        if let Some(s) = real.sign() {
            let n0 = Radical::sqrt_rational(&g0.norm()).map(Scalar::Exact);
            if let Some(n0) = n0 {
                // |x| = |g0| * |x conj(g0)| / |g0|^2
                let modulus = Scalar::rational(g0.norm());
                let real_abs = if s < 0 { -real } else { real };
                if let Some(inv) = modulus.inv_exact() {
                    return &(&real_abs * &inv) * &n0;
                }
            }
        }
        sq.sqrt()
    }

    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        (self.to_c64() - other.to_c64()).norm() <= tol
    }

    /// Number of distinct primes under square roots (0 for floats).
    pub fn radical_count(&self) -> usize {
        self.as_radical().map_or(0, |r| r.primes().len())
    }

    pub fn bigint(n: BigInt) -> Scalar {
        Scalar::rational(BigRational::from_integer(n))
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&Radical, &Radical) -> Radical,
    float: impl Fn(&FloatC, &FloatC) -> FloatC,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(float(x, y)),
        (Scalar::Exact(_), Scalar::Float(y)) => Scalar::Float(float(&a.as_floatc(y), y)),
        (Scalar::Float(x), Scalar::Exact(_)) => Scalar::Float(float(x, &b.as_floatc(x))),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, Radical::add, FloatC::add)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, Radical::sub, FloatC::sub)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        binop(self, rhs, Radical::mul, FloatC::mul)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.neg()),
            Scalar::Float(f) => Scalar::Float(f.neg()),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self - other).is_zero(),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Best rational approximation of a real float within `tol` with bounded denominator.
pub fn recognize_rational(x: &Scalar, max_den: u64, tol: f64) -> Option<BigRational> {
    match x {
        Scalar::Exact(r) => r.as_rational(),
        Scalar::Float(f) => {
            if !f.is_real() {
                return None;
            }
            best_rational(&f.re, max_den, tol, f.prec)
        }
    }
}

/// Try to read a float as an exact value: each of the real and imaginary parts must be a
/// rational `p/q` or `±sqrt(p/q)` with `q <= max_den`, within `tol`.
pub fn promote(x: &Scalar, max_den: u64, tol: f64) -> Option<Scalar> {
    let Scalar::Float(f) = x else {
        return Some(x.clone());
    };
    let part = |v: &astro_float::BigFloat| -> Option<Scalar> {
        if let Some(q) = best_rational(v, max_den, tol, f.prec) {
            return Some(Scalar::rational(q));
        }
        let p = f.prec + 16;
        let sq = v.mul(v, p, astro_float::RoundingMode::ToEven);
        let q = best_rational(&sq, max_den.saturating_mul(max_den), tol * (2.0 * bf_to_f64(v).abs() + 1.0), f.prec)?;
        let s = Radical::sqrt_rational(&q)?;
        let val = Scalar::Exact(if v.is_negative() { s.neg() } else { s });
        (bf_to_f64(v) - val.to_c64().re).abs().le(&(tol * 10.0)).then_some(val)
    };
    let re = part(&f.re)?;
    let im = part(&f.im)?;
    let out = &re + &(&im * &Scalar::i());
    let back = out.to_float_with(f.prec, f.eps);
    (&back - x).to_c64().norm().le(&(tol * 10.0)).then_some(out)
}

/// Rational number from a BigRational pair of i64, for tests and fixtures.
pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}
