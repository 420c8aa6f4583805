//! Complex numbers over `astro_float::BigFloat` with an explicit working precision and
//! comparison tolerance.

use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use astro_float::{BigFloat, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::Zero;

use super::radical::Radical;

const RM: RoundingMode = RoundingMode::ToEven;

static DEFAULT_PRECISION: AtomicUsize = AtomicUsize::new(128);
// zero means the built-in 1e-25
static DEFAULT_EPS_BITS: AtomicU64 = AtomicU64::new(0);

/// Process-wide defaults for newly created float scalars.
pub fn default_precision() -> usize {
    DEFAULT_PRECISION.load(Ordering::Relaxed)
}

pub fn default_eps() -> f64 {
    match DEFAULT_EPS_BITS.load(Ordering::Relaxed) {
        0 => 1e-25,
        bits => f64::from_bits(bits),
    }
}

pub fn set_defaults(precision_bits: usize, eps: f64) {
    DEFAULT_PRECISION.store(precision_bits.max(64), Ordering::Relaxed);
    DEFAULT_EPS_BITS.store(eps.to_bits(), Ordering::Relaxed);
}

fn bf_from_bigint(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let base = BigFloat::from_u64(u64::MAX, p).add(&BigFloat::from_u64(1, p), p, RM);
    let mut acc = BigFloat::from_u64(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
    }
    if sign == BigSign::Minus {
        acc = acc.neg();
    }
    acc
}

pub(crate) fn bf_from_rational(r: &BigRational, p: usize) -> BigFloat {
    if r.is_zero() {
        return BigFloat::from_u64(0, p);
    }
    let n = bf_from_bigint(r.numer(), p + 16);
    let d = bf_from_bigint(r.denom(), p + 16);
    n.div(&d, p, RM)
}

pub(crate) fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _bits, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let mut m = 0.0f64;
    let mut scale = 1.0f64;
    for w in words.iter().rev().take(2) {
        scale /= 18446744073709551616.0;
        m += (*w as Word as f64) * scale;
    }
    let v = m * 2f64.powi(exp);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Complex float `re + i im`.
#[derive(Clone, Debug)]
pub struct FloatC {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
    pub eps: f64,
}

impl FloatC {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize, eps: f64) -> Self {
        FloatC { re, im, prec, eps }
    }

    pub fn zero_with(prec: usize, eps: f64) -> Self {
        FloatC::new(BigFloat::from_u64(0, prec), BigFloat::from_u64(0, prec), prec, eps)
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        let p = default_precision();
        FloatC::new(BigFloat::from_f64(re, p), BigFloat::from_f64(im, p), p, default_eps())
    }

    pub fn from_f64_with(re: f64, im: f64, prec: usize, eps: f64) -> Self {
        FloatC::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec), prec, eps)
    }

    pub fn from_radical(x: &Radical, prec: usize, eps: f64) -> Self {
        let p = prec + 16;
        let mut re = BigFloat::from_u64(0, p);
        let mut im = BigFloat::from_u64(0, p);
        for (k, g) in x.terms() {
            let s = bf_from_bigint(&BigInt::from(k.value()), p).sqrt(p, RM);
            re = re.add(&bf_from_rational(&g.re, p).mul(&s, p, RM), p, RM);
            im = im.add(&bf_from_rational(&g.im, p).mul(&s, p, RM), p, RM);
        }
        FloatC::new(round(&re, prec), round(&im, prec), prec, eps)
    }

    fn ctx(&self, o: &FloatC) -> (usize, f64) {
        (self.prec.max(o.prec), self.eps.min(o.eps))
    }

    pub fn add(&self, o: &FloatC) -> FloatC {
        let (p, e) = self.ctx(o);
        FloatC::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p, e)
    }

    pub fn sub(&self, o: &FloatC) -> FloatC {
        let (p, e) = self.ctx(o);
        FloatC::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p, e)
    }

    pub fn mul(&self, o: &FloatC) -> FloatC {
        let (p, e) = self.ctx(o);
        let q = p + 8;
        let re = self.re.mul(&o.re, q, RM).sub(&self.im.mul(&o.im, q, RM), p, RM);
        let im = self.re.mul(&o.im, q, RM).add(&self.im.mul(&o.re, q, RM), p, RM);
        FloatC::new(re, im, p, e)
    }

    pub fn neg(&self) -> FloatC {
        FloatC::new(self.re.neg(), self.im.neg(), self.prec, self.eps)
    }

    pub fn conj(&self) -> FloatC {
        FloatC::new(self.re.clone(), self.im.neg(), self.prec, self.eps)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let q = self.prec + 8;
        self.re.mul(&self.re, q, RM).add(&self.im.mul(&self.im, q, RM), self.prec, RM)
    }

    pub fn inv(&self) -> Option<FloatC> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        let p = self.prec;
        Some(FloatC::new(self.re.div(&n, p, RM), self.im.neg().div(&n, p, RM), p, self.eps))
    }

    /// Principal square root; the smaller part is recovered as `im / 2a` to avoid cancellation.
    pub fn sqrt(&self) -> FloatC {
        let p = self.prec;
        let q = p + 8;
        let zero = BigFloat::from_u64(0, q);
        if self.re.is_zero() && self.im.is_zero() {
            return FloatC::new(zero.clone(), zero, p, self.eps);
        }
        let m = self.norm_sqr().sqrt(q, RM);
        let two = BigFloat::from_u64(2, q);
        if !self.re.is_negative() {
            let a = m.add(&self.re, q, RM).div(&two, q, RM).sqrt(q, RM);
            let b = self.im.div(&a.mul(&two, q, RM), p, RM);
            FloatC::new(round(&a, p), b, p, self.eps)
        } else {
            let mut b = m.sub(&self.re, q, RM).div(&two, q, RM).sqrt(q, RM);
            if self.im.is_negative() {
                b = b.neg();
            }
            let a = self.im.div(&b.mul(&two, q, RM), p, RM);
            FloatC::new(a, round(&b, p), p, self.eps)
        }
    }

    pub fn is_zero(&self) -> bool {
        let (re, im) = self.to_f64();
        re.hypot(im) < self.eps
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (bf_to_f64(&self.re), bf_to_f64(&self.im))
    }

    pub fn re_f64(&self) -> f64 {
        bf_to_f64(&self.re)
    }

    /// Sign of the real part, zero within tolerance.
    pub fn real_sign(&self) -> i8 {
        let r = self.re_f64();
        if r.abs() < self.eps {
            0
        } else if r > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn is_real(&self) -> bool {
        bf_to_f64(&self.im).abs() < self.eps
    }

    /// Nearest rational with denominator at most `max_den` to the real (or imaginary) part,
    /// accepted only if within `tol`.
    pub fn part_to_rational(part: &BigFloat, max_den: u64, tol: f64, prec: usize) -> Option<BigRational> {
        best_rational(part, max_den, tol, prec)
    }
}

fn round(x: &BigFloat, p: usize) -> BigFloat {
    let mut y = x.clone();
    let _ = y.set_precision(p, RM);
    y
}

/// Continued-fraction best approximation of a big float.
pub(crate) fn best_rational(x: &BigFloat, max_den: u64, tol: f64, prec: usize) -> Option<BigRational> {
    let p = prec + 32;
    let neg = x.is_negative();
    let mut rem = if neg { x.neg() } else { x.clone() };
    let one = BigFloat::from_u64(1, p);
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut best: Option<BigRational> = None;
    for _ in 0..64 {
        let a_f = rem.floor();
        let a = bf_floor_to_bigint(&a_f)?;
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        let cand = BigRational::new(h2.clone(), k2.clone());
        let signed = if neg { -cand.clone() } else { cand.clone() };
        let diff = bf_from_rational(&signed, p).sub(x, p, RM);
        let d = bf_to_f64(&diff).abs();
        best = Some(signed);
        if d <= tol {
            return best;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = rem.sub(&a_f, p, RM);
        if frac.is_zero() {
            break;
        }
        rem = one.div(&frac, p, RM);
    }
    best.filter(|b| {
        let diff = bf_from_rational(b, p).sub(x, p, RM);
        bf_to_f64(&diff).abs() <= tol
    })
}

fn bf_floor_to_bigint(x: &BigFloat) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::from(0));
    }
    let (words, _bits, sign, exp, _) = x.as_raw_parts()?;
    if exp <= 0 {
        return Some(BigInt::from(0));
    }
    // mantissa = sum words[i] 2^(64 i), value = mantissa * 2^(exp - 64 len)
    let mut m = BigInt::from(0);
    for w in words.iter().rev() {
        m = (m << 64) + BigInt::from(*w);
    }
    let shift = exp as i64 - 64 * words.len() as i64;
    let v = if shift >= 0 { m << (shift as usize) } else { m >> ((-shift) as usize) };
    Some(if sign == Sign::Neg { -v } else { v })
}

impl fmt::Display for FloatC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        let eps = self.eps;
        if im.abs() < eps {
            write!(f, "{:.17e}", re)
        } else if re.abs() < eps {
            write!(f, "{:.17e}*i", im)
        } else if im < 0.0 {
            write!(f, "({:.17e} - {:.17e}*i)", re, -im)
        } else {
            write!(f, "({:.17e} + {:.17e}*i)", re, im)
        }
    }
}

impl PartialEq for FloatC {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let r = BigRational::new(BigInt::from(-13), BigInt::from(12));
        let x = bf_from_rational(&r, 128);
        assert!((bf_to_f64(&x) + 13.0 / 12.0).abs() < 1e-15);
        let back = best_rational(&x, 1_000_000, 1e-30, 128).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn sqrt_precision() {
        let two = FloatC::from_f64(2.0, 0.0);
        let s = two.sqrt();
        let sq = s.mul(&s).sub(&two);
        assert!(sq.is_zero());
        assert!(bf_to_f64(&sq.re).abs() < 1e-36);
        let m = FloatC::from_f64(-4.0, 0.0).sqrt();
        assert_eq!(m.to_f64(), (0.0, 2.0));
    }

    #[test]
    fn floor_big() {
        let x = BigFloat::from_f64(123456.75, 128);
        assert_eq!(bf_floor_to_bigint(&x.floor()).unwrap(), BigInt::from(123456));
    }
}
