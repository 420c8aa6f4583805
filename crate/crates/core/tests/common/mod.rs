#![allow(dead_code)]

use ballmap::autgroup::random_exact_automorphism;
use ballmap::poly::Poly;
use ballmap::projective::Model;
use ballmap::ratmap::{conjugate_by_autos, RationalMap};
use ballmap::scalar::Scalar;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

const TRIPLES: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

/// Proper polynomial map `B^2 -> B^N`, `N <= 5`, degree `<= 3`, built from the identity by
/// tensoring single components with `(z, w)` and mixing components by exact rotations.
pub fn random_polynomial_map(rng: &mut impl Rng) -> RationalMap {
    let z = Poly::var(2, 0);
    let w = Poly::var(2, 1);
    let mut comps = vec![z.clone(), w.clone()];
    let ops = rng.gen_range(1..=3);
    for _ in 0..ops {
        let candidates: Vec<usize> = (0..comps.len()).filter(|&j| comps[j].degree() < 3).collect();
        let j = candidates[rng.gen_range(0..candidates.len())];
        let f = comps.remove(j);
        comps.push(f.mul(&z));
        comps.push(f.mul(&w));
        let i = rng.gen_range(0..comps.len());
        let k = (i + 1 + rng.gen_range(0..comps.len() - 1)) % comps.len();
        let (a, b, c) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
        let (ca, sa) = (Scalar::ratio(a, c), Scalar::ratio(b, c));
        let (fi, fk) = (comps[i].clone(), comps[k].clone());
        comps[i] = fi.scale(&ca).sub(&fk.scale(&sa));
        comps[k] = fi.scale(&sa).add(&fk.scale(&ca));
    }
    RationalMap::new(comps, Poly::one(2), Model::Ball).unwrap()
}

/// `tau o F o sigma` for random exact automorphisms, dehomogenized.
pub fn scramble(f: &RationalMap, rng: &mut impl Rng) -> RationalMap {
    let sigma = random_exact_automorphism(f.n(), rng);
    let tau = random_exact_automorphism(f.big_n(), rng);
    conjugate_by_autos(&tau, &f.projectivize(), &sigma).unwrap().dehomogenize(Model::Ball).normalized()
}

pub fn s(x: &str) -> Scalar {
    ballmap::poly::parse_scalar(x).unwrap()
}

/// Gaussian rational with numerators in `[-r, r]` and denominators in `[1, d]`.
pub fn gauss(rng: &mut impl Rng, r: i64, d: i64) -> Scalar {
    let mut part = || ballmap::scalar::q(rng.gen_range(-r..=r), rng.gen_range(1..=d));
    let re = part();
    Scalar::gauss(re, part())
}

/// Element of `Q(i, sqrt2, sqrt3)` with small Gaussian-rational coordinates.
pub fn radical(rng: &mut impl Rng) -> Scalar {
    let a = gauss(rng, 5, 4);
    let b = &gauss(rng, 3, 3) * &Scalar::sqrt_ratio(2, 1);
    let c = &gauss(rng, 3, 3) * &Scalar::sqrt_ratio(3, 1);
    &(&a + &b) + &c
}

pub fn c64(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random Gaussian-rational covector entry, returned with its exact real and imaginary parts.
pub fn gauss_parts(rng: &mut impl Rng, r: i64, d: i64) -> (BigRational, BigRational) {
    let re = ballmap::scalar::q(rng.gen_range(-r..=r), rng.gen_range(1..=d));
    let im = ballmap::scalar::q(rng.gen_range(-r..=r), rng.gen_range(1..=d));
    (re, im)
}

pub fn scalar_of(p: &(BigRational, BigRational)) -> Scalar {
    Scalar::gauss(p.0.clone(), p.1.clone())
}

fn norm2(p: &(BigRational, BigRational)) -> BigRational {
    &p.0 * &p.0 + &p.1 * &p.1
}

fn to_c(p: &(BigRational, BigRational)) -> Complex64 {
    use num_traits::ToPrimitive;
    Complex64::new(p.0.to_f64().unwrap(), p.1.to_f64().unwrap())
}

/// Independent verdict for `sum K_j z_j + K_n w + t = 0` against the closed Siegel domain
/// `Im(w conj t) >= |z'|^2`, with numeric evidence.
///
/// On `t = 1` the hyperplane is `w = -(1 + sum K_j z_j) / K_n` and `Im w - |z'|^2` is a concave
/// quadratic in `z'` whose maximum, `(Im K_n + sum |K_j|^2 / 4) / |K_n|^2`, sits at
/// `z_j = -i conj(K_j / K_n) / 2`. When `K_n = 0` the hyperplane contains `[0 : 1 : 0]`.
pub struct SiegelOracle {
    pub disjoint: bool,
    /// Largest `Im w - |z'|^2` over sampled points of the hyperplane, the maximiser included.
    pub best_sample: f64,
}

pub fn siegel_oracle(k: &[(BigRational, BigRational)], rng: &mut impl Rng, samples: usize) -> SiegelOracle {
    let n = k.len();
    let kn = &k[n - 1];
    if norm2(kn).is_zero() {
        return SiegelOracle { disjoint: false, best_sample: f64::INFINITY };
    }
    let four = BigRational::from_integer(4.into());
    let s = k[..n - 1].iter().fold(BigRational::zero(), |acc, c| acc + norm2(c));
    let value = &kn.1 * &four + s;
    let kc: Vec<Complex64> = k.iter().map(to_c).collect();
    let phi = |z: &[Complex64]| {
        let lin: Complex64 = z.iter().zip(&kc).map(|(a, b)| a * b).sum();
        let w = -(Complex64::new(1.0, 0.0) + lin) / kc[n - 1];
        w.im - z.iter().map(|v| v.norm_sqr()).sum::<f64>()
    };
    let centre: Vec<Complex64> =
        kc[..n - 1].iter().map(|c| Complex64::new(0.0, -0.5) * (c / kc[n - 1]).conj()).collect();
    let mut best = phi(&centre);
    for _ in 0..samples {
        let scale = 10f64.powf(rng.gen_range(-3.0..1.0));
        let z: Vec<Complex64> = centre.iter().map(|c| c + c64(rng, scale)).collect();
        best = best.max(phi(&z));
    }
    SiegelOracle { disjoint: value.is_negative(), best_sample: best }
}

/// Independent verdict for `sum c_j z_j + c_t t = 0` against the closed ball: the nearest point
/// of the affine hyperplane to the origin has `|z|^2 = |c_t|^2 / sum |c_j|^2`.
pub struct BallOracle {
    pub disjoint: bool,
    /// Smallest `|z|^2` over sampled points of the hyperplane, the nearest point included.
    pub best_sample: f64,
}

pub fn ball_oracle(c: &[(BigRational, BigRational)], rng: &mut impl Rng, samples: usize) -> BallOracle {
    let n = c.len() - 1;
    let s = c[..n].iter().fold(BigRational::zero(), |acc, x| acc + norm2(x));
    let ct = norm2(&c[n]);
    if s.is_zero() {
        return BallOracle { disjoint: !ct.is_zero(), best_sample: f64::INFINITY };
    }
    let cc: Vec<Complex64> = c.iter().map(to_c).collect();
    let sf: f64 = cc[..n].iter().map(|x| x.norm_sqr()).sum();
    let nearest: Vec<Complex64> = cc[..n].iter().map(|x| -cc[n] * x.conj() / sf).collect();
    let mut best = nearest.iter().map(|v| v.norm_sqr()).sum::<f64>();
    for _ in 0..samples {
        let scale = 10f64.powf(rng.gen_range(-3.0..1.0));
        let v: Vec<Complex64> = (0..n).map(|_| c64(rng, scale)).collect();
        // project v onto the direction space sum c_j v_j = 0
        let dot: Complex64 = v.iter().zip(&cc).map(|(a, b)| a * b).sum();
        let z: Vec<Complex64> = (0..n).map(|j| nearest[j] + v[j] - cc[j].conj() * dot / sf).collect();
        best = best.min(z.iter().map(|x| x.norm_sqr()).sum());
    }
    BallOracle { disjoint: ct > s, best_sample: best }
}

/// Random polynomial with Gaussian-rational coefficients and at most `terms` terms of degree `<= deg`.
pub fn random_poly(rng: &mut impl Rng, nvars: usize, deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..rng.gen_range(1..=terms) {
        let d = rng.gen_range(0..=deg);
        let mut e = vec![0u32; nvars];
        for _ in 0..d {
            e[rng.gen_range(0..nvars)] += 1;
        }
        p = p.add(&Poly::term(ballmap::poly::Monomial(e), gauss(rng, 6, 5)));
    }
    p
}
