//! Hermitian forms in `(z, conj z)` and the sphere-divisibility properness test.
//!
//! A form in `n` complex variables is stored as a polynomial in `2n` variables
//! `z_1..z_n, w_1..w_n`, with `w_j` standing for `conj(z_j)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::poly::upoly::{restrict_to_line_c64, roots_of_c64};
use crate::poly::Poly;
use crate::projective::Model;
use crate::ratmap::RationalMap;
use crate::sampling::BallSampler;
use crate::scalar::{recognize_rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct HermForm {
    n: usize,
    poly: Poly,
}

impl HermForm {
    pub fn new(n: usize, poly: Poly) -> Self {
        assert_eq!(poly.nvars(), 2 * n, "a form in n variables lives in 2n variables");
        HermForm { n, poly }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// `sum_j z_j w_j - 1`.
    pub fn sphere(n: usize) -> HermForm {
        let mut p = Poly::constant(2 * n, Scalar::from_i64(-1));
        for j in 0..n {
            p = p.add(&Poly::var(2 * n, j).mul(&Poly::var(2 * n, n + j)));
        }
        HermForm { n, poly: p }
    }

    /// `f(z) conj(g)(w)` for holomorphic `f, g` in `n` variables.
    pub fn product(f: &Poly, g: &Poly) -> HermForm {
        let n = f.nvars();
        let zs: Vec<usize> = (0..n).collect();
        let ws: Vec<usize> = (n..2 * n).collect();
        let a = f.embed(2 * n, &zs);
        let b = g.conj_coeffs().embed(2 * n, &ws);
        HermForm { n, poly: a.mul(&b) }
    }

    /// Swapping `z` and `w` and conjugating coefficients fixes the form.
    pub fn is_hermitian_symmetric(&self) -> bool {
        let n = self.n;
        let swap: Vec<usize> = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        self.poly.conj_coeffs().embed(2 * n, &swap) == self.poly
    }

    /// Value at `w = conj(z)`.
    pub fn eval_c64(&self, z: &[Complex64]) -> Complex64 {
        let mut x = z.to_vec();
        x.extend(z.iter().map(|v| v.conj()));
        self.poly.eval_c64(&x)
    }

    pub fn add(&self, o: &HermForm) -> HermForm {
        HermForm { n: self.n, poly: self.poly.add(&o.poly) }
    }

    pub fn sub(&self, o: &HermForm) -> HermForm {
        HermForm { n: self.n, poly: self.poly.sub(&o.poly) }
    }
}

/// `sum_j P_j(z) conj(P_j)(w) - q(z) conj(q)(w)`.
pub fn norm_defect(f: &RationalMap) -> HermForm {
    let n = f.n();
    let q = f.denominator();
    let init = HermForm::product(q, q);
    let mut h = HermForm { n, poly: init.poly.neg() };
    for p in f.numerators() {
        h = h.add(&HermForm::product(p, p));
    }
    h
}

/// Divisibility by `sum z_j w_j - 1`.
pub fn vanishes_on_sphere(h: &HermForm) -> bool {
    h.poly.exact_divide(&HermForm::sphere(h.n).poly).is_ok()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Properness {
    Proper,
    NotSpherePreserving,
    DenominatorVanishes { point: Vec<String> },
}

#[derive(Clone, Debug, Serialize)]
pub struct ProperReport {
    #[serde(flatten)]
    pub verdict: Properness,
    /// Number of sampled lines through the closed ball used for the denominator.
    pub denominator_lines: usize,
    /// The denominator test is probabilistic (sampling), never a certificate.
    pub denominator_sampled: bool,
}

impl ProperReport {
    pub fn is_proper(&self) -> bool {
        self.verdict == Properness::Proper
    }
}

/// Denominator zeros on the closed ball (via random lines through quasi-random points), then
/// sphere divisibility of the norm defect. Siegel maps are first transported to the ball.
pub fn check_proper(f: &RationalMap, samples: usize, seed: u64) -> ProperReport {
    let fb = match f.model() {
        Model::Ball => f.clone(),
        Model::Siegel => f.cayley_transport().expect("siegel"),
    };
    let lines = if fb.denominator().is_constant() { 0 } else { samples };
    if let Some(point) = denominator_zero(fb.denominator(), lines, seed) {
        return ProperReport {
            verdict: Properness::DenominatorVanishes { point },
            denominator_lines: lines,
            denominator_sampled: true,
        };
    }
    let verdict =
        if vanishes_on_sphere(&norm_defect(&fb)) { Properness::Proper } else { Properness::NotSpherePreserving };
    ProperReport { verdict, denominator_lines: lines, denominator_sampled: true }
}

fn denominator_zero(q: &Poly, lines: usize, seed: u64) -> Option<Vec<String>> {
    let n = q.nvars();
    let mut points = BallSampler::new(n, seed);
    let mut dirs = BallSampler::new(n, seed ^ 0x9e37_79b9_7f4a_7c15);
    let scale = q.max_abs_coeff().max(1.0);
    for _ in 0..lines {
        let a = points.ball();
        let d = dirs.sphere();
        if q.eval_c64(&a).norm() < 1e-12 * scale {
            return Some(describe_point(q, &a));
        }
        let coeffs = restrict_to_line_c64(q, &a, &d);
        for s in roots_of_c64(&coeffs) {
            let z: Vec<Complex64> = a.iter().zip(&d).map(|(ai, di)| ai + s * di).collect();
            let r2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
            if r2 <= 1.0 + 1e-9 && q.eval_c64(&z).norm() < 1e-8 * scale {
                return Some(describe_point(q, &z));
            }
        }
    }
    None
}

/// Formats a zero. Coordinates are snapped to nearby small rationals (or to 0) and the snapped
/// point is reported instead when it is an exact zero in the closed ball.
fn describe_point(q: &Poly, z: &[Complex64]) -> Vec<String> {
    if q.is_exact() {
        let snapped: Vec<Scalar> = z
            .iter()
            .map(|v| {
                let part = |x: f64| recognize_rational(&Scalar::from_f64(x, 0.0), 1000, 1e-7);
                match (part(v.re), part(v.im)) {
                    (Some(re), Some(im)) => Scalar::gauss(re, im),
                    _ => Scalar::zero(),
                }
            })
            .collect();
        let r2 = snapped.iter().fold(Scalar::zero(), |acc, c| &acc + &c.abs_sqr());
        if q.eval(&snapped).is_zero() && !(&r2 - &Scalar::one()).is_positive() {
            return snapped.iter().map(ToString::to_string).collect();
        }
    }
    z.iter().map(|v| format!("{v}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn nm() -> Vec<String> {
        vec!["z".into(), "w".into()]
    }

    fn map(p: &[&str], q: &str) -> RationalMap {
        RationalMap::new(
            p.iter().map(|s| parse_poly(s, &nm()).unwrap()).collect(),
            parse_poly(q, &nm()).unwrap(),
            Model::Ball,
        )
        .unwrap()
    }

    #[test]
    fn defect_of_identity() {
        let f = RationalMap::new(vec![Poly::var(1, 0)], Poly::one(1), Model::Ball).unwrap();
        let h = norm_defect(&f);
        assert_eq!(h, HermForm::sphere(1));
        assert!(h.is_hermitian_symmetric());
        assert!(vanishes_on_sphere(&h));
        let plus = HermForm::new(1, h.poly().add(&Poly::constant(2, Scalar::from_i64(2))));
        assert!(!vanishes_on_sphere(&plus));
    }

    #[test]
    fn whitney_type_map_defect() {
        let f = map(&["z^2", "sqrt(2)*z*w", "w^2"], "1");
        let h = norm_defect(&f);
        // (z w1 + w w2)^2 - 1 in the variables z, w, w1 = conj z, w2 = conj w
        let v: Vec<String> = ["z", "w", "a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(*h.poly(), parse_poly("(z*a + w*b)^2 - 1", &v).unwrap());
        assert!(vanishes_on_sphere(&h));
    }

    #[test]
    fn properness_examples() {
        let f = map(&["z", "3/5*w", "4/5*z*w", "4/5*w^2"], "1");
        assert!(check_proper(&f, 16, 1).is_proper());
        let g = map(&["z", "1.01*w"], "1");
        assert_eq!(check_proper(&g, 16, 1).verdict, Properness::NotSpherePreserving);
        let h = map(&["z", "w"], "1 - 2*w");
        match check_proper(&h, 16, 1).verdict {
            Properness::DenominatorVanishes { point } => assert_eq!(point[1], "1/2"),
            other => panic!("{other:?}"),
        }
    }
}
