//! Degree-two maps `H^2 -> H^5` in the normal forms (I) and (II): the witness construction and
//! the pipeline to an equivalent polynomial ball map.

use num_rational::BigRational;
use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::criterion::{check_pair, polynomial_representative, CriterionError, Representative, WitnessPair};
use crate::hermitian::check_proper;
use crate::poly::upoly::simplest_between;
use crate::poly::{Poly, UPoly};
use crate::projective::{cayley_hyperplane, Direction, Model};
use crate::ratmap::RationalMap;
use crate::scalar::Radical;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormalCase {
    I,
    II,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum Degree2Error {
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("operation needs case {0:?}")]
    WrongCase(NormalCase),
    #[error("no y < 0 with J(y) < 0 was bracketed")]
    Bracket,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Criterion(#[from] CriterionError),
}

impl From<crate::ratmap::MapError> for Degree2Error {
    fn from(e: crate::ratmap::MapError) -> Self {
        Degree2Error::Criterion(e.into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormParams {
    case: NormalCase,
    c1: Scalar,
    e1: Scalar,
    e2: Scalar,
    c3: Scalar,
}

impl NormalFormParams {
    /// Case (I): `-e2 = 1/4 + c1^2`, `c1 > 0`.
    pub fn case1(c1: Scalar) -> Result<Self, Degree2Error> {
        if !c1.is_positive() {
            return Err(Degree2Error::Constraint("c1 must be a positive real".into()));
        }
        let e2 = -(&Scalar::ratio(1, 4) + &(&c1 * &c1));
        Ok(NormalFormParams { case: NormalCase::I, c1, e1: Scalar::zero(), e2, c3: Scalar::zero() })
    }

    /// Case (II): `e2 = -e1 - 1/4 - c1^2` and `c3 = sqrt(e1 e2)`, with `e1, e2 < 0 < c1`.
    pub fn case2(e1: Scalar, c1: Scalar) -> Result<Self, Degree2Error> {
        if !c1.is_positive() {
            return Err(Degree2Error::Constraint("c1 must be a positive real".into()));
        }
        if !e1.is_negative() {
            return Err(Degree2Error::Constraint("e1 must be a negative real".into()));
        }
        let e2 = &(&-&e1 - &Scalar::ratio(1, 4)) - &(&c1 * &c1);
        if !e2.is_negative() {
            return Err(Degree2Error::Constraint(format!("derived e2 = {e2} must be negative")));
        }
        let c3 = (&e1 * &e2).sqrt();
        if !c3.is_positive() {
            return Err(Degree2Error::Constraint("c3 = sqrt(e1 e2) must be positive".into()));
        }
        Ok(NormalFormParams { case: NormalCase::II, c1, e1, e2, c3 })
    }

    pub fn case(&self) -> NormalCase {
        self.case
    }

    pub fn c1(&self) -> &Scalar {
        &self.c1
    }

    /// Zero in case (I).
    pub fn e1(&self) -> &Scalar {
        &self.e1
    }

    pub fn e2(&self) -> &Scalar {
        &self.e2
    }

    /// Zero in case (I).
    pub fn c3(&self) -> &Scalar {
        &self.c3
    }

    pub fn is_exact(&self) -> bool {
        [&self.c1, &self.e1, &self.e2, &self.c3].iter().all(|s| s.is_exact())
    }

    fn require(&self, case: NormalCase) -> Result<(), Degree2Error> {
        if self.case == case {
            Ok(())
        } else {
            Err(Degree2Error::WrongCase(case))
        }
    }
}

/// The Siegel-model map `(f, phi1, phi2, phi3, g)` of the normal form.
pub fn build_normal_form(p: &NormalFormParams) -> RationalMap {
    let z = Poly::var(2, 0);
    let w = Poly::var(2, 1);
    let zw = z.mul(&w);
    let w2 = w.mul(&w);
    let half_i = &Scalar::ratio(1, 2) * &Scalar::i();
    let ie1 = &Scalar::i() * &p.e1;
    let one = Poly::one(2);
    let f = z.add(&zw.scale(&(&half_i + &ie1)));
    let phi1 = z.mul(&z);
    let phi2 = zw.scale(&p.c1);
    let phi3 = w2.scale(&p.c3);
    let g = w.add(&w2.scale(&ie1));
    let q = one.add(&w.scale(&ie1)).add(&w2.scale(&p.e2));
    RationalMap::new(vec![f, phi1, phi2, phi3, g], q, Model::Siegel).expect("five components in two variables")
}

/// `mu = (0, -sqrt|e2| i)`, `lambda = (0, 0, 0, 0, -2 sqrt|e2| i)`.
pub fn case1_witness(p: &NormalFormParams) -> Result<WitnessPair, Degree2Error> {
    p.require(NormalCase::I)?;
    let s = (-&p.e2).sqrt();
    let mu2 = -(&s * &Scalar::i());
    let l5 = &Scalar::from_i64(2) * &mu2;
    let z = Scalar::zero();
    Ok(WitnessPair::from_coefficients(
        &[z.clone(), mu2],
        &[z.clone(), z.clone(), z.clone(), z, l5],
        Scalar::one(),
        Model::Siegel,
    )?)
}

/// `lambda` solving the case (II) identity for given `mu1, mu2`.
pub fn case2_lambdas(p: &NormalFormParams, mu1: &Scalar, mu2: &Scalar) -> Result<Vec<Scalar>, Degree2Error> {
    p.require(NormalCase::II)?;
    let i = Scalar::i();
    let two = Scalar::from_i64(2);
    let l1 = &two * mu1;
    let l2 = mu1 * mu1;
    let one_2e1 = &Scalar::one() + &(&two * &p.e1);
    let l3 = &(&(&-&(&i * &one_2e1) * mu1) + &(&(&two * mu1) * mu2)) / &p.c1;
    let l4 = &(&(&(mu2 * mu2) - &p.e2) - &(&(&(&two * &i) * &p.e1) * mu2)) - &(&p.e1 * &p.e1);
    let l4 = &l4 / &p.c3;
    let l5 = &(&two * mu2) - &(&i * &p.e1);
    Ok(vec![l1, l2, l3, l4, l5])
}

/// `J(y) = (8y - 4 e1) e1 e2 + ((y - e1)^2 + e2)^2` as a polynomial in `y`.
pub fn j_poly(p: &NormalFormParams) -> Result<UPoly, Degree2Error> {
    p.require(NormalCase::II)?;
    let lin = UPoly::new(vec![-&p.e1, Scalar::one()]);
    let inner = lin.mul(&lin).add(&UPoly::new(vec![p.e2.clone()]));
    let e12 = &p.e1 * &p.e2;
    let first = UPoly::new(vec![&Scalar::from_i64(-4) * &p.e1, Scalar::from_i64(8)]).scale(&e12);
    Ok(first.add(&inner.mul(&inner)))
}

pub fn j_value(p: &NormalFormParams, y: &Scalar) -> Result<Scalar, Degree2Error> {
    Ok(j_poly(p)?.eval(y))
}

/// The chosen critical point of `J` and the value of `y` used for the witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Y0 {
    /// Isolating interval of the critical point (`lo == hi` when it is rational).
    pub lo: Scalar,
    pub hi: Scalar,
    /// The root itself, when rational.
    pub exact_root: Option<Scalar>,
    /// The `y < 0` used downstream: the rational root, or a rational point of the isolating
    /// interval where `J < 0`, or a float root for non-exact parameters.
    pub y: Scalar,
    pub j: Scalar,
}

/// A negative critical point of `J` with `J < 0`: negative real roots of `J'`, nearest to zero
/// first (the root bracketed between `J'(-inf) < 0` and `J'(0) > 0` is among them).
pub fn find_y0(p: &NormalFormParams) -> Result<Y0, Degree2Error> {
    let j = j_poly(p)?;
    let dj = j.derivative();
    if let Some(roots) = dj.real_roots_exact(96) {
        let mut neg: Vec<_> = roots.into_iter().filter(|r| r.hi.is_negative()).collect();
        neg.sort_by_key(|r| std::cmp::Reverse(r.midpoint()));
        for r in &neg {
            let (y, exact_root) = match &r.exact {
                Some(x) => (x.clone(), Some(Scalar::rational(x.clone()))),
                None => {
                    let y = interior_rational(&j, &r.lo, &r.hi);
                    let y = if j.eval(&Scalar::rational(y.clone())).is_negative() {
                        low_radical_point(p, &j, &y).unwrap_or(y)
                    } else {
                        y
                    };
                    (y, None)
                }
            };
            let ys = Scalar::rational(y);
            let jv = j.eval(&ys);
            if jv.is_negative() {
                return Ok(Y0 {
                    lo: Scalar::rational(r.lo.clone()),
                    hi: Scalar::rational(r.hi.clone()),
                    exact_root,
                    y: ys,
                    j: jv,
                });
            }
        }
        return Err(Degree2Error::Bracket);
    }
    // Float parameters: real roots of J' in f64, refined by Newton steps in the float backend.
    let djf = UPoly::new(dj.coeffs().iter().map(Scalar::to_float).collect());
    let d2 = djf.derivative();
    let mut neg: Vec<f64> = djf.real_roots_f64().into_iter().filter(|&r| r < 0.0).collect();
    neg.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for r in neg {
        let mut y = Scalar::from_f64(r, 0.0);
        for _ in 0..6 {
            let step = &djf.eval(&y) / &d2.eval(&y);
            y = &y - &step.re();
        }
        let jv = j.eval(&y);
        if jv.is_negative() && y.is_negative() {
            return Ok(Y0 { lo: y.clone(), hi: y.clone(), exact_root: None, y, j: jv });
        }
    }
    Err(Degree2Error::Bracket)
}

/// The simplest rational in `[lo, hi]` with `J < 0`, bisecting towards the midpoint.
fn interior_rational(j: &UPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let s = simplest_between(lo, hi);
    if j.eval(&Scalar::rational(s.clone())).is_negative() {
        return s;
    }
    (lo + hi) / BigRational::from_integer(2.into())
}

/// Distinct primes under the square roots needed to send both witness hyperplanes to infinity
/// (`sqrt|a|^2` and `sqrt(1 - |a|^2)` for each ball form), together with those of `c3`.
fn radical_cost(p: &NormalFormParams, y: &Scalar) -> Option<usize> {
    let w = case2_witness(p, y).ok()?;
    let mut primes: BTreeSet<u64> = p.c3.as_radical().map(|r| r.primes()).unwrap_or_default();
    for h in [w.h(), w.h_prime()] {
        let form = cayley_hyperplane(h, Direction::SiegelToBall).ball_form();
        let n = form.len() - 1;
        let inv = form[n].inv()?;
        let s = form[..n].iter().fold(Scalar::zero(), |acc, c| &acc + &(c * &inv).abs_sqr());
        for r in [s.clone(), &Scalar::one() - &s] {
            primes.extend(Radical::sqrt_rational(&r.as_rational()?)?.primes());
        }
    }
    Some(primes.len())
}

/// A point `y = -(a/b)^2` with `J(y) < 0`, near the float critical point, minimizing
/// [`radical_cost`] and then the height of `y`.
fn low_radical_point(p: &NormalFormParams, j: &UPoly, y0: &BigRational) -> Option<BigRational> {
    let y0f = y0.to_f64()?;
    let root = (-y0f).sqrt();
    let mut best: Option<((usize, i64), BigRational)> = None;
    for b in 1i64..=24 {
        let centre = (root * b as f64).round() as i64;
        for a in (centre - 4).max(1)..=centre + 4 {
            let y = -BigRational::new((a * a).into(), (b * b).into());
            let ys = Scalar::rational(y.clone());
            if !j.eval(&ys).is_negative() {
                continue;
            }
            let Some(cost) = radical_cost(p, &ys) else { continue };
            let key = (cost, a.max(b));
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, y));
            }
        }
    }
    best.map(|(_, y)| y)
}

/// `mu = (0, i y)` with the matching `lambda` and `c = 1`.
pub fn case2_witness(p: &NormalFormParams, y: &Scalar) -> Result<WitnessPair, Degree2Error> {
    let mu2 = &Scalar::i() * y;
    let lambda = case2_lambdas(p, &Scalar::zero(), &mu2)?;
    Ok(WitnessPair::from_coefficients(&[Scalar::zero(), mu2], &lambda, Scalar::one(), Model::Siegel)?)
}

/// Output of the normal-form pipeline.
#[derive(Clone, Debug)]
pub struct Polynomialized {
    pub params: NormalFormParams,
    /// The Siegel-model normal form.
    pub f: RationalMap,
    /// Case (II) only.
    pub y0: Option<Y0>,
    pub witness: WitnessPair,
    pub representative: Representative,
}

impl Polynomialized {
    /// The polynomial ball map `G`.
    pub fn g(&self) -> &RationalMap {
        &self.representative.g
    }

    pub fn is_exact(&self) -> bool {
        self.representative.exact
    }
}

/// Normal form, witness (`mu = (0, i y0)` in case (II)), Cayley transport, hyperplanes to
/// infinity, conjugation, and verification of the result.
pub fn polynomialize(p: &NormalFormParams, tol: f64) -> Result<Polynomialized, Degree2Error> {
    let f = build_normal_form(p);
    let (witness, y0) = match p.case {
        NormalCase::I => (case1_witness(p)?, None),
        NormalCase::II => {
            let y0 = find_y0(p)?;
            (case2_witness(p, &y0.y)?, Some(y0))
        }
    };
    let fh = f.projectivize();
    let identity_ok = if witness.is_exact() && fh.is_exact() {
        check_pair(&fh, &witness)
    } else {
        crate::criterion::pair_residual(&fh, witness.h(), witness.h_prime()) < tol
    };
    if !identity_ok {
        return Err(Degree2Error::Verification("the witness does not satisfy the criterion identity".into()));
    }
    let representative = polynomial_representative(&f, &witness, tol)?;
    if !representative.g.denominator().is_constant() {
        return Err(Degree2Error::Verification("denominator of G is not constant".into()));
    }
    if representative.exact && !check_proper(&representative.g, 16, 0).is_proper() {
        return Err(Degree2Error::Verification("G is not proper".into()));
    }
    Ok(Polynomialized { params: p.clone(), f, y0, witness, representative })
}

/// `g(y) = -4 e1 + 8 y + (y^2 + e2 + e1^2 - 2 e1 y)^2 / c3^2`, the target disjointness quantity
/// along `mu = (0, i y)`.
pub fn target_disjointness(p: &NormalFormParams, y: &Scalar) -> Result<Scalar, Degree2Error> {
    p.require(NormalCase::II)?;
    let inner = &(&(&(y * y) + &p.e2) + &(&p.e1 * &p.e1)) - &(&(&Scalar::from_i64(2) * &p.e1) * y);
    let sq = &(&inner * &inner) / &(&p.c3 * &p.c3);
    Ok(&(&(&Scalar::from_i64(-4) * &p.e1) + &(&Scalar::from_i64(8) * y)) + &sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_scalar;
    use crate::projective::{cayley_hyperplane, Direction, Hyperplane};

    fn s(x: &str) -> Scalar {
        parse_scalar(x).unwrap()
    }

    fn ex33() -> NormalFormParams {
        NormalFormParams::case2(s("-1"), s("sqrt(13/12)")).unwrap()
    }

    #[test]
    fn derived_parameters() {
        let p = ex33();
        assert_eq!(*p.e2(), s("-1/3"));
        assert_eq!(*p.c3(), s("sqrt(3)/3"));
        let q = NormalFormParams::case1(s("1")).unwrap();
        assert_eq!(*q.e2(), s("-5/4"));
        assert!(NormalFormParams::case2(s("-1/2"), s("1/2")).is_err());
        assert!(NormalFormParams::case2(s("-2"), s("1")).is_err());
    }

    #[test]
    fn j_examples() {
        let p = ex33();
        assert_eq!(j_value(&p, &s("-2")).unwrap(), s("-32/9"));
        let e1 = p.e1().clone();
        let e2 = p.e2().clone();
        let d = &(&e1 * &e1) - &e2;
        assert_eq!(j_value(&p, &Scalar::zero()).unwrap(), &d * &d);
        let y0 = find_y0(&p).unwrap();
        assert_eq!(y0.exact_root, Some(s("-2")));
    }

    #[test]
    fn case2_lambda_examples() {
        let p = ex33();
        let l = case2_lambdas(&p, &Scalar::zero(), &s("-2*i")).unwrap();
        assert_eq!(l[3], s("-2/sqrt(3)"));
        assert_eq!(l[4], s("-3*i"));
        assert!(l[..3].iter().all(Scalar::is_zero));
    }

    #[test]
    fn example_33_pipeline() {
        let out = polynomialize(&ex33(), 1e-10).unwrap();
        assert!(out.is_exact());
        let h = out.witness.h();
        assert!(h.proj_eq(&Hyperplane::from_covector(vec![s("0"), s("-2*i"), s("1")], Model::Siegel).unwrap()));
        let hb = cayley_hyperplane(h, Direction::SiegelToBall);
        assert!(hb.proj_eq(&Hyperplane::from_ball_form(&[s("0"), s("1/3"), s("1")]).unwrap()));
        assert!(out.g().denominator().is_constant());
    }

    #[test]
    fn case1_pipeline() {
        let p = NormalFormParams::case1(s("1")).unwrap();
        let w = case1_witness(&p).unwrap();
        assert_eq!(w.mu()[1], s("-sqrt(5)/2*i"));
        let out = polynomialize(&p, 1e-10).unwrap();
        assert!(out.g().denominator().is_constant());
    }
}
