//! The hyperplane criterion for polynomial equivalence.
//!
//! A proper rational map `F` is equivalent to a polynomial map exactly when there are
//! hyperplanes `H`, `H'` missing the closed domains with `lambda . F^ = c (ell_mu)^k`, where
//! `lambda` and `mu` are the covectors of `H'` and `H`. This module builds the coefficient
//! system of that identity, runs exact forced deductions on it, searches for witnesses, and
//! assembles the polynomial representative once a witness is known.

mod decide;
mod search;
mod solve;

use serde::Serialize;

use crate::autgroup::AutError;
use crate::poly::{HomPoly, Monomial, Poly};
use crate::projective::{Hyperplane, Model};
use crate::ratmap::{MapError, ProjMap};
use crate::scalar::Scalar;

pub use decide::{decide_polynomial_equivalence, polynomial_representative, Decision, Representative};
pub use search::{search_witness, SearchConfig, SearchOutcome, WitnessSource};
pub use solve::{replay, solve_forced, solve_forced_with, Forced, InfeasibilityCert, Partial, ReplayError, Step};

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum CriterionError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not a power of a linear form")]
    NotAPower,
    #[error("hyperplane {0} meets the closed domain")]
    NotDisjoint(&'static str),
    #[error("hyperplanes must use the {0} model")]
    WrongModel(Model),
    #[error("input map is not proper: {0}")]
    Improper(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

/// Hyperplanes `H` (source) and `H'` (target) and the scale in `lambda . F^ = c ell^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPair {
    h: Hyperplane,
    h_prime: Hyperplane,
    c: Scalar,
}

impl WitnessPair {
    /// Checks that both hyperplanes share a model and miss its closed domain.
    pub fn new(h: Hyperplane, h_prime: Hyperplane, c: Scalar) -> Result<Self, CriterionError> {
        if h.model() != h_prime.model() {
            return Err(CriterionError::WrongModel(h.model()));
        }
        if !h.disjoint() {
            return Err(CriterionError::NotDisjoint("H"));
        }
        if !h_prime.disjoint() {
            return Err(CriterionError::NotDisjoint("H'"));
        }
        Ok(WitnessPair { h, h_prime, c })
    }

    /// `H = {t + sum mu_j z_j = 0}`, `H' = {t' + sum lambda_j z'_j = 0}`.
    pub fn from_coefficients(
        mu: &[Scalar],
        lambda: &[Scalar],
        c: Scalar,
        model: Model,
    ) -> Result<Self, CriterionError> {
        let mut hc = mu.to_vec();
        hc.push(Scalar::one());
        let mut hpc = lambda.to_vec();
        hpc.push(Scalar::one());
        let h = Hyperplane::from_covector(hc, model).expect("t-coefficient one");
        let hp = Hyperplane::from_covector(hpc, model).expect("t-coefficient one");
        WitnessPair::new(h, hp, c)
    }

    pub fn h(&self) -> &Hyperplane {
        &self.h
    }

    pub fn h_prime(&self) -> &Hyperplane {
        &self.h_prime
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn model(&self) -> Model {
        self.h.model()
    }

    /// `mu` of the normalized source hyperplane.
    pub fn mu(&self) -> Vec<Scalar> {
        let h = self.h.normalized();
        h.covector()[..h.n()].to_vec()
    }

    /// `lambda` of the normalized target hyperplane.
    pub fn lambda(&self) -> Vec<Scalar> {
        let h = self.h_prime.normalized();
        h.covector()[..h.n()].to_vec()
    }

    pub fn is_exact(&self) -> bool {
        self.h.covector().iter().chain(self.h_prime.covector()).all(Scalar::is_exact) && self.c.is_exact()
    }

    pub fn view(&self) -> WitnessView {
        let s = |v: &[Scalar]| v.iter().map(ToString::to_string).collect();
        WitnessView {
            model: self.model(),
            mu: s(&self.mu()),
            lambda: s(&self.lambda()),
            c: self.c.to_string(),
            h: s(self.h.covector()),
            h_prime: s(self.h_prime.covector()),
            exact: self.is_exact(),
        }
    }
}

/// Serializable form of a [`WitnessPair`].
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct WitnessView {
    pub model: Model,
    pub mu: Vec<String>,
    pub lambda: Vec<String>,
    pub c: String,
    pub h: Vec<String>,
    pub h_prime: Vec<String>,
    pub exact: bool,
}

/// `sum_j cov_j F^_j`.
pub fn linear_pullback(cov: &[Scalar], fh: &ProjMap) -> Result<HomPoly, CriterionError> {
    if cov.len() != fh.comps().len() {
        return Err(CriterionError::Dimension(format!(
            "covector has {} entries, map has {} components",
            cov.len(),
            fh.comps().len()
        )));
    }
    let nv = fh.n() + 1;
    let p = cov.iter().zip(fh.comps()).fold(
        Poly::zero(nv),
        |acc, (c, f)| {
            if c.is_zero() {
                acc
            } else {
                acc.add(&f.scale(c))
            }
        },
    );
    Ok(HomPoly::new(p, fh.degree()).expect("sum of degree-k forms"))
}

/// Decides `p = c ell^d`. Returns the coefficients of `ell` (normalized so that one
/// coefficient is one, preferring the last variable) and `c`.
pub fn power_of_linear(p: &Poly, d: u32) -> Result<(Vec<Scalar>, Scalar), CriterionError> {
    let nv = p.nvars();
    if p.is_zero() || d == 0 {
        return Err(CriterionError::NotAPower);
    }
    let pure = |i: usize| {
        let mut e = vec![0; nv];
        e[i] = d;
        p.coeff(&Monomial(e))
    };
    let i = (0..nv).rev().find(|&i| !pure(i).is_zero()).ok_or(CriterionError::NotAPower)?;
    let ci = pure(i);
    let den = (&ci * &Scalar::from_i64(d as i64)).inv().ok_or(CriterionError::NotAPower)?;
    let ell: Vec<Scalar> = (0..nv)
        .map(|j| {
            if j == i {
                return Scalar::one();
            }
            let mut e = vec![0; nv];
            e[i] = d - 1;
            e[j] += 1;
            &p.coeff(&Monomial(e)) * &den
        })
        .collect();
    let expanded = Poly::linear(&ell).pow(d).scale(&ci);
    if expanded.sub(p).is_zero() {
        Ok((ell, ci))
    } else {
        Err(CriterionError::NotAPower)
    }
}

/// The scale `c` with `lambda . F^ = c ell_mu^k`, if the identity holds exactly.
pub fn pair_scale(fh: &ProjMap, h: &Hyperplane, h_prime: &Hyperplane) -> Option<Scalar> {
    let pull = linear_pullback(h_prime.covector(), fh).ok()?;
    if h.covector().len() != fh.n() + 1 {
        return None;
    }
    let target = Poly::linear(h.covector()).pow(fh.degree());
    let (m, ct) = target.leading()?;
    let c = &pull.coeff(m) / ct;
    (!c.is_zero() && pull.sub(&target.scale(&c)).is_zero()).then_some(c)
}

/// The criterion identity for a pair, as an exact polynomial identity.
pub fn check_pair(fh: &ProjMap, w: &WitnessPair) -> bool {
    pair_scale(fh, &w.h, &w.h_prime).is_some()
}

/// Relative residual `|P - c L| / |P|` of the identity with the best `c`, in f64.
pub fn pair_residual(fh: &ProjMap, h: &Hyperplane, h_prime: &Hyperplane) -> f64 {
    let Ok(pull) = linear_pullback(h_prime.covector(), fh) else {
        return f64::INFINITY;
    };
    let target = Poly::linear(h.covector()).pow(fh.degree());
    let monos = Monomial::all_of_degree(fh.n() + 1, fh.degree());
    let p: Vec<_> = monos.iter().map(|m| pull.coeff(m).to_c64()).collect();
    let l: Vec<_> = monos.iter().map(|m| target.coeff(m).to_c64()).collect();
    let ll: f64 = l.iter().map(|x| x.norm_sqr()).sum();
    let pn: f64 = p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if ll == 0.0 || pn == 0.0 {
        return f64::INFINITY;
    }
    let c = l.iter().zip(&p).map(|(a, b)| a.conj() * b).sum::<num_complex::Complex64>() / ll;
    let r: f64 = l.iter().zip(&p).map(|(a, b)| (b - c * a).norm_sqr()).sum::<f64>().sqrt();
    r / pn
}

/// Index layout of the unknowns `lambda_1..lambda_N, mu_1..mu_n, c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknowns {
    pub n: usize,
    pub big_n: usize,
}

impl Unknowns {
    pub fn count(&self) -> usize {
        self.big_n + self.n + 1
    }

    pub fn lambda(&self, j: usize) -> usize {
        j
    }

    pub fn mu(&self, j: usize) -> usize {
        self.big_n + j
    }

    pub fn c(&self) -> usize {
        self.big_n + self.n
    }

    pub fn is_mu(&self, u: usize) -> bool {
        (self.big_n..self.big_n + self.n).contains(&u)
    }

    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = (1..=self.big_n).map(|j| format!("lambda{j}")).collect();
        v.extend((1..=self.n).map(|j| format!("mu{j}")));
        v.push("c".into());
        v
    }
}

/// One coefficient equation: `coeff_m(lambda . F^) - c coeff_m(ell_mu^k) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub monomial: Monomial,
    pub poly: Poly,
}

/// The coefficient system with `lambda_0 = mu_0 = 1` pinned.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    pub unknowns: Unknowns,
    pub degree: u32,
    pub model: Model,
    pub equations: Vec<Equation>,
    pub map_names: Vec<String>,
}

impl CoefficientSystem {
    pub fn equation(&self, m: &Monomial) -> Option<&Equation> {
        self.equations.iter().find(|e| &e.monomial == m)
    }

    pub fn unknown_names(&self) -> Vec<String> {
        self.unknowns.names()
    }

    pub fn format_equation(&self, p: &Poly) -> String {
        format!("{} = 0", p.format(&self.unknown_names()))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        m.format(&self.map_names)
    }

    pub fn describe(&self) -> Vec<String> {
        self.equations
            .iter()
            .map(|e| format!("[{}] {}", self.format_monomial(&e.monomial), self.format_equation(&e.poly)))
            .collect()
    }
}

/// Variable names `z, w, t` for `n = 2`, otherwise `z1, ..., z_{n-1}, w, t`.
pub fn map_variable_names(n: usize) -> Vec<String> {
    let mut v: Vec<String> = if n == 2 {
        vec!["z".into(), "w".into()]
    } else {
        let mut v: Vec<String> = (1..n).map(|j| format!("z{j}")).collect();
        v.push("w".into());
        v
    };
    v.push("t".into());
    v
}

pub(crate) fn multinomial(k: u32, m: &Monomial) -> i64 {
    let fact = |x: u32| (1..=x as i64).product::<i64>();
    m.0.iter().fold(fact(k), |acc, &e| acc / fact(e))
}

/// Builds the coefficient equations of `sum_j lambda_j F^_j + F^_last = c (t + sum mu_i x_i)^k`.
pub fn coefficient_system(fh: &ProjMap, model: Model) -> CoefficientSystem {
    let n = fh.n();
    let u = Unknowns { n, big_n: fh.big_n() };
    let nu = u.count();
    let k = fh.degree();
    let equations = Monomial::all_of_degree(n + 1, k)
        .into_iter()
        .map(|m| {
            let mut p = Poly::constant(nu, fh.last().coeff(&m));
            for (j, f) in fh.comps()[..fh.big_n()].iter().enumerate() {
                let a = f.coeff(&m);
                if !a.is_zero() {
                    p = p.add(&Poly::var(nu, u.lambda(j)).scale(&a));
                }
            }
            let mut e = vec![0; nu];
            for (i, &x) in m.0[..n].iter().enumerate() {
                e[u.mu(i)] = x;
            }
            e[u.c()] = 1;
            p = p.sub(&Poly::term(Monomial(e), Scalar::from_i64(multinomial(k, &m))));
            Equation { monomial: m, poly: p }
        })
        .collect();
    CoefficientSystem { unknowns: u, degree: k, model, equations, map_names: map_variable_names(n) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn names() -> Vec<String> {
        map_variable_names(2)
    }

    fn hp(src: &[&str]) -> ProjMap {
        ProjMap::new(src.iter().map(|s| parse_poly(s, &names()).unwrap()).collect()).unwrap()
    }

    fn s(x: &str) -> Scalar {
        crate::poly::parse_scalar(x).unwrap()
    }

    #[test]
    fn pullback_examples() {
        let f = hp(&["z*t", "3/5*w*t", "4/5*z*w", "4/5*w^2", "t^2"]);
        let mut cov = vec![Scalar::zero(); 5];
        cov[4] = Scalar::one();
        assert_eq!(*linear_pullback(&cov, &f).unwrap().poly(), parse_poly("t^2", &names()).unwrap());
        assert!(linear_pullback(&cov[..4], &f).is_err());
    }

    #[test]
    fn power_of_linear_examples() {
        let p = parse_poly("t^2 + 4*i*t*w - 4*w^2", &names()).unwrap();
        let (ell, c) = power_of_linear(&p, 2).unwrap();
        assert_eq!(ell, vec![s("0"), s("2*i"), s("1")]);
        assert!(c.is_one());
        assert_eq!(power_of_linear(&parse_poly("z*w", &names()).unwrap(), 2), Err(CriterionError::NotAPower));
        let cube = parse_poly("(t - w/2)^3", &names()).unwrap();
        let (ell, _) = power_of_linear(&cube, 3).unwrap();
        assert_eq!(ell, vec![s("0"), s("-1/2"), s("1")]);
    }

    #[test]
    fn polynomial_maps_pass_at_infinity() {
        let f = hp(&["z^2", "sqrt(2)*z*w", "w^2", "t^2"]);
        let w = WitnessPair::new(
            Hyperplane::at_infinity(2, Model::Ball),
            Hyperplane::at_infinity(3, Model::Ball),
            Scalar::one(),
        )
        .unwrap();
        assert!(check_pair(&f, &w));
        assert!(pair_residual(&f, w.h(), w.h_prime()) < 1e-15);
    }

    #[test]
    fn system_shape() {
        let f = hp(&["z*t", "w*t", "t^2"]);
        let sys = coefficient_system(&f, Model::Ball);
        assert_eq!(sys.equations.len(), 6);
        assert_eq!(sys.unknowns.count(), 5);
        let t2 = Monomial(vec![0, 0, 2]);
        assert_eq!(sys.format_equation(&sys.equation(&t2).unwrap().poly), "-c + 1 = 0");
    }
}
