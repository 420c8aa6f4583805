//! Rational ball maps `F = P / q`, their projectivizations, base loci, and conjugation by
//! automorphisms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgroup::IndefUnitary;
use crate::linalg::Matrix;
use crate::poly::upoly::quadratic_roots;
use crate::poly::{coprime_check, Coprimality, Monomial, Poly, UPoly};
use crate::projective::{cayley_inverse_matrix, cayley_matrix, Model, ProjPoint};
use crate::scalar::Scalar;

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum MapError {
    #[error("component {0} has {1} variables, expected {2}")]
    Arity(usize, usize, usize),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at the centre")]
    SingularAtCentre,
    #[error("numerators and denominator likely share a common factor")]
    CommonFactor,
    #[error("components are not homogeneous of one degree")]
    NotHomogeneous,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("map is not in the {0} model")]
    WrongModel(Model),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    n: usize,
    p: Vec<Poly>,
    q: Poly,
    model: Model,
}

impl RationalMap {
    /// Builds a map after structural checks; see [`RationalMap::validate`] for coprimality.
    pub fn new(p: Vec<Poly>, q: Poly, model: Model) -> Result<Self, MapError> {
        let n = q.nvars();
        for (j, pj) in p.iter().enumerate() {
            if pj.nvars() != n {
                return Err(MapError::Arity(j, pj.nvars(), n));
            }
        }
        if q.is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        Ok(RationalMap { n, p, q, model })
    }

    pub fn identity(n: usize) -> Self {
        RationalMap { n, p: (0..n).map(|i| Poly::var(n, i)).collect(), q: Poly::one(n), model: Model::Ball }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_n(&self) -> usize {
        self.p.len()
    }

    pub fn numerators(&self) -> &[Poly] {
        &self.p
    }

    pub fn denominator(&self) -> &Poly {
        &self.q
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn degree(&self) -> u32 {
        self.p.iter().map(Poly::degree).chain([self.q.degree()]).max().unwrap_or(0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.q.is_constant()
    }

    pub fn is_exact(&self) -> bool {
        self.p.iter().all(Poly::is_exact) && self.q.is_exact()
    }

    pub fn coprimality(&self, trials: usize, seed: u64) -> Coprimality {
        let mut all = self.p.clone();
        all.push(self.q.clone());
        coprime_check(&all, trials, seed)
    }

    /// Coprimality of `(P, q)` and, in the ball model, `q(0) != 0`.
    pub fn validate(&self, trials: usize, seed: u64) -> Result<(), MapError> {
        if self.model == Model::Ball && self.q.constant_term().is_zero() {
            return Err(MapError::SingularAtCentre);
        }
        if self.coprimality(trials, seed) == Coprimality::CommonFactorLikely {
            return Err(MapError::CommonFactor);
        }
        Ok(())
    }

    pub fn eval_c64(&self, z: &[Complex64]) -> Option<Vec<Complex64>> {
        let q = self.q.eval_c64(z);
        if q.norm() == 0.0 {
            return None;
        }
        Some(self.p.iter().map(|p| p.eval_c64(z) / q).collect())
    }

    pub fn projectivize(&self) -> ProjMap {
        let k = self.degree();
        let mut comps: Vec<Poly> = self.p.iter().map(|p| p.homogenize(k).expect("degree").into_poly()).collect();
        comps.push(self.q.homogenize(k).expect("degree").into_poly());
        ProjMap { n: self.n, comps, k }
    }

    /// Makes the denominator's first coefficient (in monomial order) equal to one.
    pub fn normalized(&self) -> RationalMap {
        let (_, c) = self.q.terms().next().expect("nonzero denominator");
        let inv = c.inv().expect("nonzero");
        RationalMap {
            n: self.n,
            p: self.p.iter().map(|p| p.scale(&inv)).collect(),
            q: self.q.scale(&inv),
            model: self.model,
        }
    }

    pub fn with_model(&self, model: Model) -> RationalMap {
        RationalMap { model, ..self.clone() }
    }

    /// Siegel-model map to the equivalent ball-model map `rho_N o F o rho_n^{-1}`.
    pub fn cayley_transport(&self) -> Result<RationalMap, MapError> {
        if self.model != Model::Siegel {
            return Err(MapError::WrongModel(Model::Siegel));
        }
        let fh = self.projectivize();
        let out = fh.compose_linear(&cayley_matrix(self.big_n()), &cayley_inverse_matrix(self.n));
        Ok(out.dehomogenize(Model::Ball).normalized())
    }

    /// Ball-model map to the Siegel-model map `rho_N^{-1} o F o rho_n`.
    pub fn cayley_transport_back(&self) -> Result<RationalMap, MapError> {
        if self.model != Model::Ball {
            return Err(MapError::WrongModel(Model::Ball));
        }
        let fh = self.projectivize();
        let out = fh.compose_linear(&cayley_inverse_matrix(self.big_n()), &cayley_matrix(self.n));
        Ok(out.dehomogenize(Model::Siegel).normalized())
    }

    /// The ball-model form of the map (identity for ball maps).
    pub fn to_ball(&self) -> RationalMap {
        match self.model {
            Model::Ball => self.clone(),
            Model::Siegel => self.cayley_transport().expect("siegel"),
        }
    }

    /// Pads with zero components up to `big_n`.
    pub fn padded(&self, big_n: usize) -> RationalMap {
        let mut p = self.p.clone();
        while p.len() < big_n {
            p.push(Poly::zero(self.n));
        }
        RationalMap { p, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap {
    n: usize,
    comps: Vec<Poly>,
    k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusScope {
    AtInfinity,
    GlobalSampled,
}

#[derive(Clone, Debug)]
pub struct BaseLocus {
    pub points: Vec<ProjPoint>,
    pub complete: bool,
}

impl ProjMap {
    /// Components in `n + 1` variables (`t` last), all homogeneous of one degree.
    pub fn new(comps: Vec<Poly>) -> Result<Self, MapError> {
        let nv = comps.first().map(Poly::nvars).ok_or(MapError::Dimension("no components".into()))?;
        if nv < 2 {
            return Err(MapError::Dimension("need at least one variable besides t".into()));
        }
        let k = comps.iter().map(Poly::degree).max().unwrap_or(0);
        for (j, c) in comps.iter().enumerate() {
            if c.nvars() != nv {
                return Err(MapError::Arity(j, c.nvars(), nv));
            }
            if c.terms().any(|(m, _)| m.degree() != k) {
                return Err(MapError::NotHomogeneous);
            }
        }
        if comps.last().unwrap().is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        Ok(ProjMap { n: nv - 1, comps, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_n(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn last(&self) -> &Poly {
        self.comps.last().unwrap()
    }

    pub fn is_exact(&self) -> bool {
        self.comps.iter().all(Poly::is_exact)
    }

    pub fn eval(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.comps.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_c64(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.comps.iter().map(|c| c.eval_c64(x)).collect()
    }

    pub fn dehomogenize(&self, model: Model) -> RationalMap {
        let p = self.comps[..self.big_n()].iter().map(Poly::dehomogenize).collect();
        let q = self.last().dehomogenize();
        RationalMap { n: self.n, p, q, model }
    }

    /// `outer o F o inner` for linear maps given by matrices.
    pub fn compose_linear(&self, outer: &Matrix, inner: &Matrix) -> ProjMap {
        let nv = self.n + 1;
        assert_eq!(inner.rows(), nv, "inner size");
        assert_eq!(outer.cols(), self.comps.len(), "outer size");
        let subs: Vec<Poly> = (0..nv).map(|i| Poly::linear(&inner.row(i))).collect();
        let inner_applied: Vec<Poly> = self.comps.iter().map(|c| c.compose(&subs)).collect();
        let comps = (0..outer.rows())
            .map(|i| {
                (0..outer.cols()).fold(Poly::zero(nv), |acc, j| {
                    let a = outer.get(i, j);
                    if a.is_zero() {
                        acc
                    } else {
                        acc.add(&inner_applied[j].scale(a))
                    }
                })
            })
            .collect();
        ProjMap { n: self.n, comps, k: self.k }
    }

    /// Scales so the leading coefficient of the last nonzero component is one.
    pub fn normalized(&self) -> ProjMap {
        let c = self.comps.iter().rev().find_map(|p| p.leading().map(|(_, c)| c.clone()));
        match c.and_then(|c| c.inv()) {
            Some(inv) => ProjMap { comps: self.comps.iter().map(|p| p.scale(&inv)).collect(), ..self.clone() },
            None => self.clone(),
        }
    }

    /// Equality up to one common nonzero scalar.
    pub fn proj_equal(&self, other: &ProjMap) -> bool {
        if self.comps.len() != other.comps.len() || self.n != other.n {
            return false;
        }
        let ratio = self.comps.iter().zip(&other.comps).find_map(|(a, b)| {
            let (m, cb) = b.leading()?;
            let ca = a.coeff(m);
            (!ca.is_zero()).then(|| &ca / cb)
        });
        let Some(r) = ratio else {
            return self.comps.iter().all(Poly::is_zero) && other.comps.iter().all(Poly::is_zero);
        };
        self.comps.iter().zip(&other.comps).all(|(a, b)| a.sub(&b.scale(&r)).is_zero())
    }

    /// Largest coefficient deviation after matching scales (for float comparisons).
    pub fn proj_distance(&self, other: &ProjMap) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        a.comps.iter().zip(&b.comps).map(|(x, y)| x.sub(y).max_abs_coeff()).fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> ProjMap {
        ProjMap { comps: self.comps.iter().map(Poly::to_float).collect(), ..self.clone() }
    }

    pub fn base_locus(&self, scope: LocusScope, seed: u64) -> BaseLocus {
        match scope {
            LocusScope::AtInfinity if self.n <= 2 => self.base_locus_at_infinity(),
            LocusScope::AtInfinity => BaseLocus { points: self.sampled_base_points(seed, true), complete: false },
            LocusScope::GlobalSampled => BaseLocus { points: self.sampled_base_points(seed, false), complete: false },
        }
    }

    fn base_locus_at_infinity(&self) -> BaseLocus {
        let n = self.n;
        let nv = n + 1;
        let k = self.k;
        // Restrict to t = 0.
        let restricted: Vec<Poly> = self.comps.iter().map(|c| c.substitute(n, &Scalar::zero())).collect();
        let live: Vec<&Poly> = restricted.iter().filter(|p| !p.is_zero()).collect();
        let mut pts = Vec::new();
        let point = |z: Scalar, w: Scalar| -> ProjPoint {
            let mut v = vec![z];
            if n == 2 {
                v.push(w);
            }
            v.push(Scalar::zero());
            ProjPoint::new(v)
        };
        // The point [1 : 0 : 0]: every restricted component lacks a z^k term.
        let mut e = vec![0; nv];
        e[0] = k;
        if live.iter().all(|p| p.coeff(&Monomial(e.clone())).is_zero()) {
            pts.push(point(Scalar::one(), Scalar::zero()));
        }
        if n == 2 {
            // Remaining points [z : 1 : 0]: common roots in z.
            let mut g: Option<UPoly> = None;
            for p in &live {
                let u = p.substitute(1, &Scalar::one()).to_upoly(0).expect("univariate in z");
                g = Some(match g {
                    None => u,
                    Some(g) => g.gcd(&u),
                });
            }
            let g = g.unwrap_or_else(UPoly::zero);
            if g.is_zero() {
                // Every component vanishes on t = 0.
                return BaseLocus { points: vec![], complete: false };
            }
            for z in univariate_roots(&g) {
                pts.push(point(z, Scalar::one()));
            }
        }
        BaseLocus { points: pts, complete: true }
    }

    /// Common zeros found by damped Newton steps from random starts in random affine charts.
    fn sampled_base_points(&self, seed: u64, at_infinity: bool) -> Vec<ProjPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nv = self.n + 1;
        let mut found: Vec<Vec<Complex64>> = Vec::new();
        for _ in 0..64 {
            let mut x: Vec<Complex64> =
                (0..nv).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            if at_infinity {
                x[self.n] = Complex64::new(0.0, 0.0);
            }
            if let Some(p) = crate::numeric::projective_common_zero(&self.comps, x, at_infinity) {
                if !found.iter().any(|q| proj_close(q, &p)) {
                    found.push(p);
                }
            }
        }
        found.into_iter().map(|p| ProjPoint::new(p.into_iter().map(Scalar::from_c64).collect())).collect()
    }
}

fn proj_close(a: &[Complex64], b: &[Complex64]) -> bool {
    let k = b.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).map(|x| x.0).unwrap();
    if a[k].norm() < 1e-12 {
        return false;
    }
    let r = b[k] / a[k];
    a.iter().zip(b).all(|(x, y)| (x * r - y).norm() < 1e-8)
}

/// Distinct roots: exact for degree at most two, otherwise floats.
fn univariate_roots(g: &UPoly) -> Vec<Scalar> {
    match g.degree() {
        0 => vec![],
        1 => vec![-(&g.coeff(0) / &g.coeff(1))],
        2 => {
            let [r1, r2] = quadratic_roots(&g.coeff(2), &g.coeff(1), &g.coeff(0));
            if r1 == r2 {
                vec![r1]
            } else {
                vec![r1, r2]
            }
        }
        _ => {
            let mut out: Vec<Complex64> = Vec::new();
            for r in g.roots_c64() {
                if !out.iter().any(|s| (s - r).norm() < 1e-8) {
                    out.push(r);
                }
            }
            out.into_iter().map(Scalar::from_c64).collect()
        }
    }
}

/// `tau o F o sigma` (plain composition of the linear maps with `F`).
pub fn conjugate_by_autos(tau: &IndefUnitary, fh: &ProjMap, sigma: &IndefUnitary) -> Result<ProjMap, MapError> {
    if tau.n() != fh.big_n() || sigma.n() != fh.n() {
        return Err(MapError::Dimension(format!(
            "tau acts on CP^{}, sigma on CP^{}, map is CP^{} -> CP^{}",
            tau.n(),
            sigma.n(),
            fh.n(),
            fh.big_n()
        )));
    }
    Ok(fh.compose_linear(tau.matrix(), sigma.matrix()))
}
