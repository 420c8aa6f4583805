//! Witness search: exact branching and one-dimensional slices first, then multistart
//! Levenberg-Marquardt with high-precision polishing and exact promotion.

use std::cmp::Ordering;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::solve::univariate_roots;
use super::{check_pair, coefficient_system, pair_residual, solve_forced, solve_forced_with, CoefficientSystem};
use super::{Forced, Partial, WitnessPair};
use crate::linalg::{LinearSolution, Matrix};
use crate::numeric::{levenberg_marquardt, CMat, CVec};
use crate::poly::upoly::simplest_between;
use crate::poly::{Monomial, Poly, UPoly};
use crate::projective::{cayley_matrix, Model};
use crate::ratmap::ProjMap;
use crate::scalar::{promote, Scalar};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Maximum number of numeric starts.
    pub budget: usize,
    pub seed: u64,
    /// Starts evaluated per round; the search stops after the first round with a witness.
    pub batch: usize,
    /// Acceptance threshold for float witnesses (relative residual of the identity).
    pub tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 1000, seed: 0, batch: 64, tolerance: 1e-10 }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum WitnessSource {
    /// Forced deductions plus exact branching or slice search.
    Exact,
    /// Numeric multistart; `promoted` when the witness was rounded to exact values and
    /// re-verified exactly.
    Numeric { starts: usize, promoted: bool },
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        witness: WitnessPair,
        source: WitnessSource,
        residual: f64,
    },
    /// Not a proof of non-existence. `feasible` records whether solutions of the identity
    /// were seen (all of them then failed the disjointness inequalities).
    NotFound {
        feasible: bool,
        reason: String,
        starts: usize,
    },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&WitnessPair> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Searches for a witness pair for `fh` with hyperplanes in `model`.
pub fn search_witness(fh: &ProjMap, model: Model, cfg: &SearchConfig) -> SearchOutcome {
    let sys = coefficient_system(fh, model);
    let top = solve_forced(&sys);
    search_from(&sys, fh, &top, cfg)
}

pub(crate) fn search_from(sys: &CoefficientSystem, fh: &ProjMap, top: &Forced, cfg: &SearchConfig) -> SearchOutcome {
    let base = match top {
        Forced::Contradiction(_) => {
            return SearchOutcome::NotFound {
                feasible: false,
                reason: "the coefficient system is inconsistent".into(),
                starts: 0,
            }
        }
        Forced::Solved(p) | Forced::Stuck(p) => p,
    };
    match exact_phase(sys, fh, top, &[], 0, cfg.tolerance) {
        Exact::Found(w) => {
            let residual = if w.is_exact() { 0.0 } else { pair_residual(fh, w.h(), w.h_prime()) };
            return SearchOutcome::Found { witness: w, source: WitnessSource::Exact, residual };
        }
        Exact::Infeasible => {
            return SearchOutcome::NotFound {
                feasible: false,
                reason: "every exact branch of the coefficient system is inconsistent".into(),
                starts: 0,
            }
        }
        Exact::NoDisjoint | Exact::Undecided => {}
    }
    numeric_phase(sys, fh, base, cfg)
}

enum Exact {
    Found(WitnessPair),
    Infeasible,
    NoDisjoint,
    Undecided,
}

fn exact_phase(
    sys: &CoefficientSystem,
    fh: &ProjMap,
    f: &Forced,
    pins: &[(usize, Scalar)],
    depth: usize,
    tol: f64,
) -> Exact {
    match f {
        Forced::Contradiction(_) => Exact::Infeasible,
        Forced::Solved(p) => match try_free(sys, fh, p, tol) {
            Some(w) => Exact::Found(w),
            None => Exact::NoDisjoint,
        },
        Forced::Stuck(p) => {
            if depth >= 4 {
                return Exact::Undecided;
            }
            let Some((var, up)) = p.residual.iter().find_map(|(_, q)| match q.support_vars().as_slice() {
                [u] => q.to_upoly(*u).map(|up| (*u, up)),
                _ => None,
            }) else {
                return Exact::Undecided;
            };
            let roots = univariate_roots(&up);
            if !roots.iter().all(Scalar::is_exact) {
                return Exact::Undecided;
            }
            let mut all_infeasible = true;
            for r in roots {
                let mut next = pins.to_vec();
                next.push((var, r));
                let g = solve_forced_with(sys, &next);
                match exact_phase(sys, fh, &g, &next, depth + 1, tol) {
                    Exact::Found(w) => return Exact::Found(w),
                    Exact::Infeasible => {}
                    Exact::NoDisjoint | Exact::Undecided => all_infeasible = false,
                }
            }
            if all_infeasible {
                Exact::Infeasible
            } else {
                Exact::Undecided
            }
        }
    }
}

/// Builds and validates a witness from full unknown values.
fn witness_from(sys: &CoefficientSystem, fh: &ProjMap, vals: &[Scalar], tol: f64) -> Option<WitnessPair> {
    let u = sys.unknowns;
    let mu: Vec<Scalar> = (0..u.n).map(|j| vals[u.mu(j)].clone()).collect();
    let lambda: Vec<Scalar> = (0..u.big_n).map(|j| vals[u.lambda(j)].clone()).collect();
    let w = WitnessPair::from_coefficients(&mu, &lambda, vals[u.c()].clone(), sys.model).ok()?;
    let ok = if w.is_exact() { check_pair(fh, &w) } else { pair_residual(fh, w.h(), w.h_prime()) < tol };
    ok.then_some(w)
}

fn conj_upoly(p: &UPoly) -> UPoly {
    UPoly::new(p.coeffs().iter().map(Scalar::conj).collect())
}

/// `|p(y)|^2` for real `y`.
fn abs2(p: &UPoly) -> UPoly {
    p.mul(&conj_upoly(p))
}

/// `Im p(y)` for real `y`.
fn imag(p: &UPoly) -> UPoly {
    p.sub(&conj_upoly(p)).scale(&(&Scalar::ratio(-1, 2) * &Scalar::i()))
}

/// The disjointness quantity (negative iff the hyperplane misses the closed domain) for a
/// normalized covector given as polynomials in `y`.
fn disjointness(model: Model, k: &[UPoly]) -> UPoly {
    let n = k.len();
    match model {
        Model::Ball => k.iter().fold(UPoly::new(vec![Scalar::from_i64(-1)]), |acc, p| acc.add(&abs2(p))),
        Model::Siegel => {
            let s = k[..n - 1].iter().fold(UPoly::zero(), |acc, p| acc.add(&abs2(p)));
            s.add(&imag(&k[n - 1]).scale(&Scalar::from_i64(4)))
        }
    }
}

/// Tries free `mu` at zero, then each free `mu` along `i y` and `y` with the rest zero; on a
/// slice, exact rational critical points come first, then one simple rational per sign cell.
fn try_free(sys: &CoefficientSystem, fh: &ProjMap, p: &Partial, tol: f64) -> Option<WitnessPair> {
    let u = sys.unknowns;
    if let Some(w) = witness_from(sys, fh, &p.evaluate(&[]), tol) {
        return Some(w);
    }
    let free_mu: Vec<usize> = p.free.iter().copied().filter(|&x| u.is_mu(x)).collect();
    for &var in free_mu.iter().rev() {
        for omega in [Scalar::i(), Scalar::one()] {
            if let Some(w) = try_slice(sys, fh, p, var, &omega, tol) {
                return Some(w);
            }
        }
    }
    None
}

fn try_slice(
    sys: &CoefficientSystem,
    fh: &ProjMap,
    p: &Partial,
    var: usize,
    omega: &Scalar,
    tol: f64,
) -> Option<WitnessPair> {
    let u = sys.unknowns;
    let along: Vec<UPoly> = p
        .subs
        .iter()
        .map(|s| {
            let q = p.free.iter().filter(|&&f| f != var).fold(s.clone(), |acc, &f| acc.substitute(f, &Scalar::zero()));
            let up = q.to_upoly(var).expect("only the slice variable remains");
            let mut w = Scalar::one();
            let c = up
                .coeffs()
                .iter()
                .map(|a| {
                    let v = a * &w;
                    w = &w * omega;
                    v
                })
                .collect();
            UPoly::new(c)
        })
        .collect();
    let mu: Vec<UPoly> = (0..u.n).map(|j| along[u.mu(j)].clone()).collect();
    let lambda: Vec<UPoly> = (0..u.big_n).map(|j| along[u.lambda(j)].clone()).collect();
    let dh = disjointness(sys.model, &mu);
    let dhp = disjointness(sys.model, &lambda);
    let roots_h = dh.real_roots_exact(64)?;
    let roots_hp = dhp.real_roots_exact(64)?;
    let crit = dhp.derivative().real_roots_exact(64)?;
    let mut cands: Vec<BigRational> = crit.iter().filter_map(|r| r.exact.clone()).collect();
    let mut all: Vec<_> = roots_h.into_iter().chain(roots_hp).collect();
    all.sort_by_key(|a| a.midpoint());
    let one = BigRational::one();
    if let (Some(first), Some(last)) = (all.first(), all.last()) {
        cands.push(simplest_between(&(&first.lo - &one), &first.lo));
        for pair in all.windows(2) {
            if pair[0].hi < pair[1].lo {
                cands.push(simplest_between(&pair[0].hi, &pair[1].lo));
            }
        }
        cands.push(simplest_between(&last.hi, &(&last.hi + &one)));
    }
    for y in cands {
        if y.is_zero() {
            continue;
        }
        let ys = Scalar::rational(y.clone());
        if !(dh.eval(&ys).is_negative() && dhp.eval(&ys).is_negative()) {
            continue;
        }
        let value = omega * &ys;
        if let Some(w) = witness_from(sys, fh, &p.evaluate(&[(var, value)]), tol) {
            return Some(w);
        }
    }
    None
}

struct Candidate {
    residual: f64,
    key: Vec<(f64, f64)>,
    x: Vec<Complex64>,
}

fn cmp_candidates(a: &Candidate, b: &Candidate) -> Ordering {
    a.residual.partial_cmp(&b.residual).unwrap_or(Ordering::Equal).then_with(|| {
        for (p, q) in a.key.iter().zip(&b.key) {
            let o =
                p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal).then(p.1.partial_cmp(&q.1).unwrap_or(Ordering::Equal));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

fn disjoint_f64(model: Model, k: &[Complex64]) -> f64 {
    let n = k.len();
    match model {
        Model::Ball => k.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0,
        Model::Siegel => 4.0 * k[n - 1].im + k[..n - 1].iter().map(|z| z.norm_sqr()).sum::<f64>(),
    }
}

fn sample_ball(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut g = || {
        let (a, b): (f64, f64) = (rng.gen_range(1e-12..1.0), rng.gen());
        (-2.0 * a.ln()).sqrt() * Complex64::from_polar(1.0, std::f64::consts::TAU * b)
    };
    let mut v: Vec<Complex64> = (0..n).map(|_| g()).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    // Half the starts uniform in the ball, half uniform in hyperbolic radius, which reaches
    // hyperplanes close to the sphere.
    let r =
        if rng.gen_bool(0.5) { rng.gen::<f64>().powf(1.0 / (2 * n) as f64) } else { rng.gen_range(0.0..4.0f64).tanh() };
    for z in &mut v {
        *z *= r / norm;
    }
    v
}

/// A normalized covector `(mu, 1)` of a hyperplane missing the closed domain.
fn sample_mu(model: Model, n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let b = sample_ball(n, rng);
    match model {
        Model::Ball => b,
        Model::Siegel => {
            // Pull a ball covector back through the Cayley matrix: cov_S = cov_B * C.
            let c = cayley_matrix(n);
            let mut cov: Vec<Complex64> = (0..=n)
                .map(|j| {
                    (0..=n).map(|i| if i < n { b[i] } else { Complex64::new(1.0, 0.0) } * c.get(i, j).to_c64()).sum()
                })
                .collect();
            let t = cov[n];
            if t.norm() < 1e-300 {
                return b;
            }
            cov.truncate(n);
            cov.iter().map(|z| z / t).collect()
        }
    }
}

/// `mu -> (I - QQ*) v(mu)`, where `v(mu)` is the coefficient vector of `(t + mu . z)^k` and `Q`
/// spans the coefficient vectors of the components. Zeros are exactly the `mu` admitting
/// `lambda`, `c` (with `c != 0`).
struct Projected {
    n: usize,
    monos: Vec<Vec<u32>>,
    mult: Vec<f64>,
    a: CMat,
    pperp: CMat,
}

impl Projected {
    fn new(fh: &ProjMap) -> Self {
        let n = fh.n();
        let k = fh.degree();
        let monos: Vec<Monomial> = Monomial::all_of_degree(n + 1, k);
        let mult = monos.iter().map(|m| super::multinomial(k, m) as f64).collect();
        let a = CMat::from_fn(monos.len(), fh.comps().len(), |i, j| fh.comps()[j].coeff(&monos[i]).to_c64());
        let svd = a.clone().svd(true, false);
        let u = svd.u.expect("left singular vectors");
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count();
        let q = u.columns(0, rank).into_owned();
        let pperp = CMat::identity(monos.len(), monos.len()) - &q * q.adjoint();
        Projected { n, monos: monos.into_iter().map(|m| m.0).collect(), mult, a, pperp }
    }

    fn v(&self, mu: &[Complex64]) -> (CVec, CMat) {
        let n = self.n;
        let one = Complex64::new(1.0, 0.0);
        let mut v = CVec::zeros(self.monos.len());
        let mut dv = CMat::zeros(self.monos.len(), n);
        for (r, m) in self.monos.iter().enumerate() {
            let pw = |i: usize, e: u32| if e == 0 { one } else { mu[i].powu(e) };
            let val: Complex64 = (0..n).map(|i| pw(i, m[i])).product();
            v[r] = val * self.mult[r];
            for d in 0..n {
                if m[d] == 0 {
                    continue;
                }
                let der: Complex64 =
                    (0..n).map(|i| if i == d { pw(i, m[i] - 1) * m[i] as f64 } else { pw(i, m[i]) }).product();
                dv[(r, d)] = der * self.mult[r];
            }
        }
        (v, dv)
    }

    fn residual(&self, mu: &CVec) -> (CVec, CMat) {
        let (v, dv) = self.v(mu.as_slice());
        (&self.pperp * v, &self.pperp * dv)
    }

    /// `lambda` and `c` for a root `mu`. When the components are linearly dependent the
    /// solutions form an affine family; the member minimizing the disjointness quantity of
    /// `H'` is returned.
    fn linear_part(&self, mu: &[Complex64], model: Model) -> Option<(Vec<Complex64>, Complex64)> {
        let (v, _) = self.v(mu);
        let big_n = self.a.ncols() - 1;
        let rows = self.a.nrows();
        // Unknowns (lambda_0..lambda_{N-1}, c): A' lambda - c v = -a_N.
        let mut m = CMat::zeros(rows, big_n + 1);
        m.columns_mut(0, big_n).copy_from(&self.a.columns(0, big_n));
        m.set_column(big_n, &(-&v));
        let b = -self.a.column(big_n).into_owned();
        let svd = m.clone().svd(true, true);
        let yp = svd.solve(&b, 1e-12).ok()?;
        if (&m * &yp - &b).norm() > 1e-8 * (1.0 + b.norm()) {
            return None;
        }
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let vt = svd.v_t.as_ref()?;
        let null: Vec<usize> = (0..big_n + 1)
            .filter(|&i| i >= svd.singular_values.len() || svd.singular_values[i] <= 1e-10 * smax)
            .collect();
        let mut y = yp.clone();
        if !null.is_empty() {
            let k = CMat::from_fn(big_n + 1, null.len(), |r, c| vt[(null[c], r)].conj());
            y += &k * best_shift(&k, &yp, big_n, model);
        }
        let c = y[big_n];
        if c.norm() < 1e-12 {
            return None;
        }
        Some((y.iter().take(big_n).copied().collect(), c))
    }
}

/// Trial point, its residual and Jacobian columns, and the residual norm.
type Trial = (Vec<Scalar>, Vec<Scalar>, Vec<Vec<Scalar>>, f64);

/// [`Projected`] in the wide float backend, for refining a root `mu` found in `f64`.
struct WideProjected {
    n: usize,
    monos: Vec<Vec<u32>>,
    mult: Vec<Scalar>,
    /// Orthonormal basis of the span of the component coefficient columns.
    q: Vec<Vec<Scalar>>,
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| &acc + &(&x.conj() * y))
}

impl WideProjected {
    fn new(fh: &ProjMap) -> Self {
        let n = fh.n();
        let k = fh.degree();
        let monos: Vec<Monomial> = Monomial::all_of_degree(n + 1, k);
        let mult = monos.iter().map(|m| wide(&Scalar::from_i64(super::multinomial(k, m)))).collect();
        let mut q: Vec<Vec<Scalar>> = Vec::new();
        for comp in fh.comps() {
            let col: Vec<Scalar> = monos.iter().map(|m| wide(&comp.coeff(m))).collect();
            let size = dot(&col, &col).to_c64().re.sqrt();
            let mut r = col;
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for b in &q {
                    let d = dot(b, &r);
                    r = r.iter().zip(b).map(|(x, y)| x - &(&d * y)).collect();
                }
            }
            let norm = dot(&r, &r).to_c64().re.sqrt();
            if norm > 1e-30 * size.max(1e-300) {
                let inv = dot(&r, &r).sqrt().inv().expect("nonzero norm");
                q.push(r.iter().map(|x| x * &inv).collect());
            }
        }
        WideProjected { n, monos: monos.into_iter().map(|m| m.0).collect(), mult, q }
    }

    fn project(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut r = x.to_vec();
        for b in &self.q {
            let d = dot(b, &r);
            r = r.iter().zip(b).map(|(x, y)| x - &(&d * y)).collect();
        }
        r
    }

    /// Projected residual and the columns of its Jacobian.
    fn residual(&self, mu: &[Scalar]) -> (Vec<Scalar>, Vec<Vec<Scalar>>) {
        let n = self.n;
        let mut v = Vec::with_capacity(self.monos.len());
        let mut dv = vec![Vec::with_capacity(self.monos.len()); n];
        for (m, w) in self.monos.iter().zip(&self.mult) {
            let val = (0..n).fold(w.clone(), |acc, i| &acc * &mu[i].pow(m[i]));
            v.push(val);
            for (d, col) in dv.iter_mut().enumerate() {
                let der = if m[d] == 0 {
                    Scalar::zero()
                } else {
                    (0..n).fold(w.clone(), |acc, i| {
                        let f = if i == d {
                            &mu[i].pow(m[i] - 1) * &Scalar::from_i64(m[i] as i64)
                        } else {
                            mu[i].pow(m[i])
                        };
                        &acc * &f
                    })
                };
                col.push(der);
            }
        }
        (self.project(&v), dv.iter().map(|c| self.project(c)).collect())
    }

    /// Gauss-Newton with a doubled-step trial (witnesses are typically double roots); returns
    /// `mu` and the final residual norm.
    fn refine(&self, mu0: &[Complex64]) -> (Vec<Scalar>, f64) {
        let norm = |r: &[Scalar]| dot(r, r).to_c64().re.max(0.0).sqrt();
        let mut mu: Vec<Scalar> = mu0.iter().map(|z| wide(&Scalar::from_c64(*z))).collect();
        let (mut r, mut j) = self.residual(&mu);
        let mut rn = norm(&r);
        let mut damping = 1e-50;
        for _ in 0..200 {
            if rn < 1e-70 || damping > 1.0 {
                break;
            }
            let n = self.n;
            let mut a = Matrix::zeros(n, n);
            for p in 0..n {
                for q in 0..n {
                    a.set(p, q, dot(&j[p], &j[q]));
                }
            }
            let scale = (0..n).map(|p| a.get(p, p).to_c64().norm()).fold(1e-300, f64::max);
            for p in 0..n {
                let d = a.get(p, p) + &wide(&Scalar::from_f64(damping * scale, 0.0));
                a.set(p, p, d);
            }
            let b: Vec<Scalar> = (0..n).map(|p| -dot(&j[p], &r)).collect();
            let LinearSolution::Solved { x: step, .. } = a.solve(&b) else {
                damping *= 1e6;
                continue;
            };
            let mut best: Option<Trial> = None;
            for f in [1, 2] {
                let f = Scalar::from_i64(f);
                let trial: Vec<Scalar> = mu.iter().zip(&step).map(|(m, s)| m + &(&f * s)).collect();
                let (tr, tj) = self.residual(&trial);
                let tn = norm(&tr);
                if best.as_ref().is_none_or(|b| tn < b.3) {
                    best = Some((trial, tr, tj, tn));
                }
            }
            let (trial, tr, tj, tn) = best.expect("two trials");
            if tn < rn {
                mu = trial;
                r = tr;
                j = tj;
                rn = tn;
                damping = (damping * 1e-3).max(1e-50);
            } else {
                damping *= 1e4;
            }
        }
        (mu, rn)
    }
}

fn wide(v: &Scalar) -> Scalar {
    v.to_float_with(POLISH_BITS, POLISH_EPS)
}

/// The shift `s` minimizing the disjointness quantity of `lambda = (yp + K s)[..N]`.
fn best_shift(k: &CMat, yp: &CVec, big_n: usize, model: Model) -> CVec {
    let d = k.ncols();
    let sq = match model {
        Model::Ball => big_n,
        Model::Siegel => big_n - 1,
    };
    let km = k.rows(0, sq).into_owned();
    let mp = yp.rows(0, sq).into_owned();
    // q(s) = |km s + mp|^2 + 4 Re(h^T s) (+ const), with the linear term only in the Siegel model.
    let hbar = match model {
        Model::Ball => CVec::zeros(d),
        Model::Siegel => k.row(big_n - 1).transpose().map(|z| (Complex64::new(0.0, -1.0) * z).conj()),
    };
    let a = km.adjoint() * &km;
    let g = km.adjoint() * &mp + hbar.clone() * Complex64::new(2.0, 0.0);
    let svd = a.clone().svd(true, true);
    let mut s = svd.solve(&(-&g), 1e-12).unwrap_or_else(|_| CVec::zeros(d));
    // A linear term along the kernel of `km` makes q unbounded below: move along it.
    let resid = &a * &s + &g;
    if resid.norm() > 1e-9 * (1.0 + g.norm()) {
        let dir = -resid;
        let slope = (dir.adjoint() * &hbar)[(0, 0)].re * 4.0;
        if slope < 0.0 {
            let q0 = (&km * &s + &mp).norm_squared();
            s += dir * Complex64::new((q0 + 1.0) / -slope, 0.0);
        }
    }
    s
}

fn numeric_phase(sys: &CoefficientSystem, fh: &ProjMap, base: &Partial, cfg: &SearchConfig) -> SearchOutcome {
    let u = sys.unknowns;
    let nu = u.count();
    let polys: Vec<Poly> = base.residual.iter().map(|(_, p)| p.clone()).collect();
    let mut xvars: Vec<usize> = polys.iter().flat_map(Poly::support_vars).collect();
    xvars.extend(base.free.iter().copied());
    xvars.sort_unstable();
    xvars.dedup();
    let proj = Projected::new(fh);

    let run_start = |s: usize| -> (bool, Option<Candidate>) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (s as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mu0 = CVec::from_vec(sample_mu(sys.model, u.n, &mut rng));
        let lm = levenberg_marquardt(mu0, |x| proj.residual(x), 200, 1e-13);
        if !lm.residual.is_finite() || lm.residual > 1e-9 {
            return (false, None);
        }
        let mu: Vec<Complex64> = lm.x.iter().copied().collect();
        let Some((lambda, c)) = proj.linear_part(&mu, sys.model) else { return (false, None) };
        if disjoint_f64(sys.model, &mu) >= -1e-9 || disjoint_f64(sys.model, &lambda) >= -1e-9 {
            return (true, None);
        }
        let mut full = vec![Complex64::new(0.0, 0.0); nu];
        for (j, z) in mu.iter().enumerate() {
            full[u.mu(j)] = *z;
        }
        for (j, z) in lambda.iter().enumerate() {
            full[u.lambda(j)] = *z;
        }
        full[u.c()] = c;
        let key = mu.iter().map(|z| (z.re, z.im)).collect();
        (true, Some(Candidate { residual: lm.residual, key, x: full }))
    };

    let mut feasible = false;
    let mut done = 0;
    let batch = cfg.batch.max(1);
    while done < cfg.budget {
        let end = (done + batch).min(cfg.budget);
        let results: Vec<(bool, Option<Candidate>)> = (done..end).into_par_iter().map(run_start).collect();
        done = end;
        feasible |= results.iter().any(|r| r.0);
        let mut cands: Vec<Candidate> = results.into_iter().filter_map(|r| r.1).collect();
        cands.sort_by(cmp_candidates);
        for c in cands {
            if let Some((w, promoted, residual)) = finalize(sys, fh, base, &polys, &xvars, &c, cfg.tolerance) {
                return SearchOutcome::Found {
                    witness: w,
                    source: WitnessSource::Numeric { starts: done, promoted },
                    residual,
                };
            }
        }
    }
    let reason = if feasible {
        "solutions of the identity were found, but none missed both closed domains".into()
    } else {
        "no solution of the identity was found".into()
    };
    SearchOutcome::NotFound { feasible, reason, starts: done }
}

/// Levenberg-Marquardt in the float backend on the residual equations; returns the final
/// residual norm. Witnesses are often multiple roots, so convergence may be only linear.
fn polish(polys: &[Poly], xvars: &[usize], x: &mut [Scalar]) -> f64 {
    if polys.is_empty() {
        return 0.0;
    }
    let vars: Vec<usize> = xvars.iter().copied().filter(|&v| polys.iter().any(|p| p.degree_in(v) > 0)).collect();
    let jac: Vec<Vec<Poly>> = polys.iter().map(|p| vars.iter().map(|&v| p.partial(v)).collect()).collect();
    let norm = |x: &[Scalar]| polys.iter().map(|p| p.eval(x).to_c64().norm_sqr()).sum::<f64>().sqrt();
    let mut rn = norm(x);
    let mut damping = 1e-50;
    let mut stalled = 0;
    for _ in 0..120 {
        if rn < 1e-70 || stalled >= 3 || damping > 1.0 {
            break;
        }
        let r: Vec<Scalar> = polys.iter().map(|p| p.eval(x)).collect();
        let j = Matrix::from_rows(jac.iter().map(|row| row.iter().map(|p| p.eval(x)).collect()).collect());
        let jh = j.adjoint();
        let mut a = jh.mul(&j);
        let scale = (0..vars.len()).map(|k| a.get(k, k).to_c64().norm()).fold(1.0, f64::max);
        let damp = Scalar::from_f64(damping * scale, 0.0);
        for k in 0..vars.len() {
            let d = a.get(k, k) + &damp;
            a.set(k, k, d);
        }
        let b: Vec<Scalar> = jh.mul_vec(&r).into_iter().map(|v| -v).collect();
        let LinearSolution::Solved { x: step, .. } = a.solve(&b) else {
            damping *= 1e6;
            continue;
        };
        let mut next = x.to_vec();
        for (k, &v) in vars.iter().enumerate() {
            next[v] = &next[v] + &step[k];
        }
        let rn_next = norm(&next);
        if rn_next < rn {
            stalled = if rn_next > 0.9 * rn { stalled + 1 } else { 0 };
            x.clone_from_slice(&next);
            rn = rn_next;
            damping = (damping * 1e-3).max(1e-50);
        } else {
            damping *= 1e4;
        }
    }
    rn
}

const POLISH_BITS: usize = 256;
const POLISH_EPS: f64 = 1e-70;

fn finalize(
    sys: &CoefficientSystem,
    fh: &ProjMap,
    base: &Partial,
    polys: &[Poly],
    xvars: &[usize],
    c: &Candidate,
    tol: f64,
) -> Option<(WitnessPair, bool, f64)> {
    let u = sys.unknowns;
    // Witnesses are often multiple roots, where the error in mu is about sqrt of the residual:
    // refine mu at twice the working precision, then the rest of the unknowns with mu fixed.
    let mu0: Vec<Complex64> = (0..u.n).map(|j| c.x[u.mu(j)]).collect();
    let (mu, rn) = WideProjected::new(fh).refine(&mu0);
    let fpolys: Vec<Poly> = polys.iter().map(|p| p.map_coeffs(wide)).collect();
    let mut x: Vec<Scalar> = c.x.iter().map(|z| wide(&Scalar::from_c64(*z))).collect();
    for (j, m) in mu.into_iter().enumerate() {
        x[u.mu(j)] = m;
    }
    let rest: Vec<usize> = xvars.iter().copied().filter(|&v| !u.is_mu(v)).collect();
    polish(&fpolys, &rest, &mut x);
    let vals: Vec<Scalar> = base.subs.iter().map(|p| p.map_coeffs(wide).eval(&x)).collect();
    let ptol = (rn.sqrt() * 1e3).clamp(1e-32, 1e-6);
    let max_den = (ptol.sqrt().recip() as u64).clamp(1_000, 10_000_000_000_000);
    let promoted: Option<Vec<(usize, Scalar)>> =
        (0..u.n).map(|j| promote(&vals[u.mu(j)], max_den, ptol).map(|v| (u.mu(j), v))).collect();
    if let Some(pins) = promoted {
        if let Forced::Solved(p) = solve_forced_with(sys, &pins) {
            if let Some(w) = witness_from(sys, fh, &p.evaluate(&[]), tol) {
                if w.is_exact() {
                    return Some((w, true, 0.0));
                }
            }
        }
    }
    let w = witness_from(sys, fh, &vals, tol)?;
    let r = pair_residual(fh, w.h(), w.h_prime());
    Some((w, false, r))
}
