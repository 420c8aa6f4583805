//! Damped Gauss-Newton (Levenberg-Marquardt) for holomorphic residual systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::poly::Poly;

pub type CVec = DVector<Complex64>;
pub type CMat = DMatrix<Complex64>;

#[derive(Clone, Debug)]
pub struct LmResult {
    pub x: CVec,
    pub residual: f64,
    pub iterations: usize,
}

/// Minimizes `|r(x)|^2` for holomorphic `r`, given a closure returning `(r, dr/dx)`.
pub fn levenberg_marquardt(x0: CVec, f: impl Fn(&CVec) -> (CVec, CMat), max_iter: usize, tol: f64) -> LmResult {
    let mut x = x0;
    let (mut r, mut j) = f(&x);
    let mut cost = r.norm();
    let mut mu = 1e-3;
    let mut it = 0;
    while it < max_iter && cost > tol {
        it += 1;
        let jh = j.adjoint();
        let a = &jh * &j;
        let g = &jh * &r;
        let scale = a.diagonal().iter().map(|d| d.re).fold(0.0, f64::max).max(1e-300);
        let mut improved = false;
        for _ in 0..12 {
            let mut m = a.clone();
            for k in 0..m.nrows() {
                m[(k, k)] += Complex64::new(mu * scale, 0.0);
            }
            let Some(step) = m.lu().solve(&(-&g)) else {
                mu *= 10.0;
                continue;
            };
            let xn = &x + &step;
            let (rn, jn) = f(&xn);
            let cn = rn.norm();
            if cn.is_finite() && cn < cost {
                x = xn;
                r = rn;
                j = jn;
                cost = cn;
                mu = (mu / 3.0).max(1e-15);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    LmResult { x, residual: cost, iterations: it }
}

/// Residuals and Jacobian of a polynomial system at `x`.
pub fn poly_system(polys: &[Poly], jac: &[Vec<Poly>], x: &[Complex64]) -> (CVec, CMat) {
    let r = CVec::from_iterator(polys.len(), polys.iter().map(|p| p.eval_c64(x)));
    let nv = x.len();
    let j = CMat::from_fn(polys.len(), nv, |i, k| jac[i][k].eval_c64(x));
    (r, j)
}

pub fn jacobian(polys: &[Poly]) -> Vec<Vec<Poly>> {
    polys.iter().map(|p| (0..p.nvars()).map(|k| p.partial(k)).collect()).collect()
}

/// A common zero of homogeneous `comps` near `x0` in the chart `conj(x0) . x = |x0|^2`,
/// optionally constrained to `t = 0` (last coordinate).
pub fn projective_common_zero(comps: &[Poly], x0: Vec<Complex64>, at_infinity: bool) -> Option<Vec<Complex64>> {
    let nv = x0.len();
    let norm2: f64 = x0.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return None;
    }
    let a: Vec<Complex64> = x0.iter().map(|z| z.conj() / norm2).collect();
    let live: Vec<Poly> = comps.iter().filter(|p| !p.is_zero()).cloned().collect();
    let jac = jacobian(&live);
    let scale = live.iter().map(Poly::max_abs_coeff).fold(1.0, f64::max);
    let f = |x: &CVec| {
        let xs: Vec<Complex64> = x.iter().copied().collect();
        let (r, j) = poly_system(&live, &jac, &xs);
        let extra = 1 + usize::from(at_infinity);
        let mut rr = CVec::zeros(r.len() + extra);
        let mut jj = CMat::zeros(r.len() + extra, nv);
        rr.rows_mut(0, r.len()).copy_from(&r);
        jj.view_mut((0, 0), (r.len(), nv)).copy_from(&j);
        let k = r.len();
        rr[k] = a.iter().zip(&xs).map(|(ai, xi)| ai * xi).sum::<Complex64>() - Complex64::new(1.0, 0.0);
        for (c, ai) in a.iter().enumerate() {
            jj[(k, c)] = *ai;
        }
        if at_infinity {
            rr[k + 1] = xs[nv - 1];
            jj[(k + 1, nv - 1)] = Complex64::new(1.0, 0.0);
        }
        (rr, jj)
    };
    let res = levenberg_marquardt(CVec::from_vec(x0), f, 200, 1e-14 * scale);
    (res.residual < 1e-10 * scale).then(|| res.x.iter().copied().collect())
}
