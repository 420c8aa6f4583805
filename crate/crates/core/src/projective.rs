//! Projective points and hyperplanes, the ball and Siegel models, and the Cayley transform.
//!
//! Coordinates are `[z_1 : ... : z_n : t]`. The ball is `sum |z_j|^2 < |t|^2`; the Siegel
//! domain is `(z_n conj(t) - t conj(z_n)) / 2i > |z'|^2` with `z' = (z_1, ..., z_{n-1})`.

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ball,
    Siegel,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Ball => "ball",
            Model::Siegel => "siegel",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Closure,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    SiegelToBall,
    BallToSiegel,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProjError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("hyperplane is not in the {0} model")]
    WrongModel(Model),
    #[error("hyperplane meets the closed domain")]
    NotDisjoint,
    #[error("zero covector")]
    ZeroCovector,
    #[error("sign undecidable for a non-real value")]
    Undecidable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint(pub Vec<Scalar>);

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Self {
        ProjPoint(coords)
    }

    /// Dimension `n` of the projective space.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, other: &ProjPoint) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        let Some(k) = other.0.iter().position(|c| !c.is_zero()) else {
            return self.is_zero();
        };
        if self.0[k].is_zero() {
            return false;
        }
        let r = &self.0[k] / &other.0[k];
        self.0.iter().zip(&other.0).all(|(a, b)| *a == &r * b)
    }

    /// Representative with the last nonzero coordinate equal to one.
    pub fn normalized(&self) -> ProjPoint {
        match self.0.iter().rposition(|c| !c.is_zero()) {
            Some(k) => {
                let inv = self.0[k].inv().expect("nonzero");
                ProjPoint(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn to_c64(&self) -> Vec<num_complex::Complex64> {
        self.0.iter().map(Scalar::to_c64).collect()
    }
}

impl std::fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", s.join(" : "))
    }
}

/// Value of the real Hermitian form whose positivity defines the domain.
pub fn defining_form(model: Model, x: &[Scalar]) -> Scalar {
    let n = x.len() - 1;
    let t = &x[n];
    match model {
        Model::Ball => {
            let s = x[..n].iter().fold(Scalar::zero(), |acc, z| &acc + &z.abs_sqr());
            &t.abs_sqr() - &s
        }
        Model::Siegel => {
            let w = &x[n - 1];
            // (w conj(t) - t conj(w)) / 2i = Im(w conj(t))
            let s = x[..n - 1].iter().fold(Scalar::zero(), |acc, z| &acc + &z.abs_sqr());
            &(w * &t.conj()).im() - &s
        }
    }
}

pub fn contains(model: Model, n: usize, p: &ProjPoint, region: Region) -> Result<bool, ProjError> {
    if p.n() != n {
        return Err(ProjError::Dimension { expected: n, got: p.n() });
    }
    let s = defining_form(model, &p.0).sign().ok_or(ProjError::Undecidable)?;
    Ok(match region {
        Region::Interior => s > 0,
        Region::Closure => s >= 0,
        Region::Boundary => s == 0,
    })
}

/// Hyperplane `sum_j c_j x_j = 0` with the `t`-coefficient last.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    cov: Vec<Scalar>,
    model: Model,
}

impl Hyperplane {
    pub fn from_covector(cov: Vec<Scalar>, model: Model) -> Result<Self, ProjError> {
        if cov.iter().all(Scalar::is_zero) {
            return Err(ProjError::ZeroCovector);
        }
        Ok(Hyperplane { cov, model })
    }

    /// `sum a_j z_j - a_{n+1} t = 0`.
    pub fn from_ball_form(a: &[Scalar]) -> Result<Self, ProjError> {
        let n = a.len() - 1;
        let mut cov = a.to_vec();
        cov[n] = -&a[n];
        Hyperplane::from_covector(cov, Model::Ball)
    }

    /// `-t = sum K_j z_j`.
    pub fn from_siegel_form(k: &[Scalar]) -> Self {
        let mut cov = k.to_vec();
        cov.push(Scalar::one());
        Hyperplane { cov, model: Model::Siegel }
    }

    /// `t = 0`.
    pub fn at_infinity(n: usize, model: Model) -> Self {
        let mut cov = vec![Scalar::zero(); n + 1];
        cov[n] = Scalar::one();
        Hyperplane { cov, model }
    }

    pub fn n(&self) -> usize {
        self.cov.len() - 1
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn covector(&self) -> &[Scalar] {
        &self.cov
    }

    pub fn t_coeff(&self) -> &Scalar {
        &self.cov[self.n()]
    }

    /// Ball-form coefficients `(a_1, ..., a_n, a_{n+1})` with `a_{n+1} = -c_t`.
    pub fn ball_form(&self) -> Vec<Scalar> {
        let mut a = self.cov.clone();
        let n = self.n();
        a[n] = -&self.cov[n];
        a
    }

    /// Siegel normal form `K` with `-t = sum K_j z_j`, if the `t`-coefficient is nonzero.
    pub fn siegel_form(&self) -> Option<Vec<Scalar>> {
        let inv = self.t_coeff().inv()?;
        Some(self.cov[..self.n()].iter().map(|c| c * &inv).collect())
    }

    /// Covector scaled so the `t`-coefficient is one (when nonzero).
    pub fn normalized(&self) -> Hyperplane {
        match self.t_coeff().inv() {
            Some(inv) if !self.t_coeff().is_zero() => {
                Hyperplane { cov: self.cov.iter().map(|c| c * &inv).collect(), model: self.model }
            }
            _ => self.clone(),
        }
    }

    pub fn with_model(&self, model: Model) -> Hyperplane {
        Hyperplane { cov: self.cov.clone(), model }
    }

    pub fn eval(&self, p: &ProjPoint) -> Scalar {
        self.cov.iter().zip(&p.0).fold(Scalar::zero(), |acc, (c, x)| &acc + &(c * x))
    }

    pub fn contains_point(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Equality up to scale (model tags must match).
    pub fn proj_eq(&self, other: &Hyperplane) -> bool {
        self.model == other.model && ProjPoint(self.cov.clone()).proj_eq(&ProjPoint(other.cov.clone()))
    }

    pub fn ball_disjoint(&self) -> Result<bool, ProjError> {
        if self.model != Model::Ball {
            return Err(ProjError::WrongModel(Model::Ball));
        }
        Ok(ball_disjoint_cov(&self.cov))
    }

    pub fn siegel_disjoint(&self) -> Result<bool, ProjError> {
        if self.model != Model::Siegel {
            return Err(ProjError::WrongModel(Model::Siegel));
        }
        Ok(match self.siegel_form() {
            Some(k) => siegel_value(&k).is_negative(),
            None => false,
        })
    }

    /// Disjointness from the closed domain of the hyperplane's own model.
    pub fn disjoint(&self) -> bool {
        match self.model {
            Model::Ball => ball_disjoint_cov(&self.cov),
            Model::Siegel => self.siegel_disjoint().expect("siegel model"),
        }
    }

    /// A point of the closed domain lying on the hyperplane, when one exists.
    pub fn closure_witness(&self) -> Option<ProjPoint> {
        let n = self.n();
        let mut origin = vec![Scalar::zero(); n + 1];
        origin[n] = Scalar::one();
        if self.t_coeff().is_zero() {
            // [0 : ... : 0 : 1] is the ball centre and a Siegel boundary point.
            return Some(ProjPoint(origin));
        }
        match self.model {
            Model::Ball => {
                if ball_disjoint_cov(&self.cov) {
                    return None;
                }
                let cz = &self.cov[..n];
                let norm = cz.iter().fold(Scalar::zero(), |acc, c| &acc + &c.abs_sqr());
                let f = &-self.t_coeff() / &norm;
                let mut x: Vec<Scalar> = cz.iter().map(|c| &c.conj() * &f).collect();
                x.push(Scalar::one());
                Some(ProjPoint(x))
            }
            Model::Siegel => {
                let k = self.siegel_form()?;
                if siegel_value(&k).is_negative() {
                    return None;
                }
                // w = 1, z_j = i conj(K_j) / 2, t = -sum K_j z_j; the form equals
                // |w|^2 (Im K_n + sum |K_j|^2 / 4) - sum |z_j - i conj(K_j) w / 2|^2.
                let half_i = &Scalar::ratio(1, 2) * &Scalar::i();
                let mut x: Vec<Scalar> = k[..n - 1].iter().map(|c| &c.conj() * &half_i).collect();
                x.push(Scalar::one());
                let t = x.iter().zip(&k).fold(Scalar::zero(), |acc, (z, c)| &acc - &(c * z));
                x.push(t);
                Some(ProjPoint(x))
            }
        }
    }

    pub fn to_float(&self) -> Hyperplane {
        Hyperplane { cov: self.cov.iter().map(Scalar::to_float).collect(), model: self.model }
    }
}

impl std::fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.cov.iter().map(ToString::to_string).collect();
        write!(f, "{}({})", self.model, s.join(", "))
    }
}

fn ball_disjoint_cov(cov: &[Scalar]) -> bool {
    let n = cov.len() - 1;
    let ct = &cov[n];
    if ct.is_zero() {
        return false;
    }
    let s = cov[..n].iter().fold(Scalar::zero(), |acc, c| &acc + &c.abs_sqr());
    (&s - &ct.abs_sqr()).is_negative()
}

/// `4 Im(K_n) + sum_{j<n} |K_j|^2`.
pub fn siegel_value(k: &[Scalar]) -> Scalar {
    let n = k.len();
    let s = k[..n - 1].iter().fold(Scalar::zero(), |acc, c| &acc + &c.abs_sqr());
    &(&Scalar::from_i64(4) * &k[n - 1].im()) + &s
}

/// The matrix of `[2z' : t + i z_n : t - i z_n]`.
pub fn cayley_matrix(n: usize) -> Matrix {
    let mut m = Matrix::zeros(n + 1, n + 1);
    for j in 0..n - 1 {
        m.set(j, j, Scalar::from_i64(2));
    }
    m.set(n - 1, n - 1, Scalar::i());
    m.set(n - 1, n, Scalar::one());
    m.set(n, n - 1, -Scalar::i());
    m.set(n, n, Scalar::one());
    m
}

/// Inverse of [`cayley_matrix`]: `z' = Z/2`, `z_n = (W - T)/2i`, `t = (W + T)/2`.
pub fn cayley_inverse_matrix(n: usize) -> Matrix {
    let half = Scalar::ratio(1, 2);
    let mut m = Matrix::zeros(n + 1, n + 1);
    for j in 0..n - 1 {
        m.set(j, j, half.clone());
    }
    let minus_half_i = &Scalar::ratio(-1, 2) * &Scalar::i();
    m.set(n - 1, n - 1, minus_half_i.clone());
    m.set(n - 1, n, -minus_half_i);
    m.set(n, n - 1, half.clone());
    m.set(n, n, half);
    m
}

pub fn cayley_matrix_for(n: usize, dir: Direction) -> Matrix {
    match dir {
        Direction::SiegelToBall => cayley_matrix(n),
        Direction::BallToSiegel => cayley_inverse_matrix(n),
    }
}

pub fn cayley(p: &ProjPoint, dir: Direction) -> ProjPoint {
    ProjPoint(cayley_matrix_for(p.n(), dir).mul_vec(&p.0))
}

/// Pushes a hyperplane forward; covectors transform by the inverse matrix on the right.
pub fn cayley_hyperplane(h: &Hyperplane, dir: Direction) -> Hyperplane {
    let n = h.n();
    let inv_dir = match dir {
        Direction::SiegelToBall => Direction::BallToSiegel,
        Direction::BallToSiegel => Direction::SiegelToBall,
    };
    let cov = cayley_matrix_for(n, inv_dir).vec_mul(&h.cov);
    let model = match dir {
        Direction::SiegelToBall => Model::Ball,
        Direction::BallToSiegel => Model::Siegel,
    };
    Hyperplane { cov, model }
}

/// Pushes a hyperplane forward by an invertible linear map.
pub fn push_hyperplane(a: &Matrix, h: &Hyperplane) -> Option<Hyperplane> {
    let inv = a.inverse()?;
    Some(Hyperplane { cov: inv.vec_mul(&h.cov), model: h.model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_scalar;

    fn s(x: &str) -> Scalar {
        parse_scalar(x).unwrap()
    }

    fn pt(v: &[&str]) -> ProjPoint {
        ProjPoint(v.iter().map(|x| s(x)).collect())
    }

    #[test]
    fn membership_examples() {
        assert!(contains(Model::Ball, 2, &pt(&["0", "0", "1"]), Region::Interior).unwrap());
        assert!(contains(Model::Siegel, 2, &pt(&["0", "i", "1"]), Region::Interior).unwrap());
        let p = pt(&["1", "0", "1"]);
        assert!(!contains(Model::Ball, 2, &p, Region::Interior).unwrap());
        assert!(contains(Model::Ball, 2, &p, Region::Boundary).unwrap());
        assert!(contains(Model::Ball, 3, &p, Region::Boundary).is_err());
    }

    #[test]
    fn ball_disjointness_examples() {
        assert!(Hyperplane::at_infinity(2, Model::Ball).ball_disjoint().unwrap());
        // t = w/3
        let h = Hyperplane::from_covector(vec![s("0"), s("1/3"), s("-1")], Model::Ball).unwrap();
        assert!(h.ball_disjoint().unwrap());
        // z = t
        let h = Hyperplane::from_covector(vec![s("1"), s("0"), s("-1")], Model::Ball).unwrap();
        assert!(!h.ball_disjoint().unwrap());
        let w = h.closure_witness().unwrap();
        assert!(h.contains_point(&w));
        assert!(contains(Model::Ball, 2, &w, Region::Closure).unwrap());
    }

    #[test]
    fn siegel_disjointness_examples() {
        let h = Hyperplane::from_siegel_form(&[s("0"), s("-2*i")]);
        assert!(h.siegel_disjoint().unwrap());
        let h0 = Hyperplane::from_siegel_form(&[s("0"), s("0")]);
        assert!(!h0.siegel_disjoint().unwrap());
        let h1 = Hyperplane::from_siegel_form(&[s("1"), s("-i")]);
        assert!(h1.siegel_disjoint().unwrap());
        let h2 = Hyperplane::from_siegel_form(&[s("3"), s("-i")]);
        let w = h2.closure_witness().unwrap();
        assert!(h2.contains_point(&w));
        assert!(contains(Model::Siegel, 2, &w, Region::Closure).unwrap());
    }

    #[test]
    fn cayley_examples() {
        let p = cayley(&pt(&["0", "i", "1"]), Direction::SiegelToBall);
        assert!(p.proj_eq(&pt(&["0", "0", "2"])));
        let q = cayley(&pt(&["0", "0", "1"]), Direction::SiegelToBall);
        assert!(q.proj_eq(&pt(&["0", "1", "1"])));
        let r = pt(&["1/2", "3 + i", "-2"]);
        assert!(cayley(&cayley(&r, Direction::SiegelToBall), Direction::BallToSiegel).proj_eq(&r));
        assert_eq!(cayley_matrix(3).mul(&cayley_inverse_matrix(3)), Matrix::identity(4));
    }

    #[test]
    fn cayley_hyperplane_examples() {
        // t = 2iw, i.e. -t = -2i w
        let h = Hyperplane::from_siegel_form(&[s("0"), s("-2*i")]);
        let hb = cayley_hyperplane(&h, Direction::SiegelToBall);
        let expect = Hyperplane::from_covector(vec![s("0"), s("1/3"), s("-1")], Model::Ball).unwrap();
        assert!(hb.proj_eq(&expect));
        // t' = (2/sqrt 3) z4' + 3i w', i.e. K4 = -2/sqrt 3, K5 = -3i
        let hp = Hyperplane::from_siegel_form(&[s("0"), s("0"), s("0"), s("-2/sqrt(3)"), s("-3*i")]);
        let hpb = cayley_hyperplane(&hp, Direction::SiegelToBall);
        let expect =
            Hyperplane::from_covector(vec![s("0"), s("0"), s("0"), s("sqrt(3)/6"), s("1/2"), s("-1")], Model::Ball)
                .unwrap();
        assert!(hpb.proj_eq(&expect));
        let back = cayley_hyperplane(&hpb, Direction::BallToSiegel);
        assert!(back.proj_eq(&hp));
    }
}
