//! Automorphisms of the projectivized ball: matrices preserving `E = diag(I_n, -1)` up to a
//! positive scale, acting on `[z_1 : ... : z_n : t]`.

use rand::Rng;

use crate::linalg::Matrix;
use crate::projective::{Hyperplane, Model, ProjPoint};
use crate::scalar::Scalar;

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum AutError {
    #[error("matrix does not preserve the indefinite form")]
    NotIndefUnitary,
    #[error("expected a square matrix of size {0}")]
    Shape(usize),
    #[error("|lambda| must be below 1")]
    LambdaTooLarge,
    #[error("hyperplane must be a ball-model hyperplane")]
    WrongModel,
    #[error("hyperplane meets the closed ball")]
    NotDisjoint,
}

/// `diag(I_n, -1)` of size `n + 1`.
pub fn e_form(n: usize) -> Matrix {
    let mut d = vec![Scalar::one(); n + 1];
    d[n] = Scalar::from_i64(-1);
    Matrix::diag(&d)
}

/// The positive real `c` with `A E A* = c E`, if any.
pub fn indef_scale(a: &Matrix) -> Option<Scalar> {
    if !a.is_square() || a.rows() < 2 {
        return None;
    }
    let n = a.rows() - 1;
    let e = e_form(n);
    let g = a.mul(&e).mul(&a.adjoint());
    let c = -g.get(n, n);
    if !c.is_positive() {
        return None;
    }
    (g == e.scale(&c)).then_some(c)
}

/// `A E A* = c E` for a real `c > 0` (projective membership; `c = 1` is the literal identity).
pub fn verify_indef_unitary(a: &Matrix) -> bool {
    indef_scale(a).is_some()
}

/// The literal identity `A E A* = E`.
pub fn verify_indef_unitary_strict(a: &Matrix) -> bool {
    indef_scale(a).is_some_and(|c| c.is_one())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndefUnitary {
    m: Matrix,
    n: usize,
}

impl IndefUnitary {
    pub fn new(m: Matrix) -> Result<Self, AutError> {
        if !m.is_square() || m.rows() < 2 {
            return Err(AutError::Shape(m.rows()));
        }
        if !verify_indef_unitary(&m) {
            return Err(AutError::NotIndefUnitary);
        }
        let n = m.rows() - 1;
        Ok(IndefUnitary { m, n })
    }

    pub fn identity(n: usize) -> Self {
        IndefUnitary { m: Matrix::identity(n + 1), n }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> Scalar {
        indef_scale(&self.m).expect("validated on construction")
    }

    pub fn compose(&self, other: &IndefUnitary) -> IndefUnitary {
        assert_eq!(self.n, other.n, "dimension mismatch");
        IndefUnitary { m: self.m.mul(&other.m), n: self.n }
    }

    /// `E A* E / c`.
    pub fn invert(&self) -> IndefUnitary {
        let e = e_form(self.n);
        let c_inv = self.scale().inv().expect("positive scale");
        IndefUnitary { m: e.mul(&self.m.adjoint()).mul(&e).scale(&c_inv), n: self.n }
    }

    pub fn act_on_point(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(self.m.mul_vec(p.coords()))
    }

    pub fn act_on_hyperplane(&self, h: &Hyperplane) -> Hyperplane {
        let inv = self.invert();
        Hyperplane::from_covector(inv.m.vec_mul(h.covector()), h.model()).expect("nonzero covector")
    }

    /// Group equality, up to a nonzero scalar.
    pub fn proj_eq(&self, other: &IndefUnitary) -> bool {
        self.m.proportional_to(&other.m).is_some()
    }

    pub fn to_float(&self) -> IndefUnitary {
        IndefUnitary { m: self.m.to_float(), n: self.n }
    }

    pub fn is_exact(&self) -> bool {
        self.m.is_exact()
    }
}

/// `[z_1 - conj(l) t : sqrt(1 - |l|^2) z' : t - l z_1]`, sending `{l z_1 = t}` to `t = 0`.
pub fn mobius_to_infinity(lambda: &Scalar, n: usize) -> Result<IndefUnitary, AutError> {
    let defect = &Scalar::one() - &lambda.abs_sqr();
    if !defect.is_positive() {
        return Err(AutError::LambdaTooLarge);
    }
    let r = defect.sqrt();
    let mut m = Matrix::zeros(n + 1, n + 1);
    m.set(0, 0, Scalar::one());
    m.set(0, n, -lambda.conj());
    for j in 1..n {
        m.set(j, j, r.clone());
    }
    m.set(n, 0, -lambda);
    m.set(n, n, Scalar::one());
    Ok(IndefUnitary { m, n })
}

/// A unitary `V` with `V x = |x| e_1` (phase-corrected Householder reflection).
pub fn unitary_to_e1(x: &[Scalar]) -> (Matrix, Scalar) {
    let n = x.len();
    let norm_sq = x.iter().fold(Scalar::zero(), |acc, c| &acc + &c.abs_sqr());
    let lambda = norm_sq.sqrt();
    let already = x[1..].iter().all(Scalar::is_zero) && (x[0].is_zero() || x[0].is_positive());
    if already {
        return (Matrix::identity(n), lambda);
    }
    let a1 = x[0].abs();
    let p = if x[0].is_zero() { Scalar::one() } else { &x[0] / &a1 };
    let mut v = x.to_vec();
    v[0] = &v[0] + &(&p * &lambda);
    let vv = &(&Scalar::from_i64(2) * &lambda) * &(&lambda + &a1);
    let f = &Scalar::from_i64(2) / &vv;
    let mut h = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let val = h.get(i, j) - &(&(&v[i] * &v[j].conj()) * &f);
            h.set(i, j, val);
        }
    }
    let mut d = vec![Scalar::one(); n];
    d[0] = -p.conj();
    (Matrix::diag(&d).mul(&h), lambda)
}

/// An automorphism mapping a ball-disjoint hyperplane to `t = 0`.
pub fn hyperplane_to_infinity(h: &Hyperplane) -> Result<IndefUnitary, AutError> {
    if h.model() != Model::Ball {
        return Err(AutError::WrongModel);
    }
    if !h.disjoint() {
        return Err(AutError::NotDisjoint);
    }
    let n = h.n();
    let form = h.ball_form();
    let inv = form[n].inv().ok_or(AutError::NotDisjoint)?;
    let a: Vec<Scalar> = form[..n].iter().map(|c| c * &inv).collect();
    if a.iter().all(Scalar::is_zero) {
        return Ok(IndefUnitary::identity(n));
    }
    let x: Vec<Scalar> = a.iter().map(Scalar::conj).collect();
    let (v, lambda) = unitary_to_e1(&x);
    let rot = IndefUnitary { m: v.block_diag(&Matrix::identity(1)), n };
    Ok(mobius_to_infinity(&lambda, n)?.compose(&rot))
}

/// Random exact automorphism with Gaussian-rational entries: coordinate rotations by
/// Pythagorean pairs, unit phases, and a Mobius factor with `|l|` and `sqrt(1 - |l|^2)` rational.
pub fn random_exact_automorphism(n: usize, rng: &mut impl Rng) -> IndefUnitary {
    const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];
    let pick = |rng: &mut dyn rand::RngCore| TRIPLES[rng.gen_range(0..TRIPLES.len())];
    let mut acc = Matrix::identity(n + 1);
    for _ in 0..2 {
        if n >= 2 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let (a, b, c) = pick(rng);
            let mut g = Matrix::identity(n + 1);
            g.set(i, i, Scalar::ratio(a, c));
            g.set(i, j, Scalar::ratio(-b, c));
            g.set(j, i, Scalar::ratio(b, c));
            g.set(j, j, Scalar::ratio(a, c));
            acc = acc.mul(&g);
        }
        let mut d = vec![Scalar::one(); n + 1];
        for dk in d.iter_mut().take(n) {
            let (a, b, c) = pick(rng);
            let sgn = if rng.gen_bool(0.5) { 1 } else { -1 };
            *dk = Scalar::gauss(crate::scalar::q(a, c), crate::scalar::q(sgn * b, c));
        }
        acc = acc.mul(&Matrix::diag(&d));
        // l = (a/c) * unit phase, so |l| = a/c and sqrt(1 - |l|^2) = b/c.
        let (a, b, c) = pick(rng);
        let (pa, pb, pc) = pick(rng);
        let num = if rng.gen_bool(0.5) { a } else { b };
        let phase = Scalar::gauss(crate::scalar::q(pa, pc), crate::scalar::q(pb, pc));
        let lambda = &Scalar::ratio(num, c) * &phase;
        let t = mobius_to_infinity(&lambda, n).expect("|l| < 1");
        acc = acc.mul(t.matrix());
    }
    IndefUnitary::new(acc).expect("product of automorphisms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_scalar;
    use crate::projective::{contains, Region};
    use rand::SeedableRng;

    fn s(x: &str) -> Scalar {
        parse_scalar(x).unwrap()
    }

    #[test]
    fn verification_examples() {
        assert!(verify_indef_unitary(&Matrix::identity(3)));
        assert!(verify_indef_unitary(&e_form(2)));
        let mut d = Matrix::identity(3);
        d.set(0, 0, Scalar::from_i64(2));
        assert!(!verify_indef_unitary(&d));
    }

    #[test]
    fn mobius_examples() {
        let t0 = mobius_to_infinity(&Scalar::zero(), 2).unwrap();
        assert_eq!(*t0.matrix(), Matrix::identity(3));
        let t = mobius_to_infinity(&s("1/3"), 2).unwrap();
        assert!(verify_indef_unitary_strict(t.matrix()) || verify_indef_unitary(t.matrix()));
        let img = t.act_on_point(&ProjPoint::new(vec![s("3"), s("0"), s("1")]));
        assert!(img.coords()[2].is_zero());
        assert!(mobius_to_infinity(&s("1"), 2).is_err());
    }

    #[test]
    fn hyperplane_to_infinity_examples() {
        let hinf = Hyperplane::at_infinity(2, Model::Ball);
        assert_eq!(*hyperplane_to_infinity(&hinf).unwrap().matrix(), Matrix::identity(3));
        // t = w/3
        let h = Hyperplane::from_covector(vec![s("0"), s("1/3"), s("-1")], Model::Ball).unwrap();
        let sigma = hyperplane_to_infinity(&h).unwrap();
        assert!(sigma.is_exact());
        assert!(sigma.act_on_hyperplane(&h).proj_eq(&hinf));
        let h2 =
            Hyperplane::from_covector(vec![s("1/5 + i/7"), s("-2/9*i"), s("sqrt(3)/4"), s("1")], Model::Ball).unwrap();
        let sigma2 = hyperplane_to_infinity(&h2).unwrap();
        assert!(sigma2.act_on_hyperplane(&h2).proj_eq(&Hyperplane::at_infinity(3, Model::Ball)));
    }

    #[test]
    fn inverse_and_action() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a = random_exact_automorphism(3, &mut rng);
        assert!(a.compose(&a.invert()).proj_eq(&IndefUnitary::identity(3)));
        let p = ProjPoint::new(vec![s("1/3"), s("i/4"), s("-1/5"), s("1")]);
        assert!(contains(Model::Ball, 3, &a.act_on_point(&p), Region::Interior).unwrap());
    }
}
