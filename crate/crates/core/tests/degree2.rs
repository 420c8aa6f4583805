mod common;

use std::time::Instant;

use ballmap::criterion::{check_pair, decide_polynomial_equivalence, linear_pullback, Decision, SearchConfig};
use ballmap::degree2::{
    build_normal_form, case1_witness, case2_lambdas, find_y0, j_value, polynomialize, target_disjointness,
    NormalFormParams, Polynomialized,
};
use ballmap::hermitian::check_proper;
use ballmap::poly::Poly;
use ballmap::ratmap::conjugate_by_autos;
use ballmap::scalar::{q, Scalar};
use common::gauss;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random case (II) parameters `e1 = -k/40`, `c1 = m/40` subject to `e2 < 0`.
pub fn random_case2(rng: &mut impl Rng) -> NormalFormParams {
    loop {
        let e1 = Scalar::rational(q(-rng.gen_range(2..=80), 40));
        let c1 = Scalar::rational(q(rng.gen_range(1..=80), 40));
        if let Ok(p) = NormalFormParams::case2(e1, c1) {
            return p;
        }
    }
}

fn identity_holds(out: &Polynomialized) -> bool {
    let rep = &out.representative;
    let back = conjugate_by_autos(&rep.tau.invert(), &rep.g_hat, &rep.sigma).unwrap();
    if rep.exact {
        back.proj_equal(&rep.ball_map)
    } else {
        back.proj_distance(&rep.ball_map) < 1e-10
    }
}

#[test]
fn case1_witness_holds_for_twenty_values() {
    for k in 1..=20 {
        let c1 = Scalar::rational(q(k, 10));
        let p = NormalFormParams::case1(c1).unwrap();
        let f = build_normal_form(&p);
        let w = case1_witness(&p).unwrap();
        let e2 = p.e2().clone();
        assert_eq!(&w.mu()[1] * &w.mu()[1], e2);
        assert_eq!(w.lambda()[4], &Scalar::from_i64(2) * &w.mu()[1]);
        assert!(check_pair(&f.projectivize(), &w), "c1 = {k}/10");
        assert!(w.h().disjoint() && w.h_prime().disjoint());
    }
}

#[test]
fn case2_lambdas_pull_back_to_a_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = random_case2(&mut rng);
        let (mu1, mu2) = (gauss(&mut rng, 5, 4), gauss(&mut rng, 5, 4));
        let lambda = case2_lambdas(&p, &mu1, &mu2).unwrap();
        let mut cov = lambda.clone();
        cov.push(Scalar::one());
        let pulled = linear_pullback(&cov, &build_normal_form(&p).projectivize()).unwrap();
        let ell = Poly::linear(&[mu1, mu2, Scalar::one()]);
        assert_eq!(pulled.poly(), &ell.pow(2));
    }
}

#[test]
fn case2_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut exact = 0;
    for _ in 0..50 {
        let p = random_case2(&mut rng);
        let start = Instant::now();
        let y0 = find_y0(&p).unwrap();
        assert!(y0.y.is_negative());
        assert!(j_value(&p, &y0.y).unwrap().is_negative());
        assert!(target_disjointness(&p, &y0.y).unwrap().is_negative());
        let out = polynomialize(&p, 1e-10).unwrap();
        assert!(out.g().denominator().is_constant());
        let r = check_proper(out.g(), 16, 0);
        assert!(
            r.is_proper(),
            "{:?} exact={} e1={} c1={} g={}",
            r.verdict,
            out.is_exact(),
            p.e1(),
            p.c1(),
            ballmap::gallery::format_map(out.g())
        );
        assert!(identity_holds(&out));
        exact += out.is_exact() as usize;
        assert!(start.elapsed().as_secs_f64() < 10.0, "e1 = {}, c1 = {}", p.e1(), p.c1());
    }
    assert_eq!(exact, 50);
}

#[test]
fn case1_is_decided_equivalent() {
    let p = NormalFormParams::case1(Scalar::ratio(1, 2)).unwrap();
    let d = decide_polynomial_equivalence(&build_normal_form(&p), &SearchConfig::default()).unwrap();
    assert!(matches!(d, Decision::Equivalent { .. }), "{}", d.label());
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(NormalFormParams::case2(Scalar::ratio(1, 2), Scalar::one()).is_err());
    assert!(NormalFormParams::case2(Scalar::ratio(-2, 1), Scalar::ratio(1, 2)).is_err());
    assert!(NormalFormParams::case1(Scalar::zero()).is_err());
}
