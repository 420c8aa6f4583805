mod common;

use ballmap::criterion::*;
use ballmap::gallery;
use ballmap::poly::Monomial;
use ballmap::projective::{Hyperplane, Model};
use ballmap::scalar::Scalar;
use common::s;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mono(e: &[u32]) -> Monomial {
    Monomial(e.to_vec())
}

#[test]
fn ex41_certificate_replays_and_names_the_conj_a_equation() {
    let a = s("1/2");
    let f = gallery::ex41(&a).unwrap();
    let fh = f.projectivize();
    let sys = coefficient_system(&fh, Model::Ball);
    let Forced::Contradiction(cert) = solve_forced(&sys) else { panic!("expected a contradiction") };
    replay(&sys, &cert).unwrap();
    assert!(cert.final_monomials().contains(&mono(&[1, 0, 2])));
    let (forced, roots) = cert.incompatible_values().unwrap();
    assert_eq!(forced, &-&a.conj() / &Scalar::from_i64(3));
    assert!(roots.contains(&Scalar::zero()));
    assert!(roots.contains(&(&Scalar::from_i64(-3) * &a.conj())));
}

#[test]
fn ex41_at_zero_is_solved() {
    let f = gallery::ex41(&Scalar::zero()).unwrap();
    let sys = coefficient_system(&f.projectivize(), Model::Ball);
    assert!(matches!(solve_forced(&sys), Forced::Solved(_)));
    let d = decide_polynomial_equivalence(&f, &SearchConfig::default()).unwrap();
    assert_eq!(d.label(), "equivalent");
}

#[test]
fn ex42_certificates_carry_both_values() {
    for (n, a) in [(2, s("1/2")), (3, s("1/3")), (4, s("2/5*i"))] {
        let f = gallery::ex42(n, &a).unwrap();
        let sys = coefficient_system(&f.projectivize(), Model::Ball);
        let Forced::Contradiction(cert) = solve_forced(&sys) else { panic!("n = {n}: expected a contradiction") };
        replay(&sys, &cert).unwrap();
        let (forced, roots) = cert.incompatible_values().unwrap();
        assert_eq!(forced, &-&a.conj() / &Scalar::from_i64(3), "n = {n}");
        let far = &Scalar::from_i64(-3) / &a;
        assert!(roots.contains(&far), "n = {n}: {roots:?}");
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let f = gallery::ex42(2, &s("1/2")).unwrap();
    let sys = coefficient_system(&f.projectivize(), Model::Ball);
    let Forced::Contradiction(cert) = solve_forced(&sys) else { panic!() };
    let mut bad = cert.clone();
    bad.steps[1].conclusion = "mu1 = 1".into();
    assert!(replay(&sys, &bad).is_err());
    let mut short = cert.clone();
    short.steps.pop();
    assert!(replay(&sys, &short).is_err());
    let other = coefficient_system(&gallery::ex42(2, &s("1/3")).unwrap().projectivize(), Model::Ball);
    assert!(replay(&other, &cert).is_err());
}

#[test]
fn case2_forced_lambdas_match_the_closed_form() {
    let p = gallery::ex33_params();
    let f = ballmap::degree2::build_normal_form(&p);
    let sys = coefficient_system(&f.projectivize(), Model::Siegel);
    let part = match solve_forced(&sys) {
        Forced::Solved(p) | Forced::Stuck(p) => p,
        Forced::Contradiction(c) => panic!("{:?}", c.final_step()),
    };
    let u = sys.unknowns;
    let mu = [s("1/2 - i"), s("-2*i")];
    let vals = part.evaluate(&[(u.mu(0), mu[0].clone()), (u.mu(1), mu[1].clone())]);
    let expected = ballmap::degree2::case2_lambdas(&p, &mu[0], &mu[1]).unwrap();
    for j in 0..5 {
        assert_eq!(vals[u.lambda(j)], expected[j], "lambda{}", j + 1);
    }
}

#[test]
fn case2_search_finds_the_imaginary_slice() {
    let f = gallery::ex33_f();
    match search_witness(&f.projectivize(), Model::Siegel, &SearchConfig::default()) {
        SearchOutcome::Found { witness, source, .. } => {
            assert!(witness.is_exact(), "{source:?}");
            assert!(check_pair(&f.projectivize(), &witness));
            assert!(witness.h().disjoint() && witness.h_prime().disjoint());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn decide_on_the_printed_polynomial_map() {
    let g = gallery::ex33_g();
    let d = decide_polynomial_equivalence(&g, &SearchConfig::default()).unwrap();
    match d {
        Decision::Equivalent { witness, representative, .. } => {
            assert!(witness.h().disjoint() && witness.h_prime().disjoint());
            assert!(pair_residual(&g.projectivize(), witness.h(), witness.h_prime()) < 1e-10);
            assert!(representative.expect("representative").g.denominator().is_constant());
        }
        other => panic!("{}", other.label()),
    }
}

#[test]
fn improper_maps_are_refused() {
    let v = ["z".to_string(), "w".to_string()];
    let p = |e: &str| ballmap::poly::parse_poly(e, &v).unwrap();
    let f = ballmap::ratmap::RationalMap::new(vec![p("z"), p("2*w")], p("1"), Model::Ball).unwrap();
    assert!(matches!(decide_polynomial_equivalence(&f, &SearchConfig::default()), Err(CriterionError::Improper(_))));
}

#[test]
fn scrambled_polynomial_maps_are_recovered() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let f = common::random_polynomial_map(&mut rng);
        let g = common::scramble(&f, &mut rng);
        let d = decide_polynomial_equivalence(&g, &SearchConfig { budget: 2000, ..Default::default() }).unwrap();
        let Decision::Equivalent { witness, representative, .. } = d else { panic!("{}", d.label()) };
        assert!(pair_residual(&g.projectivize(), witness.h(), witness.h_prime()) < 1e-10);
        let rep = representative.expect("representative");
        assert!(rep.g.denominator().is_constant());
        assert_eq!(rep.g.degree(), f.degree());
    }
}

#[test]
fn check_pair_matches_pointwise_inclusions() {
    let f = gallery::ex33_f();
    let fh = f.projectivize();
    let w = gallery::ex33_witness().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let on_h = |p: &[Complex64], h: &Hyperplane| -> Complex64 {
        h.covector().iter().zip(p).map(|(c, x)| c.to_c64() * x).sum()
    };
    let cov: Vec<Complex64> = w.h().covector().iter().map(Scalar::to_c64).collect();
    for _ in 0..1000 {
        // A point of H: pick z, w freely and solve for t.
        let (z, ww) = (common::c64(&mut rng, 2.0), common::c64(&mut rng, 2.0));
        let t = -(cov[0] * z + cov[1] * ww) / cov[2];
        let p = [z, ww, t];
        let img = fh.eval_c64(&p);
        let scale = img.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale < 1e-9 {
            continue;
        }
        assert!(on_h(&img, w.h_prime()).norm() < 1e-9 * scale);
        let q = [z, ww, t + Complex64::new(rng.gen_range(0.1..1.0), 0.0)];
        let img = fh.eval_c64(&q);
        let scale = img.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale > 1e-9 {
            assert!(on_h(&img, w.h_prime()).norm() > 1e-9 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn power_of_linear_recovers_the_form(seed in any::<u64>(), d in 2u32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<Scalar> = (0..3).map(|_| common::gauss(&mut rng, 4, 3)).collect();
        prop_assume!(!coeffs.iter().all(Scalar::is_zero));
        let l = ballmap::poly::Poly::linear(&coeffs);
        let (m, c) = power_of_linear(&l.pow(d), d).unwrap();
        let lm = ballmap::poly::Poly::linear(&m);
        prop_assert_eq!(lm.pow(d).scale(&c), l.pow(d));
        // Up to scale, the recovered form is the original.
        let k = coeffs.iter().position(|x| !x.is_zero()).unwrap();
        let r = &m[k] / &coeffs[k];
        for j in 0..3 {
            prop_assert_eq!(&coeffs[j] * &r, m[j].clone());
        }
    }
}
