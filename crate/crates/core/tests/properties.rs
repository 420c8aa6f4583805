mod common;

use ballmap::autgroup::{hyperplane_to_infinity, random_exact_automorphism, verify_indef_unitary};
use ballmap::gallery;
use ballmap::hermitian::{check_proper, norm_defect, vanishes_on_sphere, HermForm};
use ballmap::poly::Poly;
use ballmap::projective::{cayley, cayley_hyperplane, contains, Direction, Hyperplane, Model, ProjPoint, Region};
use ballmap::ratmap::{conjugate_by_autos, RationalMap};
use ballmap::sampling::BallSampler;
use ballmap::scalar::Scalar;
use common::{ball_oracle, gauss, gauss_parts, radical, random_poly, scalar_of, siegel_oracle};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gallery_maps() -> Vec<(&'static str, RationalMap)> {
    let (c, s) = (Scalar::ratio(3, 5), Scalar::ratio(4, 5));
    vec![
        ("F_theta", gallery::f_theta(&c, &s).unwrap()),
        ("G_alpha", gallery::g_alpha(&Scalar::ratio(5, 13), &Scalar::ratio(12, 13)).unwrap()),
        ("ex33_F", gallery::ex33_f().cayley_transport().unwrap()),
        ("ex33_G", gallery::ex33_g()),
        ("ex41", gallery::ex41(&Scalar::ratio(1, 2)).unwrap()),
        ("ex42", gallery::ex42(2, &Scalar::ratio(1, 3)).unwrap()),
    ]
}

/// Exact point of the open ball: real and imaginary parts of each coordinate are at most `1/(2n)`.
fn interior_point(rng: &mut impl Rng, n: usize) -> ProjPoint {
    let mut part = |m: i64| ballmap::scalar::q(rng.gen_range(-m..=m), 2 * n as i64 * m);
    let mut x: Vec<Scalar> = (0..n).map(|_| Scalar::gauss(part(7), part(11))).collect();
    x.push(Scalar::one());
    ProjPoint::new(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (radical(&mut r), radical(&mut r), radical(&mut r));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogenize_round_trip(seed in any::<u64>(), extra in 0u32..3) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 2, 4, 6);
        let h = p.homogenize(p.degree() + extra).unwrap();
        prop_assert!(h.poly().is_homogeneous());
        prop_assert_eq!(h.poly().dehomogenize(), p);
    }

    #[test]
    fn exact_divide_inverts_multiplication(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 3, 3, 5);
        let mut g = random_poly(&mut r, 3, 2, 4);
        if g.is_zero() {
            g = Poly::one(3);
        }
        prop_assert_eq!(p.mul(&g).exact_divide(&g).unwrap(), p);
    }

    #[test]
    fn float_and_exact_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y) = (radical(&mut r), radical(&mut r));
        let exact = &(&x * &y) + &x.conj();
        let float = &(&x.to_float() * &y.to_float()) + &x.to_float().conj();
        prop_assert!((exact.to_c64() - float.to_c64()).norm() < 1e-12);
        if !y.is_zero() {
            prop_assert!(((&x / &y).to_c64() - (&x.to_float() / &y.to_float()).to_c64()).norm() < 1e-12);
        }
    }
}

/// Hermitian symmetric perturbation with random Gaussian-rational coefficients.
fn random_form(rng: &mut impl Rng, n: usize) -> HermForm {
    let p = random_poly(rng, 2 * n, 2, 4);
    let h = HermForm::new(n, p);
    let swap: Vec<usize> = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
    let mirror = h.poly().conj_coeffs().embed(2 * n, &swap);
    HermForm::new(n, h.poly().add(&mirror))
}

#[test]
fn sphere_divisibility_matches_evaluation() {
    let mut r = rng(17);
    let n = 2;
    let mut sampler = BallSampler::new(n, 3);
    let points: Vec<Vec<Complex64>> = (0..1000).map(|_| sampler.sphere()).collect();
    let max_on_sphere = |h: &HermForm| points.iter().map(|z| h.eval_c64(z).norm()).fold(0.0, f64::max);
    let sphere = HermForm::sphere(n);
    for _ in 0..50 {
        let mut q = random_form(&mut r, n);
        if q.poly().is_zero() {
            q = HermForm::new(n, Poly::one(2 * n));
        }
        let multiple = HermForm::new(n, sphere.poly().mul(q.poly()));
        assert!(vanishes_on_sphere(&multiple));
        assert!(max_on_sphere(&multiple) < 1e-12);
        let other = multiple.add(&random_form(&mut r, n));
        let numeric = max_on_sphere(&other) < 1e-12;
        assert_eq!(vanishes_on_sphere(&other), numeric, "{:?}", other.poly());
    }
}

#[test]
fn gallery_maps_are_proper_with_symmetric_defect() {
    for (id, f) in gallery_maps() {
        if id == "ex33_G" {
            continue;
        }
        assert!(norm_defect(&f).is_hermitian_symmetric(), "{id}");
        assert!(check_proper(&f, 32, 1).is_proper(), "{id}");
    }
}

#[test]
fn ball_disjointness_matches_oracle() {
    let mut r = rng(23);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..100 {
        let n = r.gen_range(1..=4);
        let cov: Vec<_> = (0..=n).map(|_| gauss_parts(&mut r, 4, 4)).collect();
        let oracle = ball_oracle(&cov, &mut r, 10_000);
        let Ok(h) = Hyperplane::from_covector(cov.iter().map(scalar_of).collect(), Model::Ball) else { continue };
        let verdict = h.ball_disjoint().unwrap();
        assert_eq!(verdict, oracle.disjoint, "{cov:?}");
        if verdict {
            yes += 1;
            assert!(oracle.best_sample > 1.0 - 1e-12);
            assert!(h.closure_witness().is_none());
        } else {
            no += 1;
            assert!(oracle.best_sample <= 1.0 + 1e-12);
            let p = h.closure_witness().unwrap();
            assert!(h.contains_point(&p) && contains(Model::Ball, n, &p, Region::Closure).unwrap());
        }
    }
    assert!(yes > 10 && no > 10, "{yes} / {no}");
}

#[test]
fn siegel_disjointness_matches_oracle() {
    let mut r = rng(29);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..100 {
        let n = r.gen_range(1..=4);
        let k: Vec<_> = (0..n).map(|_| gauss_parts(&mut r, 3, 3)).collect();
        let oracle = siegel_oracle(&k, &mut r, 10_000);
        let h = Hyperplane::from_siegel_form(&k.iter().map(scalar_of).collect::<Vec<_>>());
        let verdict = h.siegel_disjoint().unwrap();
        assert_eq!(verdict, oracle.disjoint, "{k:?}");
        if verdict {
            yes += 1;
            assert!(oracle.best_sample < 0.0);
        } else {
            no += 1;
            assert!(oracle.best_sample >= -1e-12);
            let p = h.closure_witness().unwrap();
            assert!(h.contains_point(&p) && contains(Model::Siegel, n, &p, Region::Closure).unwrap());
        }
    }
    assert!(yes > 10 && no > 10, "{yes} / {no}");
}

#[test]
fn cayley_preserves_regions_and_incidence() {
    let mut r = rng(31);
    for _ in 0..1000 {
        let n = r.gen_range(1..=3);
        let p = ProjPoint::new((0..=n).map(|_| gauss(&mut r, 4, 3)).collect());
        if p.is_zero() {
            continue;
        }
        let b = cayley(&p, Direction::SiegelToBall);
        for region in [Region::Interior, Region::Closure] {
            assert_eq!(contains(Model::Siegel, n, &p, region).unwrap(), contains(Model::Ball, n, &b, region).unwrap());
        }
        assert!(cayley(&b, Direction::BallToSiegel).proj_eq(&p));
    }
    for _ in 0..200 {
        let n = r.gen_range(1..=3);
        let cov: Vec<Scalar> = (0..=n).map(|_| gauss(&mut r, 4, 3)).collect();
        let Ok(h) = Hyperplane::from_covector(cov.clone(), Model::Siegel) else { continue };
        let hb = cayley_hyperplane(&h, Direction::SiegelToBall);
        let mut x: Vec<Scalar> = (0..=n).map(|_| gauss(&mut r, 4, 3)).collect();
        let off = ProjPoint::new(x.clone());
        if let Some(j) = cov.iter().position(|c| !c.is_zero()) {
            // move x onto H along coordinate j
            let value = h.eval(&off);
            x[j] = &x[j] - &(&value / &cov[j]);
        }
        let on = ProjPoint::new(x);
        for p in [on, off] {
            if p.is_zero() {
                continue;
            }
            assert_eq!(h.contains_point(&p), hb.contains_point(&cayley(&p, Direction::SiegelToBall)));
        }
    }
}

#[test]
fn automorphisms_form_a_group_acting_on_the_ball() {
    let mut r = rng(37);
    for k in 0..100 {
        let n = r.gen_range(1..=3);
        let a = random_exact_automorphism(n, &mut r);
        let b = random_exact_automorphism(n, &mut r);
        let ab = a.compose(&b);
        assert!(verify_indef_unitary(ab.matrix()));
        assert!(ab.compose(&ab.invert()).proj_eq(&ballmap::autgroup::IndefUnitary::identity(n)));
        if k < 3 {
            for _ in 0..1000 {
                let p = interior_point(&mut r, n);
                assert!(contains(Model::Ball, n, &p, Region::Interior).unwrap());
                assert!(contains(Model::Ball, n, &ab.act_on_point(&p), Region::Interior).unwrap());
            }
        }
    }
}

#[test]
fn hyperplanes_are_sent_to_infinity_exactly() {
    let mut r = rng(41);
    let mut done = 0;
    while done < 60 {
        let n = r.gen_range(1..=4);
        let mut cov: Vec<Scalar> = (0..n).map(|_| gauss(&mut r, 2, 5)).collect();
        cov.push(Scalar::one());
        let Ok(h) = Hyperplane::from_covector(cov, Model::Ball) else { continue };
        if !h.disjoint() {
            continue;
        }
        let sigma = hyperplane_to_infinity(&h).unwrap();
        assert!(sigma.is_exact());
        assert!(sigma.act_on_hyperplane(&h).proj_eq(&Hyperplane::at_infinity(n, Model::Ball)));
        done += 1;
    }
}

#[test]
fn conjugation_preserves_properness_and_degree() {
    let mut r = rng(43);
    for (id, f) in gallery_maps() {
        let fh = f.projectivize();
        assert!(fh.dehomogenize(f.model()).projectivize().proj_equal(&fh), "{id}");
        let sigma = random_exact_automorphism(f.n(), &mut r);
        let tau = random_exact_automorphism(f.big_n(), &mut r);
        let g = conjugate_by_autos(&tau, &fh, &sigma).unwrap().dehomogenize(Model::Ball);
        assert_eq!(g.degree(), f.degree(), "{id}");
        if id != "ex33_G" {
            assert!(check_proper(&g, 32, 2).is_proper(), "{id}");
        }
    }
}
