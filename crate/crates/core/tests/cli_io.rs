mod common;

use ballmap::cli_io::{parse_covector, CliError, Component, MapFile, MatrixFile};
use ballmap::gallery;
use ballmap::poly::Poly;
use ballmap::projective::Model;
use ballmap::ratmap::RationalMap;
use ballmap::scalar::Backend;
use common::s;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn round_trip(f: &RationalMap) -> RationalMap {
    let text = MapFile::from_map(f, None).to_json();
    MapFile::from_json(&text).unwrap().to_map(0).unwrap()
}

fn file(comps: &[&str], q: &str) -> MapFile {
    MapFile {
        n: 2,
        big_n: comps.len(),
        model: Model::Ball,
        variables: vec!["z".into(), "w".into()],
        components: comps.iter().map(|c| Component { numerator: c.to_string() }).collect(),
        denominator: q.into(),
        backend: Backend::Exact,
        metadata: Default::default(),
    }
}

#[test]
fn gallery_maps_round_trip_exactly() {
    let maps = vec![
        gallery::ex41(&s("1/2")).unwrap(),
        gallery::ex42(3, &s("1/3")).unwrap(),
        gallery::f_theta(&s("3/5"), &s("4/5")).unwrap(),
        gallery::g_alpha(&s("5/13"), &s("12/13")).unwrap(),
        gallery::ex33_f(),
        gallery::ex33_g(),
        RationalMap::identity(3),
    ];
    for f in maps {
        let g = round_trip(&f);
        assert_eq!(g, f);
        assert_eq!(MapFile::from_map(&g, None), MapFile::from_map(&f, None));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn random_polynomial_maps_round_trip(seed in any::<u64>(), nvars in 1usize..4, big in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps: Vec<Poly> = (0..nvars + big).map(|_| common::random_poly(&mut rng, nvars, 3, 5)).collect();
        let q = Poly::one(nvars).add(&Poly::var(nvars, 0).scale(&s("1/3*i")));
        let f = RationalMap::new(comps, q, Model::Siegel).unwrap();
        prop_assert_eq!(round_trip(&f), f);
    }
}

#[test]
fn named_variables_are_honoured() {
    let mut m = file(&["x*(1-y/2)", "y^2"], "1-y/2");
    m.variables = vec!["x".into(), "y".into()];
    let f = m.to_map(0).unwrap();
    assert_eq!(
        f,
        MapFile::from_json(&MapFile::from_map(&f, Some(m.variables.clone())).to_json()).unwrap().to_map(0).unwrap()
    );
}

#[test]
fn malformed_files_are_parse_errors() {
    assert!(matches!(MapFile::from_json("{"), Err(CliError::Parse(_))));
    assert!(matches!(MapFile::from_json(r#"{"n": 2}"#), Err(CliError::Parse(_))));
    assert!(matches!(file(&["z +* w", "w"], "1").to_map(0), Err(CliError::Parse(_))));
    assert!(matches!(file(&["u", "w"], "1").to_map(0), Err(CliError::Parse(_))));
    let extra = r#"{"n":1,"N":1,"model":"ball","variables":["z"],"components":[{"numerator":"z"}],"denominator":"1","colour":1}"#;
    assert!(matches!(MapFile::from_json(extra), Err(CliError::Parse(_))));
}

#[test]
fn constraint_violations_are_reported() {
    let mut m = file(&["z", "w"], "1");
    m.big_n = 3;
    assert!(matches!(m.to_map(0), Err(CliError::Constraint(_))));
    let mut m = file(&["z", "w"], "1");
    m.variables = vec!["z".into(), "t".into()];
    assert!(matches!(m.to_map(0), Err(CliError::Constraint(_))));
    let mut m = file(&["z", "w"], "1");
    m.variables = vec!["z".into(), "z".into()];
    assert!(matches!(m.to_map(0), Err(CliError::Constraint(_))));
    assert!(matches!(file(&["z*(1-z/2)", "w*(1-z/2)"], "1-z/2").to_map(0), Err(CliError::Constraint(_))));
    assert!(matches!(file(&["z", "w"], "z").to_map(0), Err(CliError::Constraint(_))));
    assert!(matches!(file(&["z", "0.5*w"], "1").to_map(0), Err(CliError::Constraint(_))));
    let mut m = file(&["z", "0.5*w"], "1");
    m.backend = Backend::Float;
    assert!(!m.to_map(0).unwrap().is_exact());
}

#[test]
fn covectors_split_at_top_level_commas() {
    let v = parse_covector("0, -2*i, (1+sqrt(3))/2").unwrap();
    assert_eq!(v, vec![s("0"), s("-2*i"), s("(1+sqrt(3))/2")]);
    assert!(matches!(parse_covector("1,,2"), Err(CliError::Parse(_))));
}

#[test]
fn matrices_round_trip() {
    let m = gallery::ex33_sigma2().unwrap();
    let f = MatrixFile::from_matrix(m.matrix());
    let back: MatrixFile = serde_json::from_str(&f.to_json()).unwrap();
    assert_eq!(back.to_matrix().unwrap(), *m.matrix());
    let mut bad = back.clone();
    bad.rows += 1;
    assert!(matches!(bad.to_matrix(), Err(CliError::Constraint(_))));
}
