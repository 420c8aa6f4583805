mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use ballmap::cli_io::{MapFile, Report};
use ballmap::gallery;
use ballmap::ratmap::RationalMap;
use common::s;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
}

fn ballmap(args: &[&str]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_ballmap")).args(args).output().unwrap();
    Out { code: o.status.code().unwrap(), stdout: String::from_utf8(o.stdout).unwrap() }
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs").join(name);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&v).unwrap()
}

/// Runs with `--json`, checks the report against the schema, and that a second run agrees.
fn report(args: &[&str]) -> Report {
    let mut full = args.to_vec();
    full.push("--json");
    let a = ballmap(&full);
    let v: Value = serde_json::from_str(&a.stdout).unwrap_or_else(|e| panic!("{e}: {}", a.stdout));
    let validator = schema("report.schema.json");
    assert!(validator.is_valid(&v), "{:?}", validator.iter_errors(&v).map(|e| e.to_string()).collect::<Vec<_>>());
    let r: Report = serde_json::from_value(v).unwrap();
    assert_eq!(r.exit_code, a.code);
    let b: Report = serde_json::from_str(&ballmap(&full).stdout).unwrap();
    assert_eq!(r.canonical(), b.canonical());
    r
}

fn write_map(dir: &Path, name: &str, f: &RationalMap) -> PathBuf {
    let path = dir.join(name);
    let text = MapFile::from_map(f, None).to_json();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(schema("mapfile.schema.json").is_valid(&v));
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn degree_of_the_identity_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(dir.path(), "id.json", &RationalMap::identity(2));
    let o = ballmap(&["degree", p(&f)]);
    assert_eq!((o.code, o.stdout.trim()), (0, "1"));
    let r = report(&["degree", p(&f)]);
    assert_eq!(r.payload["degree"], 1);
}

#[test]
fn decide_on_ex41_files() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_map(dir.path(), "ex41.json", &gallery::ex41(&s("1/2")).unwrap());
    let r = report(&["decide", p(&half)]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("not_equivalent", 0));
    assert_eq!(r.payload["replayed"], true);
    assert!(r.payload["certificate"].as_array().unwrap().last().unwrap()["conclusion"]
        .as_str()
        .unwrap()
        .contains("contradiction"));
    let zero = write_map(dir.path(), "ex41_0.json", &gallery::ex41(&s("0")).unwrap());
    let r = report(&["decide", p(&zero)]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("equivalent", 0));
    assert!(r.payload["representative"]["denominator"].is_string());
}

#[test]
fn exhausted_budget_is_unknown() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let f = common::random_polynomial_map(&mut rng);
    let g = common::scramble(&f, &mut rng);
    let dir = tempfile::tempdir().unwrap();
    let path = write_map(dir.path(), "g.json", &g);
    let r = report(&["decide", p(&path), "--budget", "0"]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("unknown", 1));
    let r = report(&["decide", p(&path), "--budget", "2000", "--seed", "3"]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("equivalent", 0));
}

#[test]
fn exit_codes_for_each_failure_kind() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let r = report(&["degree", p(&bad)]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("error", 2));
    assert_eq!(r.payload["kind"], "parse");
    assert_eq!(ballmap(&["degree", "/nonexistent/map.json"]).code, 2);
    assert_eq!(ballmap(&["frobnicate"]).code, 2);

    let mut m = MapFile::from_map(&RationalMap::identity(2), None);
    m.big_n = 5;
    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, m.to_json()).unwrap();
    assert_eq!(report(&["degree", p(&wrong)]).exit_code, 3);
    assert_eq!(report(&["verify-example", "ex41", "--a", "2"]).exit_code, 3);

    let half = RationalMap::new(
        vec![ballmap::poly::Poly::var(2, 0), ballmap::poly::Poly::var(2, 1).scale(&s("1/2"))],
        ballmap::poly::Poly::one(2),
        ballmap::projective::Model::Ball,
    )
    .unwrap();
    let improper = write_map(dir.path(), "improper.json", &half);
    let r = report(&["check-proper", p(&improper)]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("not_proper", 4));
}

#[test]
fn check_pair_on_the_normal_form() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(dir.path(), "f.json", &gallery::ex33_f());
    let good = report(&["check-pair", p(&f), "--H", "0,-2*i,1", "--Hp", "0,0,0,-2/sqrt(3),-3*i,1"]);
    assert_eq!((good.verdict.as_str(), good.exit_code), ("pair_holds", 0));
    let bad = report(&["check-pair", p(&f), "--H", "0,-2*i,1", "--Hp", "0,0,0,2/sqrt(3),-3*i,1"]);
    assert_eq!((bad.verdict.as_str(), bad.exit_code), ("pair_fails", 4));
    assert_eq!(report(&["check-pair", p(&f), "--H", "0,1", "--Hp", "1"]).exit_code, 3);
    let float =
        report(&["check-pair", p(&f), "--H", "0,-2*i,1", "--Hp", "0,0,0,-2/sqrt(3),-3*i,1", "--backend", "float"]);
    assert_eq!(float.verdict, "pair_holds");
}

#[test]
fn polynomialize_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let r = report(&["polynomialize-deg2", "--case", "II", "--e1", "-1", "--c1", "sqrt(13/12)", "--out", p(&out)]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("ok", 0));
    assert_eq!(r.payload["exact"], true);
    assert_eq!(r.payload["y0"]["exact_root"], "-2");
    let g = out.join("G.map.json");
    assert_eq!(report(&["check-proper", p(&g)]).verdict, "proper");
    assert_eq!(ballmap(&["degree", p(&g)]).stdout.trim(), "2");
    let m = schema("matrixfile.schema.json");
    for name in ["sigma.matrix.json", "tau.matrix.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(out.join(name)).unwrap()).unwrap();
        assert!(m.is_valid(&v));
        let file: ballmap::cli_io::MatrixFile = serde_json::from_value(v).unwrap();
        assert!(ballmap::autgroup::verify_indef_unitary(&file.to_matrix().unwrap()));
    }
    assert_eq!(report(&["polynomialize-deg2", "--case", "II", "--c1", "1"]).exit_code, 3);
    assert_eq!(report(&["polynomialize-deg2", "--case", "I", "--c1", "-1"]).exit_code, 3);
}

#[test]
fn verify_example_reports() {
    assert_eq!(report(&["verify-example", "case1"]).exit_code, 0);
    assert_eq!(report(&["verify-example", "ex21_pole"]).exit_code, 0);
    assert_eq!(report(&["verify-example", "ex42", "--n", "2", "--a", "1/2"]).exit_code, 0);
    let r = report(&["verify-example", "ex33", "--backend", "exact"]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("fail", 4));
    let failing: Vec<&str> = r.payload["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false && c["informational"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["printed_identity"]);
    assert_eq!(report(&["verify-example", "nope"]).exit_code, 2);
}

#[test]
fn projectivize_and_base_locus_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_map(dir.path(), "f.json", &gallery::f_theta(&s("3/5"), &s("4/5")).unwrap());
    let o = ballmap(&["projectivize", p(&f)]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 5);
    let r = report(&["base-locus", p(&f)]);
    assert_eq!(r.payload["complete"], true);
    assert_eq!(r.payload["points"], serde_json::json!([["1", "0", "0"]]));
}

#[test]
fn shipped_example_files() {
    let docs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples");
    let m = schema("mapfile.schema.json");
    for name in ["ex41_a_half.map.json", "identity.map.json"] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(docs.join(name)).unwrap()).unwrap();
        assert!(m.is_valid(&v), "{name}");
    }
    let ex41 = docs.join("ex41_a_half.map.json");
    let r = report(&["decide", p(&ex41)]);
    assert_eq!((r.verdict.as_str(), r.exit_code), ("not_equivalent", 0));
    assert_eq!(ballmap(&["degree", p(&docs.join("identity.map.json"))]).stdout.trim(), "1");
}
