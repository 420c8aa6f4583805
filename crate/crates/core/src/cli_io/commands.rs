//! Argument definitions and command execution.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use super::{exit, parse_covector, CliError, InputDigest, MapFile, MatrixFile, Report};
use crate::criterion::{
    check_pair, coefficient_system, decide_polynomial_equivalence, map_variable_names, pair_residual, pair_scale,
    replay, Decision, SearchConfig, WitnessPair,
};
use crate::degree2::{polynomialize, NormalFormParams};
use crate::gallery::{self, FixtureParams};
use crate::hermitian::{check_proper, Properness};
use crate::poly::parse_scalar;
use crate::projective::Hyperplane;
use crate::ratmap::{LocusScope, RationalMap};
use crate::scalar::{default_eps, set_defaults, Backend, Scalar};

#[derive(Parser, Debug)]
#[command(name = "ballmap", version, about = "Polynomial equivalence of proper rational ball maps")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Arithmetic backend; defaults to the one declared in the map file.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    /// Mantissa bits of float scalars.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision: usize,
    /// Acceptance tolerance for float verification.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScopeArg {
    Infinity,
    Sampled,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseArg {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sphere divisibility and denominator test.
    CheckProper {
        mapfile: PathBuf,
    },
    Degree {
        mapfile: PathBuf,
    },
    /// Homogeneous components in the variables of the file plus `t`.
    Projectivize {
        mapfile: PathBuf,
    },
    /// Common zeros of the homogeneous components.
    BaseLocus {
        mapfile: PathBuf,
        #[arg(long, value_enum, default_value_t = ScopeArg::Infinity)]
        scope: ScopeArg,
    },
    /// The pullback identity for a pair of hyperplane covectors (`t` coefficient last).
    CheckPair {
        mapfile: PathBuf,
        #[arg(long = "H", allow_hyphen_values = true)]
        h: String,
        #[arg(long = "Hp", allow_hyphen_values = true)]
        hp: String,
    },
    /// Decides polynomial equivalence.
    Decide {
        mapfile: PathBuf,
        /// Maximum number of numeric starts.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Degree-two normal form pipeline.
    #[command(name = "polynomialize-deg2")]
    PolynomializeDeg2 {
        #[arg(long = "case", value_enum)]
        case: CaseArg,
        #[arg(long, allow_hyphen_values = true)]
        e1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        /// Directory for the output map and matrix files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the checks attached to a named example.
    VerifyExample {
        id: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        cos: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sin: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckProper { .. } => "check-proper",
            Command::Degree { .. } => "degree",
            Command::Projectivize { .. } => "projectivize",
            Command::BaseLocus { .. } => "base-locus",
            Command::CheckPair { .. } => "check-pair",
            Command::Decide { .. } => "decide",
            Command::PolynomializeDeg2 { .. } => "polynomialize-deg2",
            Command::VerifyExample { .. } => "verify-example",
        }
    }
}

struct Outcome {
    verdict: String,
    payload: Value,
    exit_code: i32,
    text: String,
}

impl Outcome {
    fn new(verdict: &str, payload: Value, exit_code: i32, text: String) -> Self {
        Outcome { verdict: verdict.into(), payload, exit_code, text }
    }
}

/// A finished command: the report and its human-readable rendering.
pub struct Run {
    pub report: Report,
    pub text: String,
}

impl Run {
    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.report).expect("report serializes")
        } else {
            self.text.clone()
        }
    }
}

struct Ctx<'a> {
    g: &'a GlobalArgs,
    digest: InputDigest,
    backend: Backend,
}

impl Ctx<'_> {
    fn load(&mut self, path: &Path) -> Result<(MapFile, RationalMap), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        self.digest.add(text.as_bytes());
        let mut file = MapFile::from_json(&text)?;
        match self.g.backend {
            Some(b) => file.backend = b.into(),
            None => self.backend = file.backend,
        }
        let f = file.to_map(self.g.seed)?;
        Ok((file, f))
    }

    fn scalar(&mut self, src: &str, what: &str) -> Result<Scalar, CliError> {
        self.digest.add(src.as_bytes());
        let x = parse_scalar(src).map_err(|e| CliError::Parse(format!("{what}: {e}")))?;
        Ok(if self.backend == Backend::Float { x.to_float() } else { x })
    }
}

pub fn run(cli: &Cli) -> Run {
    let start = Instant::now();
    let g = &cli.global;
    set_defaults(g.precision, default_eps());
    let mut ctx =
        Ctx { g, digest: InputDigest::default(), backend: g.backend.map(Into::into).unwrap_or(Backend::Exact) };
    ctx.digest.add(cli.command.name().as_bytes());
    ctx.digest.add(format!("{:?}", cli.command).as_bytes());
    let outcome = execute(&cli.command, &mut ctx).unwrap_or_else(|e| {
        Outcome::new("error", json!({ "kind": e.kind(), "message": e.to_string() }), e.exit_code(), e.to_string())
    });
    let Ctx { digest, backend, .. } = ctx;
    let report = Report {
        command: cli.command.name().into(),
        inputs_digest: digest.finish(),
        verdict: outcome.verdict,
        payload: outcome.payload,
        backend,
        precision: g.precision,
        tolerance: g.tolerance,
        seed: g.seed,
        exit_code: outcome.exit_code,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Run { report, text: outcome.text }
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    match cmd {
        Command::CheckProper { mapfile } => {
            let (_, f) = ctx.load(mapfile)?;
            let r = check_proper(&f, 32, ctx.g.seed);
            let proper = r.is_proper();
            let text = match &r.verdict {
                Properness::Proper => "proper".to_string(),
                Properness::NotSpherePreserving => "not proper: the sphere is not mapped to the sphere".to_string(),
                Properness::DenominatorVanishes { point } => {
                    format!("not proper: denominator vanishes at ({})", point.join(", "))
                }
            };
            let payload = serde_json::to_value(&r).expect("serializes");
            let code = if proper { exit::OK } else { exit::VERIFICATION };
            Ok(Outcome::new(if proper { "proper" } else { "not_proper" }, payload, code, text))
        }
        Command::Degree { mapfile } => {
            let (_, f) = ctx.load(mapfile)?;
            let d = f.degree();
            Ok(Outcome::new("ok", json!({ "degree": d }), exit::OK, d.to_string()))
        }
        Command::Projectivize { mapfile } => {
            let (file, f) = ctx.load(mapfile)?;
            let mut names = file.variables.clone();
            names.push("t".into());
            let comps: Vec<String> = f.projectivize().comps().iter().map(|c| c.format(&names)).collect();
            let text = comps.join("\n");
            Ok(Outcome::new("ok", json!({ "variables": names, "components": comps }), exit::OK, text))
        }
        Command::BaseLocus { mapfile, scope } => {
            let (_, f) = ctx.load(mapfile)?;
            let scope = match scope {
                ScopeArg::Infinity => LocusScope::AtInfinity,
                ScopeArg::Sampled => LocusScope::GlobalSampled,
            };
            let b = f.projectivize().base_locus(scope, ctx.g.seed);
            let points: Vec<Vec<String>> = b.points.iter().map(|p| strings(p.coords())).collect();
            let mut text: Vec<String> = points.iter().map(|p| format!("[{}]", p.join(" : "))).collect();
            text.push(format!("complete: {}", b.complete));
            Ok(Outcome::new("ok", json!({ "points": points, "complete": b.complete }), exit::OK, text.join("\n")))
        }
        Command::CheckPair { mapfile, h, hp } => {
            let (_, f) = ctx.load(mapfile)?;
            ctx.digest.add(h.as_bytes()).add(hp.as_bytes());
            let float = ctx.backend == Backend::Float;
            let conv = |v: Vec<Scalar>| if float { v.iter().map(Scalar::to_float).collect() } else { v };
            let hv = conv(parse_covector(h)?);
            let hpv = conv(parse_covector(hp)?);
            if hv.len() != f.n() + 1 || hpv.len() != f.big_n() + 1 {
                return Err(CliError::Constraint(format!(
                    "covectors need {} and {} entries, got {} and {}",
                    f.n() + 1,
                    f.big_n() + 1,
                    hv.len(),
                    hpv.len()
                )));
            }
            let hh = Hyperplane::from_covector(hv, f.model()).map_err(|e| CliError::Constraint(e.to_string()))?;
            let hhp = Hyperplane::from_covector(hpv, f.model()).map_err(|e| CliError::Constraint(e.to_string()))?;
            let fh = f.projectivize();
            let c = pair_scale(&fh, &hh, &hhp);
            let identity = c.as_ref().is_some_and(|c| {
                WitnessPair::new(hh.clone(), hhp.clone(), c.clone()).is_ok_and(|w| check_pair(&fh, &w))
            }) || (float && pair_residual(&fh, &hh, &hhp) < ctx.g.tolerance);
            let (dh, dhp) = (hh.disjoint(), hhp.disjoint());
            let ok = identity && dh && dhp;
            let payload = json!({
                "identity": identity,
                "scale": c.map(|c| c.to_string()),
                "residual": pair_residual(&fh, &hh, &hhp),
                "h_disjoint": dh,
                "h_prime_disjoint": dhp,
            });
            let text = format!("identity: {identity}\nH disjoint: {dh}\nH' disjoint: {dhp}");
            Ok(Outcome::new(
                if ok { "pair_holds" } else { "pair_fails" },
                payload,
                if ok { exit::OK } else { exit::VERIFICATION },
                text,
            ))
        }
        Command::Decide { mapfile, budget } => {
            let (file, f) = ctx.load(mapfile)?;
            let cfg = SearchConfig {
                budget: *budget,
                seed: ctx.g.seed,
                tolerance: ctx.g.tolerance,
                ..SearchConfig::default()
            };
            let d = decide_polynomial_equivalence(&f, &cfg).map_err(|e| CliError::Constraint(e.to_string()))?;
            Ok(decision_outcome(&file.variables, &f, &d))
        }
        Command::PolynomializeDeg2 { case, e1, c1, out } => {
            let c1 = ctx.scalar(c1, "c1")?;
            let params = match case {
                CaseArg::I => NormalFormParams::case1(c1),
                CaseArg::II => {
                    let e1 = e1.as_deref().ok_or_else(|| CliError::Constraint("case II needs --e1".into()))?;
                    NormalFormParams::case2(ctx.scalar(e1, "e1")?, c1)
                }
            }
            .map_err(|e| CliError::Constraint(e.to_string()))?;
            let p = polynomialize(&params, ctx.g.tolerance).map_err(|e| CliError::Verification(e.to_string()))?;
            let rep = &p.representative;
            let g_file = MapFile::from_map(p.g(), None);
            let f_file = MapFile::from_map(&p.f, None);
            let sigma = MatrixFile::from_matrix(rep.sigma.matrix());
            let tau = MatrixFile::from_matrix(rep.tau.matrix());
            let mut written = Vec::new();
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Constraint(format!("{}: {e}", dir.display())))?;
                for (name, body) in [
                    ("G.map.json", g_file.to_json()),
                    ("F.map.json", f_file.to_json()),
                    ("sigma.matrix.json", sigma.to_json()),
                    ("tau.matrix.json", tau.to_json()),
                ] {
                    let path = dir.join(name);
                    std::fs::write(&path, body)
                        .map_err(|e| CliError::Constraint(format!("{}: {e}", path.display())))?;
                    written.push(path.display().to_string());
                }
            }
            let y0 = p.y0.as_ref().map(|y| {
                json!({
                    "lo": y.lo.to_string(),
                    "hi": y.hi.to_string(),
                    "exact_root": y.exact_root.as_ref().map(Scalar::to_string),
                    "y": y.y.to_string(),
                    "j": y.j.to_string(),
                })
            });
            let payload = json!({
                "exact": p.is_exact(),
                "y0": y0,
                "witness": p.witness.view(),
                "h_ball": strings(rep.h_ball.covector()),
                "h_prime_ball": strings(rep.h_prime_ball.covector()),
                "F": f_file,
                "G": g_file,
                "sigma": sigma,
                "tau": tau,
                "written": written,
            });
            let text = format!("G = {}\nexact: {}", gallery::format_map(p.g()), p.is_exact());
            Ok(Outcome::new("ok", payload, exit::OK, text))
        }
        Command::VerifyExample { id, a, n, cos, sin, c1 } => {
            let mut params = FixtureParams { n: *n, ..FixtureParams::default() };
            if let Some(a) = a {
                params.a = Some(ctx.scalar(a, "a")?);
            }
            if let Some(c1) = c1 {
                params.c1 = Some(ctx.scalar(c1, "c1")?);
            }
            match (cos, sin) {
                (Some(c), Some(s)) => params.trig = Some((ctx.scalar(c, "cos")?, ctx.scalar(s, "sin")?)),
                (None, None) => {}
                _ => return Err(CliError::Constraint("--cos and --sin go together".into())),
            }
            let cfg = SearchConfig { seed: ctx.g.seed, tolerance: ctx.g.tolerance, ..SearchConfig::default() };
            let r = gallery::verify_example(id, &params, &cfg).map_err(|e| match e {
                gallery::GalleryError::UnknownId(_) => CliError::Parse(e.to_string()),
                gallery::GalleryError::Validation(_) => CliError::Verification(e.to_string()),
                _ => CliError::Constraint(e.to_string()),
            })?;
            let text: Vec<String> = r
                .checks
                .iter()
                .map(|c| {
                    let mark = match (c.passed, c.informational) {
                        (true, _) => "ok  ",
                        (false, true) => "note",
                        (false, false) => "FAIL",
                    };
                    format!("{mark} {}: {}", c.name, c.detail)
                })
                .chain([format!("{}: {}", r.id, if r.passed { "pass" } else { "fail" })])
                .collect();
            let code = if r.passed { exit::OK } else { exit::VERIFICATION };
            let payload = serde_json::to_value(&r).expect("serializes");
            Ok(Outcome::new(if r.passed { "pass" } else { "fail" }, payload, code, text.join("\n")))
        }
    }
}

/// Verdict label and JSON payload of a decision, as in `decide` reports.
pub fn decision_json(variables: &[String], f: &RationalMap, d: &Decision) -> (String, Value) {
    let o = decision_outcome(variables, f, d);
    (o.verdict, o.payload)
}

fn decision_outcome(variables: &[String], f: &RationalMap, d: &Decision) -> Outcome {
    match d {
        Decision::Equivalent { witness, source, residual, representative } => {
            let g = representative.as_ref().map(|r| MapFile::from_map(&r.g, Some(variables.to_vec())));
            let mut text = format!("equivalent\nmu = ({})", strings(&witness.mu()).join(", "));
            if let Some(g) = &g {
                let comps: Vec<&str> = g.components.iter().map(|c| c.numerator.as_str()).collect();
                text.push_str(&format!("\nG = ({}) / ({})", comps.join(", "), g.denominator));
            }
            let payload = json!({
                "witness": witness.view(),
                "source": source,
                "residual": residual,
                "representative": g,
            });
            Outcome::new("equivalent", payload, exit::OK, text)
        }
        Decision::NotEquivalent { certificate } => {
            let sys = coefficient_system(&f.projectivize(), f.model());
            let replayed = replay(&sys, certificate).is_ok();
            let mut text = vec!["not equivalent".to_string()];
            text.extend(
                certificate.steps.iter().map(|s| format!("[{}] {} => {}", s.monomial, s.equation, s.conclusion)),
            );
            let payload = json!({
                "unknowns": sys.unknown_names(),
                "variables": map_variable_names(f.n()),
                "certificate": certificate.steps,
                "replayed": replayed,
            });
            Outcome::new("not_equivalent", payload, exit::OK, text.join("\n"))
        }
        Decision::Unknown { reason, feasible, starts, residual_system } => {
            let payload = json!({
                "reason": reason,
                "feasible": feasible,
                "starts": starts,
                "residual_system": residual_system,
            });
            Outcome::new("unknown", payload, exit::UNKNOWN, format!("unknown: {reason}"))
        }
    }
}
