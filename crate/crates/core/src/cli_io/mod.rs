//! Map and matrix files, command reports, and the command-line surface.

pub mod commands;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::Matrix;
use crate::poly::{parse_poly, parse_scalar, Poly};
use crate::projective::Model;
use crate::ratmap::{MapError, RationalMap};
use crate::scalar::{Backend, Scalar};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const UNKNOWN: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const CONSTRAINT: i32 = 3;
    pub const VERIFICATION: i32 = 4;
}

#[derive(Clone, Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("constraint violation: {0}")]
    Constraint(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Constraint(_) => exit::CONSTRAINT,
            CliError::Verification(_) => exit::VERIFICATION,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Constraint(_) => "constraint",
            CliError::Verification(_) => "verification",
        }
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        CliError::Constraint(e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Component {
    pub numerator: String,
}

/// A rational map with expression-string coefficients.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub model: Model,
    pub variables: Vec<String>,
    pub components: Vec<Component>,
    pub denominator: String,
    #[serde(default = "exact_backend")]
    pub backend: Backend,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

fn exact_backend() -> Backend {
    Backend::Exact
}

const RESERVED: &[&str] = &["t", "i", "sqrt"];

fn check_names(names: &[String]) -> Result<(), CliError> {
    for (k, v) in names.iter().enumerate() {
        let ident = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ident || RESERVED.contains(&v.as_str()) {
            return Err(CliError::Constraint(format!("invalid variable name {v:?}")));
        }
        if names[..k].contains(v) {
            return Err(CliError::Constraint(format!("duplicate variable name {v:?}")));
        }
    }
    Ok(())
}

/// `z, w` for two variables, otherwise `z1, .., z_{n-1}, w`.
pub fn default_variables(n: usize) -> Vec<String> {
    let mut v = crate::criterion::map_variable_names(n);
    v.pop();
    v
}

impl MapFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map file serializes")
    }

    /// Parses, converts to the declared backend, and runs the structural and coprimality checks.
    pub fn to_map(&self, seed: u64) -> Result<RationalMap, CliError> {
        if self.variables.len() != self.n {
            return Err(CliError::Constraint(format!(
                "{} variables declared for n = {}",
                self.variables.len(),
                self.n
            )));
        }
        if self.components.len() != self.big_n {
            return Err(CliError::Constraint(format!("{} components for N = {}", self.components.len(), self.big_n)));
        }
        if self.n == 0 || self.big_n < self.n {
            return Err(CliError::Constraint(format!("need 1 <= n <= N, got n = {}, N = {}", self.n, self.big_n)));
        }
        check_names(&self.variables)?;
        let parse = |src: &str, what: String| {
            parse_poly(src, &self.variables).map_err(|e| CliError::Parse(format!("{what}: {e}")))
        };
        let mut comps = Vec::with_capacity(self.big_n);
        for (j, c) in self.components.iter().enumerate() {
            comps.push(parse(&c.numerator, format!("component {}", j + 1))?);
        }
        let q = parse(&self.denominator, "denominator".into())?;
        let f = RationalMap::new(comps, q, self.model)?;
        let f = match self.backend {
            Backend::Exact if !f.is_exact() => {
                return Err(CliError::Constraint("exact backend with inexact coefficients".into()))
            }
            Backend::Exact => f,
            Backend::Float => map_to_float(&f),
        };
        f.validate(24, seed)?;
        Ok(f)
    }

    pub fn from_map(f: &RationalMap, variables: Option<Vec<String>>) -> Self {
        let variables = variables.unwrap_or_else(|| default_variables(f.n()));
        MapFile {
            n: f.n(),
            big_n: f.big_n(),
            model: f.model(),
            components: f.numerators().iter().map(|p| Component { numerator: p.format(&variables) }).collect(),
            denominator: f.denominator().format(&variables),
            backend: if f.is_exact() { Backend::Exact } else { Backend::Float },
            variables,
            metadata: BTreeMap::new(),
        }
    }
}

pub fn map_to_float(f: &RationalMap) -> RationalMap {
    let p: Vec<Poly> = f.numerators().iter().map(Poly::to_float).collect();
    RationalMap::new(p, f.denominator().to_float(), f.model()).expect("same shape")
}

/// A matrix with expression-string entries.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        MatrixFile {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix, CliError> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(CliError::Constraint(format!("entries do not form a {}x{} matrix", self.rows, self.cols)));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| {
                r.iter().map(|e| parse_scalar(e).map_err(|err| CliError::Parse(format!("{e:?}: {err}")))).collect()
            })
            .collect::<Result<Vec<Vec<Scalar>>, CliError>>()?;
        Ok(Matrix::from_rows(rows))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix file serializes")
    }
}

/// Comma-separated coefficient expressions; commas inside parentheses do not split.
pub fn parse_covector(src: &str) -> Result<Vec<Scalar>, CliError> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in src.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&src[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(&src[start..]);
    parts
        .into_iter()
        .map(|p| parse_scalar(p.trim()).map_err(|e| CliError::Parse(format!("covector entry {p:?}: {e}"))))
        .collect()
}

/// The outcome of one command, as written with `--json`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    /// Hex SHA-256 of the command name, its arguments and the contents of its input files.
    pub inputs_digest: String,
    pub verdict: String,
    pub payload: serde_json::Value,
    pub backend: Backend,
    pub precision: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub exit_code: i32,
    pub timing_ms: f64,
}

impl Report {
    /// JSON without the timing field, for reproducibility comparisons.
    pub fn canonical(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing_ms");
        v.to_string()
    }
}

/// Incremental digest over length-prefixed input pieces.
#[derive(Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn add(&mut self, piece: &[u8]) -> &mut Self {
        self.0.update((piece.len() as u64).to_le_bytes());
        self.0.update(piece);
        self
    }

    pub fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}
