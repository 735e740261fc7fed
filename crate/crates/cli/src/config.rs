//! Command-line flags, the JSON config file and their merge into a
//! [`RunConfig`]. Precedence: flags, then the config file, then
//! `TRACELAB_SEED` (seed only), then defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use tracelab_core::explorer::ProbeRegion;
use tracelab_core::funclass::ScalarFunctionSpec;
use tracelab_core::matcore::io::{hermitian_from_json, matrix_from_json};
use tracelab_core::matcore::{Ensemble, GeneralMatrix, HermitianMatrix};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_TOL_REL: f64 = 1e-9;
pub const DEFAULT_DIMS: [usize; 3] = [2, 3, 4];
pub const DEFAULT_BUDGET: usize = 500;
pub const SEED_ENV: &str = "TRACELAB_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "tracelab",
    version,
    about = "Numeric verification of trace inequalities for completely monotone and Bernstein functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    /// Run the catalog over its proven regions; exit 1 on any FAIL.
    Verify,
    /// Sweep a parameter x dimension grid and summarize each cell.
    Sweep,
    /// Search for the most negative gap by restarts and perturbation.
    Search,
    /// Sweep an open region; never fails.
    Probe,
    /// Reproduce the explicit counterexample and the quadratic equality cases.
    Repro,
}

impl CommandKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "verify" => CommandKind::Verify,
            "sweep" => CommandKind::Sweep,
            "search" => CommandKind::Search,
            "probe" => CommandKind::Probe,
            "repro" => CommandKind::Repro,
            _ => return None,
        })
    }
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Case identifiers (comma separated), or a region name for `probe`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub case: Option<Vec<String>>,
    /// Exponent grid (`t` for GOLDEN_THOMPSON).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    /// Power-mean exponent grid for COR_PMEAN.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    #[arg(long, global = true, value_delimiter = ',')]
    pub dim: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative verdict tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// wishart, rank_deficient or rotated_uniform.
    #[arg(long, global = true)]
    pub ensemble: Option<String>,
    /// json or csv.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Evaluations per search.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// FALTQ_HIGH, FALTQ_NEG or NORMCOMP_HIGH.
    #[arg(long, global = true)]
    pub region: Option<String>,
    /// Write `q,min_gap,max_gap` rows here.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Matrix file for operand A.
    #[arg(long, global = true)]
    pub a: Option<PathBuf>,
    /// Matrix file for operand B (or the upper block).
    #[arg(long, global = true)]
    pub b: Option<PathBuf>,
    /// Matrix file for the off-diagonal block C.
    #[arg(long, global = true)]
    pub c: Option<PathBuf>,
    /// Matrix file for the lower block D.
    #[arg(long, global = true)]
    pub d: Option<PathBuf>,
    /// Scalar function file for MAIN_TRACE and TRACE_SUBADD.
    #[arg(long, global = true)]
    pub function: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

/// Explicit operands; when any is present `verify` evaluates them instead
/// of sampling.
#[derive(Clone, Debug, Default)]
pub struct Matrices {
    pub a: Option<HermitianMatrix>,
    pub b: Option<HermitianMatrix>,
    pub c: Option<GeneralMatrix>,
    pub d: Option<HermitianMatrix>,
}

impl Matrices {
    pub fn any(&self) -> bool {
        self.a.is_some() || self.b.is_some() || self.c.is_some() || self.d.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    /// `None` selects each command's default; an empty list is an error.
    pub cases: Option<Vec<String>>,
    pub q_grid: Option<Vec<f64>>,
    pub p_grid: Option<Vec<f64>>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol_rel: f64,
    pub ensemble: Ensemble,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub budget: usize,
    pub region: Option<ProbeRegion>,
    pub plot: Option<PathBuf>,
    pub function: Option<ScalarFunctionSpec>,
    pub matrices: Matrices,
}

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        RunConfig {
            command,
            cases: None,
            q_grid: None,
            p_grid: None,
            dims: DEFAULT_DIMS.to_vec(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            tol_rel: DEFAULT_TOL_REL,
            ensemble: Ensemble::Wishart,
            format: Format::Json,
            out: None,
            budget: DEFAULT_BUDGET,
            region: None,
            plot: None,
            function: None,
            matrices: Matrices::default(),
        }
    }
}

/// A configuration problem; maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub key: String,
    pub message: String,
}

impl UsageError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        UsageError {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for UsageError {}

type Usage<T> = Result<T, UsageError>;

/// Merges flags, the optional config file and the seed environment value.
pub fn resolve(cli: &Cli, env_seed: Option<&str>) -> Usage<RunConfig> {
    let mut cfg = RunConfig::defaults(cli.command);
    let mut seed_set = false;
    if let Some(path) = &cli.flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new("config", format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| UsageError::new("config", format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        seed_set = apply_file(&mut cfg, &value, &base)?;
    }
    if !seed_set && cli.flags.seed.is_none() {
        if let Some(s) = env_seed {
            cfg.seed = s
                .trim()
                .parse()
                .map_err(|_| UsageError::new(SEED_ENV, format!("`{s}` is not an unsigned integer")))?;
        }
    }
    apply_flags(&mut cfg, &cli.flags)?;
    validate(&cfg)?;
    Ok(cfg)
}

fn apply_flags(cfg: &mut RunConfig, f: &Flags) -> Usage<()> {
    if let Some(c) = &f.case {
        cfg.cases = Some(c.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    if let Some(q) = &f.q {
        cfg.q_grid = Some(q.clone());
    }
    if let Some(p) = &f.p {
        cfg.p_grid = Some(p.clone());
    }
    if let Some(d) = &f.dim {
        cfg.dims = d.clone();
    }
    if let Some(t) = f.trials {
        cfg.trials = t;
    }
    if let Some(s) = f.seed {
        cfg.seed = s;
    }
    if let Some(t) = f.tol {
        cfg.tol_rel = t;
    }
    if let Some(e) = &f.ensemble {
        cfg.ensemble = e.parse().map_err(|_| UsageError::new("ensemble", format!("unknown ensemble `{e}`")))?;
    }
    if let Some(s) = &f.format {
        cfg.format = Format::parse(s).ok_or_else(|| UsageError::new("format", format!("expected json or csv, got `{s}`")))?;
    }
    if let Some(o) = &f.out {
        cfg.out = Some(o.clone());
    }
    if let Some(b) = f.budget {
        cfg.budget = b;
    }
    if let Some(r) = &f.region {
        cfg.region = Some(r.parse().map_err(|_| UsageError::new("region", format!("unknown region `{r}`")))?);
    }
    if let Some(p) = &f.plot {
        cfg.plot = Some(p.clone());
    }
    let load = |key: &str, path: &Path| -> Usage<Value> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new(key, format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| UsageError::new(key, format!("{}: {e}", path.display())))
    };
    if let Some(p) = &f.a {
        cfg.matrices.a = Some(hermitian(&load("a", p)?, "a")?);
    }
    if let Some(p) = &f.b {
        cfg.matrices.b = Some(hermitian(&load("b", p)?, "b")?);
    }
    if let Some(p) = &f.c {
        cfg.matrices.c = Some(general(&load("c", p)?, "c")?);
    }
    if let Some(p) = &f.d {
        cfg.matrices.d = Some(hermitian(&load("d", p)?, "d")?);
    }
    if let Some(p) = &f.function {
        cfg.function = Some(function(&load("function", p)?)?);
    }
    Ok(())
}

/// Applies a config document; returns whether it set the seed.
fn apply_file(cfg: &mut RunConfig, value: &Value, base: &Path) -> Usage<bool> {
    let map = value
        .as_object()
        .ok_or_else(|| UsageError::new("config", "top level must be a JSON object"))?;
    let mut seed_set = false;
    for (key, v) in map {
        match key.as_str() {
            "command" => {
                let s = string(v, key)?;
                let kind = CommandKind::parse(&s)
                    .ok_or_else(|| UsageError::new(key, format!("unknown command `{s}`")))?;
                if kind != cfg.command {
                    return Err(UsageError::new(
                        key,
                        format!("config is for `{s}` but the command line runs another command"),
                    ));
                }
            }
            "case" | "cases" => cfg.cases = Some(strings(v, key)?),
            "q" | "q_grid" => cfg.q_grid = Some(numbers(v, key)?),
            "p" | "p_grid" => cfg.p_grid = Some(numbers(v, key)?),
            "dim" | "dims" => cfg.dims = integers(v, key)?.into_iter().map(|d| d as usize).collect(),
            "trials" => cfg.trials = integer(v, key)? as usize,
            "seed" => {
                cfg.seed = integer(v, key)?;
                seed_set = true;
            }
            "tol" | "tol_rel" => cfg.tol_rel = number(v, key)?,
            "ensemble" => {
                let s = string(v, key)?;
                cfg.ensemble = s.parse().map_err(|_| UsageError::new(key, format!("unknown ensemble `{s}`")))?;
            }
            "format" => {
                let s = string(v, key)?;
                cfg.format = Format::parse(&s).ok_or_else(|| UsageError::new(key, format!("expected json or csv, got `{s}`")))?;
            }
            "out" => cfg.out = Some(PathBuf::from(string(v, key)?)),
            "plot" => cfg.plot = Some(PathBuf::from(string(v, key)?)),
            "budget" => cfg.budget = integer(v, key)? as usize,
            "region" => {
                let s = string(v, key)?;
                cfg.region = Some(s.parse().map_err(|_| UsageError::new(key, format!("unknown region `{s}`")))?);
            }
            "function" => cfg.function = Some(function(v)?),
            "a" => cfg.matrices.a = Some(hermitian(&inline_or_file(v, key, base)?, key)?),
            "b" => cfg.matrices.b = Some(hermitian(&inline_or_file(v, key, base)?, key)?),
            "c" => cfg.matrices.c = Some(general(&inline_or_file(v, key, base)?, key)?),
            "d" => cfg.matrices.d = Some(hermitian(&inline_or_file(v, key, base)?, key)?),
            other => return Err(UsageError::new(other, "unknown config key")),
        }
    }
    Ok(seed_set)
}

fn validate(cfg: &RunConfig) -> Usage<()> {
    if matches!(&cfg.cases, Some(c) if c.is_empty()) {
        return Err(UsageError::new("case", "case selection is empty"));
    }
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d == 0 || d > 64) {
        return Err(UsageError::new("dim", "dimensions must be a non-empty list in 1..=64"));
    }
    if cfg.trials == 0 {
        return Err(UsageError::new("trials", "must be >= 1"));
    }
    if cfg.budget == 0 {
        return Err(UsageError::new("budget", "must be >= 1"));
    }
    if !(cfg.tol_rel >= 0.0 && cfg.tol_rel.is_finite()) {
        return Err(UsageError::new("tol", "must be a finite number >= 0"));
    }
    for (key, grid) in [("q", &cfg.q_grid), ("p", &cfg.p_grid)] {
        if let Some(g) = grid {
            if g.is_empty() || g.iter().any(|x| !x.is_finite()) {
                return Err(UsageError::new(key, "grid must be a non-empty list of finite numbers"));
            }
        }
    }
    Ok(())
}

fn inline_or_file(v: &Value, key: &str, base: &Path) -> Usage<Value> {
    match v {
        Value::String(p) => {
            let path = base.join(p);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| UsageError::new(key, format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| UsageError::new(key, format!("{}: {e}", path.display())))
        }
        Value::Object(_) => Ok(v.clone()),
        _ => Err(UsageError::new(key, "expected a matrix object or a file path")),
    }
}

fn hermitian(v: &Value, key: &str) -> Usage<HermitianMatrix> {
    hermitian_from_json(v.clone()).map_err(|e| UsageError::new(key, e.to_string()))
}

fn general(v: &Value, key: &str) -> Usage<GeneralMatrix> {
    matrix_from_json(v.clone()).map_err(|e| UsageError::new(key, e.to_string()))
}

fn function(v: &Value) -> Usage<ScalarFunctionSpec> {
    serde_json::from_value(v.clone()).map_err(|e| UsageError::new("function", e.to_string()))
}

fn string(v: &Value, key: &str) -> Usage<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| UsageError::new(key, "expected a string"))
}

fn strings(v: &Value, key: &str) -> Usage<Vec<String>> {
    match v {
        Value::String(s) => Ok(if s.trim().is_empty() { vec![] } else { vec![s.trim().to_string()] }),
        Value::Array(items) => items.iter().map(|x| string(x, key)).collect(),
        _ => Err(UsageError::new(key, "expected a string or a list of strings")),
    }
}

fn number(v: &Value, key: &str) -> Usage<f64> {
    v.as_f64().ok_or_else(|| UsageError::new(key, "expected a number"))
}

fn numbers(v: &Value, key: &str) -> Usage<Vec<f64>> {
    match v {
        Value::Array(items) => items.iter().map(|x| number(x, key)).collect(),
        _ => Ok(vec![number(v, key)?]),
    }
}

fn integer(v: &Value, key: &str) -> Usage<u64> {
    v.as_u64().ok_or_else(|| UsageError::new(key, "expected a non-negative integer"))
}

fn integers(v: &Value, key: &str) -> Usage<Vec<u64>> {
    match v {
        Value::Array(items) => items.iter().map(|x| integer(x, key)).collect(),
        _ => Ok(vec![integer(v, key)?]),
    }
}
