//! Command-line front end.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog::{self, CATALOG};
use crate::error::{Error, Result};
use crate::generating::{self, CheckOptions, Verdict};
use crate::operator::Operator;
use crate::oracle::{self, SampleConfig};
use crate::relative_norm::{self, default_delta_grid};
use crate::scalar::{Backend, Rational, Scalar};
use crate::space::{vector_from_json, vector_to_json, Space};

/// Exit code for usage errors and malformed input.
pub const EXIT_USAGE: i32 = 3;
/// Exit code for well-formed input that violates a precondition.
pub const EXIT_FAILURE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "genop", version, about = "Decide whether operators between finite-dimensional normed spaces are generating")]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(long, global = true, env = "GENOP_BACKEND", default_value = "rational")]
    pub backend: Backend,

    /// Comparison tolerance; defaults to 0 (rational) or 1e-9 (float).
    #[arg(long, global = true)]
    pub tol: Option<String>,

    /// Sample count for sampling fallbacks and oracles.
    #[arg(long, global = true, default_value_t = 20_000)]
    pub samples: usize,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Comma-separated δ values for the relative-norm sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    pub delta_grid: Option<Vec<String>>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a norm-one operator is generating.
    CheckGenerating {
        /// Operator JSON; `-` or absent reads stdin.
        operator: Option<PathBuf>,
    },
    /// Largest r with r·B_X inside the closed convex hull of att(G).
    Radius { operator: Option<PathBuf> },
    /// Decide whether a functional is a spear of the dual space.
    SpearVector { xstar: PathBuf, space: PathBuf },
    /// Decide whether a finite set is a spear set of a polyhedral space.
    SpearSet { set: PathBuf, space: PathBuf },
    /// Check that G* maps the dual ball onto a spear set of X*.
    DualSpear { operator: Option<PathBuf> },
    /// ‖T‖, ‖T‖_G, v_G(T) and a δ-sweep.
    RelativeNorm {
        t: PathBuf,
        g: PathBuf,
        /// Also write the δ-sweep as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Numerical radius v_G(T).
    NumericalRadius { t: PathBuf, g: PathBuf },
    /// Split a contraction on l1^n into generating operators.
    Decompose { operator: Option<PathBuf> },
    /// Print a catalog operator as JSON, or list the catalog.
    Example {
        name: Option<String>,
        params: Vec<String>,
        /// Print the name, expectations and provenance too.
        #[arg(long)]
        full: bool,
    },
    /// Sampling oracles.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Sampled generating check; never VERIFIED.
    Generating { operator: Option<PathBuf> },
    /// Sampled generating radius.
    Radius { operator: Option<PathBuf> },
    /// Seeded samples of a space's unit sphere.
    Sphere { space: Option<PathBuf> },
}

/// What a command printed and how it should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn json(v: &Value, code: i32) -> Self {
        Outcome {
            stdout: format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
            code,
        }
    }

    pub fn error(e: &Error) -> Self {
        let code = match e {
            Error::Invalid(_) | Error::InvalidBall(_) | Error::DimensionMismatch { .. } | Error::Empty(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Outcome::json(&json!({"error": {"kind": e.kind(), "message": e.to_string()}}), code)
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Verified => 0,
        Verdict::Refuted => 1,
        Verdict::Inconclusive => 2,
    }
}

fn read_json(path: Option<&Path>) -> Result<Value> {
    let text = match path {
        None => read_stdin()?,
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
    Ok(s)
}

/// Accepts a bare operator or a catalog entry carrying one under `operator`.
fn read_operator<S: Scalar>(path: Option<&Path>) -> Result<Operator<S>> {
    let v = read_json(path)?;
    Operator::from_json(v.get("operator").unwrap_or(&v))
}

fn read_space<S: Scalar>(path: &Path) -> Result<Space<S>> {
    Space::from_json(&read_json(Some(path))?)
}

struct Config<S> {
    opts: CheckOptions<S>,
    grid: Vec<S>,
}

impl<S: Scalar> Config<S> {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let tol = match &cli.tol {
            None => S::default_tol(),
            Some(t) => {
                let v = S::parse_text(t).ok_or_else(|| Error::Invalid(format!("bad --tol `{t}`")))?;
                if v < S::zero() {
                    return Err(Error::Invalid("--tol must be nonnegative".into()));
                }
                v
            }
        };
        let grid = match &cli.delta_grid {
            None => default_delta_grid(),
            Some(items) => items
                .iter()
                .map(|d| S::parse_text(d).ok_or_else(|| Error::Invalid(format!("bad δ `{d}`"))))
                .collect::<Result<Vec<S>>>()?,
        };
        Ok(Config {
            opts: CheckOptions {
                tol,
                sampling: SampleConfig::new(cli.samples, cli.seed),
            },
            grid,
        })
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let result = match cli.backend {
        Backend::Rational => run_with::<Rational>(cli),
        Backend::Float => run_with::<f64>(cli),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

/// Parses and runs `args` (including the program name).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Outcome {
                    stdout: e.to_string(),
                    code: 0,
                },
                _ => Outcome::json(
                    &json!({"error": {"kind": "Usage", "message": e.to_string().trim()}}),
                    EXIT_USAGE,
                ),
            }
        }
    }
}

fn run_with<S: Scalar>(cli: &Cli) -> Result<Outcome> {
    let cfg = Config::<S>::from_cli(cli)?;
    let opts = &cfg.opts;
    match &cli.command {
        Command::CheckGenerating { operator } => {
            let g = read_operator::<S>(operator.as_deref())?;
            let cert = generating::is_generating(&g, opts)?;
            Ok(Outcome::json(&cert.to_json(), verdict_code(cert.verdict)))
        }
        Command::Radius { operator } => {
            let g = read_operator::<S>(operator.as_deref())?;
            let r = generating::generating_radius(&g, opts)?;
            Ok(Outcome::json(
                &json!({
                    "radius": r.value.to_json(),
                    "spans": r.spans,
                    "attaining": r.attaining.iter().map(vector_to_json).collect::<Vec<_>>(),
                    "backend": S::BACKEND.as_str(),
                }),
                0,
            ))
        }
        Command::SpearVector { xstar, space } => {
            let x = vector_from_json::<S>(&read_json(Some(xstar))?)?;
            let s = read_space::<S>(space)?;
            let cert = generating::is_spear_vector(&x, &s, opts)?;
            Ok(Outcome::json(&cert.to_json(), verdict_code(cert.verdict)))
        }
        Command::SpearSet { set, space } => {
            let items = read_json(Some(set))?;
            let items = items
                .as_array()
                .ok_or_else(|| Error::Invalid("set must be a JSON array of vectors".into()))?
                .iter()
                .map(vector_from_json::<S>)
                .collect::<Result<Vec<_>>>()?;
            let s = read_space::<S>(space)?;
            let cert = generating::is_spear_set(&items, &s, opts)?;
            Ok(Outcome::json(&cert.to_json(), verdict_code(cert.verdict)))
        }
        Command::DualSpear { operator } => {
            let g = read_operator::<S>(operator.as_deref())?;
            let cert = generating::dual_spear_check(&g, opts)?;
            Ok(Outcome::json(&cert.to_json(), verdict_code(cert.verdict)))
        }
        Command::RelativeNorm { t, g, csv } => {
            let t = read_operator::<S>(Some(t))?;
            let g = read_operator::<S>(Some(g))?;
            let report = relative_norm::report(&t, &g, &cfg.grid, opts)?;
            if let Some(path) = csv {
                std::fs::write(path, report.sweep_csv())
                    .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
            }
            Ok(Outcome::json(&report.to_json(), 0))
        }
        Command::NumericalRadius { t, g } => {
            let t = read_operator::<S>(Some(t))?;
            let g = read_operator::<S>(Some(g))?;
            let v = relative_norm::numerical_radius(&t, &g, opts)?;
            Ok(Outcome::json(&json!({"value": v.value.to_json(), "exactness": v.exactness}), 0))
        }
        Command::Decompose { operator } => {
            let t = read_operator::<S>(operator.as_deref())?;
            let d = generating::decompose_into_generating(&t, &opts.tol)?;
            Ok(Outcome::json(&d.to_json(), 0))
        }
        Command::Example { name, params, full } => {
            let Some(name) = name else {
                let list: Vec<Value> = CATALOG
                    .iter()
                    .map(|(n, p, d)| json!({"name": n, "params": p, "description": d}))
                    .collect();
                return Ok(Outcome::json(&Value::Array(list), 0));
            };
            let ex = catalog::build::<S>(name, params)?;
            let v = if *full { ex.to_json() } else { ex.operator.to_json() };
            Ok(Outcome::json(&v, 0))
        }
        Command::Oracle { command } => match command {
            OracleCommand::Generating { operator } => {
                let g = read_operator::<S>(operator.as_deref())?;
                let cert = oracle::sampled_generating(&g, &opts.sampling)?;
                Ok(Outcome::json(&cert.to_json(), verdict_code(cert.verdict)))
            }
            OracleCommand::Radius { operator } => {
                let g = read_operator::<S>(operator.as_deref())?;
                let r = oracle::sampled_radius(&g, &opts.sampling)?;
                Ok(Outcome::json(
                    &json!({"radius": r, "samples": opts.sampling.count, "seed": opts.sampling.seed}),
                    0,
                ))
            }
            OracleCommand::Sphere { space } => {
                let s = Space::<f64>::from_json(&read_json(space.as_deref())?)?;
                let pts = oracle::sample_sphere(&s, &opts.sampling);
                Ok(Outcome::json(
                    &Value::Array(pts.iter().map(vector_to_json).collect()),
                    0,
                ))
            }
        },
    }
}
