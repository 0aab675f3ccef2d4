//! The `rado-lab` command line: argument parsing into an exact
//! [`ExperimentConfig`], dispatch, and deterministic report output.

mod args;
mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use thiserror::Error;

use crate::back_forth::BfError;
use crate::decomposition::DecompositionError;
use crate::exact_geometry::builtin::builtin;
use crate::exact_geometry::{parse_rational, BallSpec, GeometryError, PolytopeBall, Rational};
use crate::random_graphs::{GraphError, Probability};
use crate::step_isometry::StepIsometryError;

pub use args::{Cli, CommandArgs};
pub use run::{run, RunOutput};

/// Exit status for a completed run whose invariant audits failed.
pub const EXIT_AUDIT_FAILED: i32 = 1;
/// Exit status for configuration and usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for runtime errors (I/O, invalid input files, sampling).
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown subcommand: {0}")]
    UnknownSubcommand(String),
    #[error("--{field}: {value:?} is not an exact rational (use \"p\" or \"p/q\")")]
    BadRational { field: &'static str, value: String },
    #[error("--{field}: {value} must lie in [0, 1]")]
    BadProbability { field: &'static str, value: String },
    #[error("unknown builtin ball {0:?}")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Step(#[from] StepIsometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bf(#[from] BfError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownSubcommand(_)
            | CliError::BadRational { .. }
            | CliError::BadProbability { .. }
            | CliError::UnknownBuiltin(_)
            | CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// A unit ball named on the command line, resolved and validated.
#[derive(Debug, Clone, Serialize)]
pub struct BallArg {
    /// `builtin:<name>` or the file path as given.
    pub source: String,
    #[serde(skip)]
    pub ball: PolytopeBall,
}

impl PartialEq for BallArg {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.ball == other.ball
    }
}

/// Resolves `builtin:<name>` or reads a ball JSON file.
pub fn parse_ball(source: &str) -> Result<BallArg, CliError> {
    let ball = match source.strip_prefix("builtin:") {
        Some(name) => builtin(name).ok_or_else(|| CliError::UnknownBuiltin(name.to_string()))?,
        None => {
            let path = PathBuf::from(source);
            let text = read_file(&path)?;
            let spec: BallSpec = serde_json::from_str(&text).map_err(|e| CliError::Input { path: path.clone(), message: e.to_string() })?;
            spec.into_ball().map_err(|e| CliError::Input { path, message: e.to_string() })?
        }
    };
    Ok(BallArg { source: source.to_string(), ball })
}

pub(crate) fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input { path: path.clone(), message: e.to_string() })
}

pub(crate) fn parse_rat(field: &'static str, value: &str) -> Result<Rational, CliError> {
    parse_rational(value).map_err(|_| CliError::BadRational { field, value: value.to_string() })
}

pub(crate) fn parse_prob(field: &'static str, value: &str) -> Result<Probability, CliError> {
    let p = parse_rat(field, value)?;
    Probability::new(&p).map_err(|_| CliError::BadProbability { field, value: value.to_string() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Decompose {
        ball: BallArg,
    },
    CheckStepIsometry {
        ball: BallArg,
        map: PathBuf,
    },
    SampleGraph {
        ball: BallArg,
        n: usize,
        #[serde(with = "crate::exact_geometry::rational::serde_rational")]
        window: Rational,
        p: Probability,
        seed: u64,
    },
    BjAudit {
        graph: PathBuf,
        k_max: u32,
    },
    Agreement {
        p: Probability,
        trials: u64,
        seed: u64,
    },
    BfRun {
        ball: BallArg,
        n_u: usize,
        fibre_n: usize,
        p: Probability,
        budget: usize,
        seed: u64,
        window: crate::back_forth::FibredWindow,
    },
    S0Experiment {
        params: crate::back_forth::S0Params,
        trials: u64,
        seed: u64,
    },
}

/// Everything a run depends on. It is echoed at the head of every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Parses the full argument list (program name first).
pub fn parse_config<I, T>(args: I) -> Result<ExperimentConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args).map_err(|e| match e.kind() {
        ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::UnknownSubcommand(args.get(1).map(|a| a.to_string_lossy().into_owned()).unwrap_or_default())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    cli.into_config()
}

fn init_threads() {
    if let Some(n) = std::env::var("RADO_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if the pool is already built, in which case it stays as is.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses, runs and writes the report; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Err(e) = Cli::try_parse_from(&args) {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = e.print();
            return 0;
        }
    }
    let result = parse_config(args).and_then(|config| {
        init_threads();
        let out = run(&config)?;
        match &config.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => std::io::stdout().write_all(out.text.as_bytes())?,
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            for line in &out.diagnostics {
                eprintln!("{line}");
            }
            if out.audits_passed {
                0
            } else {
                EXIT_AUDIT_FAILED
            }
        }
        Err(e) => {
            eprintln!("rado-lab: {e}");
            e.exit_code()
        }
    }
}
