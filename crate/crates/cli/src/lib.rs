//! Command-line front end for `nvtorus`: reads morphisms from JSON files and
//! reports decisions, realizations, Nielsen numbers and numeric checks.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nvtorus::{IntVec, TorusMorphism};
use thiserror::Error;

pub mod commands;
pub mod specfile;

pub use commands::{Outcome, EXIT_ERROR, EXIT_NOT_AFFINE, EXIT_OK};
pub use specfile::{parse_spec, print_spec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{}", spec_message(.path, .line, .column, .message))]
    Spec { path: String, line: Option<usize>, column: Option<usize>, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] nvtorus::Error),
}

fn spec_message(path: &str, line: &Option<usize>, column: &Option<usize>, message: &str) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!("invalid spec at {path} (line {l}, column {c}): {message}"),
        _ => format!("invalid spec at {path}: {message}"),
    }
}

#[derive(Debug, Parser)]
#[command(name = "nvtorus", version, about = "Affine realizability and Nielsen numbers of n-valued torus maps")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a file describes a morphism.
    Validate { file: PathBuf },
    /// σ-classes, stabilizers, restricted matrices and torsion.
    Analyze { file: PathBuf },
    /// Decide whether the morphism comes from an affine n-valued map.
    Decide {
        file: PathBuf,
        /// Also scan every z with |z_j| <= 2 n_j and compare.
        #[arg(long)]
        full_box_check: bool,
    },
    /// Nielsen and Reidemeister numbers (every σ-class must be affine).
    Nielsen { file: PathBuf },
    /// Change the lift so that phi along the cycle of i under z takes given values.
    Rebase {
        file: PathBuf,
        /// 1-based index i.
        #[arg(long)]
        index: usize,
        /// z as a JSON array, e.g. [1,0].
        #[arg(long)]
        z: String,
        /// Values along the cycle as a JSON array of vectors, e.g. [[1,0],[0,0]].
        #[arg(long)]
        parts: String,
        /// Write the new spec here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build and numerically verify a built-in construction.
    Example {
        /// rotation, translated, klein-four, cyclic-four or perturbation.
        name: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Target morphism for `perturbation`.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Base map for `perturbation`.
        #[arg(long, default_value = "rotation")]
        base: String,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol_eq: f64,
        #[arg(long, default_value_t = 0.05)]
        sep_min: f64,
        /// Dump sampled factor values as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_spec(path: &Path) -> Result<TorusMorphism, CliError> {
    parse_spec(&read(path)?)
}

fn parse_vector(text: &str, what: &str) -> Result<IntVec, CliError> {
    let v: Vec<i64> =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{what} must be a JSON integer array: {e}")))?;
    Ok(IntVec::from_i64(&v))
}

fn parse_vectors(text: &str, what: &str) -> Result<Vec<IntVec>, CliError> {
    let v: Vec<Vec<i64>> = serde_json::from_str(text)
        .map_err(|e| CliError::Usage(format!("{what} must be a JSON array of integer arrays: {e}")))?;
    Ok(v.iter().map(|x| IntVec::from_i64(x)).collect())
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => Ok(match read(file) {
            Ok(text) => commands::cmd_validate(&text),
            Err(e) => Outcome::error(&e),
        }),
        Command::Analyze { file } => commands::cmd_analyze(&load_spec(file)?),
        Command::Decide { file, full_box_check } => commands::cmd_decide(&load_spec(file)?, *full_box_check),
        Command::Nielsen { file } => commands::cmd_nielsen(&load_spec(file)?),
        Command::Rebase { file, index, z, parts, output } => {
            let psi = load_spec(file)?;
            let out = commands::cmd_rebase(&psi, *index, &parse_vector(z, "--z")?, &parse_vectors(parts, "--parts")?)?;
            if let Some(path) = output {
                fs::write(path, format!("{}\n", out.text))
                    .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
                return Ok(Outcome { text: format!("wrote {}", path.display()), ..out });
            }
            Ok(out)
        }
        Command::Example { name, n, k, spec, base, grid, tol_eq, sep_min, csv } => {
            let req = commands::ExampleRequest {
                name: name.clone(),
                n: *n,
                k: *k,
                spec: spec.as_deref().map(load_spec).transpose()?,
                base: base.clone(),
                grid: *grid,
                tol_eq: *tol_eq,
                sep_min: *sep_min,
            };
            let (out, map) = commands::cmd_example(&req)?;
            if let Some(path) = csv {
                let file = fs::File::create(path)
                    .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
                map.write_csv(*grid, file)?;
            }
            Ok(out)
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    dispatch(&cli.command).unwrap_or_else(|e| Outcome::error(&e))
}

/// Parses `args` (including the program name) and runs the command.
/// Argument errors become exit code 1 with clap's message as text.
pub fn run_args<I, T>(args: I) -> (Outcome, bool)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => (run(&cli), cli.json),
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            (Outcome { exit, text: e.to_string().trim_end().to_string(), json: serde_json::json!({}) }, false)
        }
    }
}
