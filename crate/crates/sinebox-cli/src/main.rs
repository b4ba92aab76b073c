//! `sinebox`: solve, optimize, and export bound states of the 2D
//! Schrodinger equation in a hard-wall sine basis.
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 3 when the
//! numerics fail (no interior minimum, rejected eigendecomposition), 1 for
//! I/O trouble.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

#[derive(Parser)]
#[command(
    name = "sinebox",
    version,
    about = "Bound states of the 2D Schrodinger equation in a sine basis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the operator, diagonalize, report energies and diagnostics
    Solve(SolveArgs),
    /// Optimize the box length per basis size and write the curve table
    Optimize(OptimizeArgs),
    /// Ground-state error against basis size, for convergence plots
    Convergence(ConvergenceArgs),
    /// Export one state's wavefunction on a uniform grid
    Grid(GridArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Potential: `sho`, `qcd`, `none`, or a term list like `(x)^2*(y)^2`
    #[arg(long)]
    potential: String,
    /// Basis functions per axis (the matrix is N^2 x N^2)
    #[arg(long)]
    n_basis: usize,
    /// Box side length
    #[arg(long, conflicts_with = "auto")]
    length: Option<f64>,
    /// Use the optimal length for this basis size, from the curve file or
    /// built on the fly
    #[arg(long)]
    auto: bool,
    /// How many lowest states to report
    #[arg(long, default_value_t = 10)]
    states: usize,
    /// Diagnostic grid points per axis (wavefunction error metric)
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Optimal-length curve to read; with --auto and no existing file, the
    /// freshly built curve is saved here
    #[arg(long)]
    curve_file: Option<PathBuf>,
    /// Fail instead of building a missing curve
    #[arg(long)]
    no_auto_curve: bool,
    /// Also solve at N+1 and report the per-state energy drift
    #[arg(long)]
    precision_report: bool,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Potential: `sho`, `qcd`, `none`, or a term list
    #[arg(long)]
    potential: String,
    /// Basis sizes to optimize, e.g. `6,10,14,18,22` or `8..20:2`
    #[arg(long, default_value = "6,10,14,18,22")]
    n_values: String,
    /// Length bracket `lo,hi` for the scan
    #[arg(long)]
    bracket: Option<String>,
    /// Output path for the curve table (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    /// Potential: `sho`, `qcd`, `none`, or a term list
    #[arg(long)]
    potential: String,
    /// Basis sizes to study, e.g. `8..20:2`
    #[arg(long)]
    n_values: String,
    /// Optimal-length curve to read; built from the study sizes when omitted
    #[arg(long)]
    curve_file: Option<PathBuf>,
    /// Length bracket `lo,hi` used when the curve is built here
    #[arg(long)]
    bracket: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Potential: `sho`, `qcd`, `none`, or a term list
    #[arg(long)]
    potential: String,
    /// Basis functions per axis
    #[arg(long)]
    n_basis: usize,
    /// Box side length
    #[arg(long, conflicts_with = "auto")]
    length: Option<f64>,
    /// Use the optimal length for this basis size
    #[arg(long)]
    auto: bool,
    /// Sorted state index to export
    #[arg(long, default_value_t = 0)]
    state: usize,
    /// Grid points per axis
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Optimal-length curve to read
    #[arg(long)]
    curve_file: Option<PathBuf>,
    /// Fail instead of building a missing curve
    #[arg(long)]
    no_auto_curve: bool,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error of the whole binary, carrying its exit code.
#[derive(Debug)]
enum AppError {
    Usage(String),
    Lib(sinebox::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "{m}"),
            AppError::Lib(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<sinebox::Error> for AppError {
    fn from(e: sinebox::Error) -> Self {
        AppError::Lib(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Lib(e) if e.is_numerical() => 3,
            AppError::Lib(_) => 2,
            AppError::Io(_) => 1,
        }
    }
}

/// Parses a basis-size list: comma-separated entries, each either a single
/// integer or an inclusive range `a..b` with optional `:step`.
fn parse_n_values(text: &str) -> Result<Vec<usize>, AppError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(AppError::Usage(format!("empty entry in n-values `{text}`")));
        }
        if let Some((range, step)) = split_range(item)? {
            let (a, b) = range;
            if a > b {
                return Err(AppError::Usage(format!("descending range `{item}`")));
            }
            let mut n = a;
            while n <= b {
                out.push(n);
                n += step;
            }
        } else {
            out.push(parse_usize(item)?);
        }
    }
    if out.is_empty() {
        return Err(AppError::Usage("n-values list is empty".into()));
    }
    Ok(out)
}

fn split_range(item: &str) -> Result<Option<((usize, usize), usize)>, AppError> {
    let Some((a, rest)) = item.split_once("..") else {
        return Ok(None);
    };
    let (b, step) = match rest.split_once(':') {
        Some((b, s)) => (b, parse_usize(s)?),
        None => (rest, 1),
    };
    if step == 0 {
        return Err(AppError::Usage(format!("zero step in range `{item}`")));
    }
    Ok(Some(((parse_usize(a)?, parse_usize(b)?), step)))
}

fn parse_usize(s: &str) -> Result<usize, AppError> {
    s.trim()
        .parse()
        .map_err(|_| AppError::Usage(format!("`{s}` is not a nonnegative integer")))
}

fn parse_bracket(text: Option<&str>) -> Result<(f64, f64), AppError> {
    let Some(text) = text else {
        return Ok(sinebox::optimize::DEFAULT_LENGTH_BRACKET);
    };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [lo, hi] = parts.as_slice() else {
        return Err(AppError::Usage(format!(
            "bracket must be `lo,hi`, got `{text}`"
        )));
    };
    let lo: f64 = lo
        .parse()
        .map_err(|_| AppError::Usage(format!("bad bracket bound `{lo}`")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|_| AppError::Usage(format!("bad bracket bound `{hi}`")))?;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return Err(AppError::Usage(format!(
            "bracket must satisfy 0 < lo < hi, got `{text}`"
        )));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Optimize(args) => commands::optimize(args),
        Command::Convergence(args) => commands::convergence(args),
        Command::Grid(args) => commands::grid(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
