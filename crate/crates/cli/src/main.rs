//! `siqs`: ladder certificates, polynomial algebras, structure functions and spectra of the
//! catalogued superintegrable potentials.

mod commands;
mod params;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A certificate, relation or comparison did not hold; the report is still written.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 2,
            CliError::Usage(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "siqs", version, about = "Exact algebra and spectra of separable superintegrable systems")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SpectrumArgs {
    potential: String,
    /// Exact bindings such as `hbar=1,alpha=-1`.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 8)]
    pmax: u32,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Interior points per axis grid.
    #[arg(long, default_value_t = 4000)]
    grid: usize,
    /// Half-width of the box, or its length on a half-line.
    #[arg(long = "box", default_value_t = 14.0)]
    half_width: f64,
    /// Number of levels solved per axis.
    #[arg(long, default_value_t = 12)]
    levels: usize,
    /// Largest two-dimensional energy compared.
    #[arg(long, default_value_t = 6.0)]
    emax: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Also write the comparison as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify both axis ladders.
    LadderCheck { potential: String },
    /// Polynomial algebra of a potential, or a normalised copy of an algebra file.
    Algebra { target: String },
    /// Casimir as a polynomial in the energy.
    Casimir { potential: String },
    /// Structure function with its factorisation, from a potential or an algebra file with a Casimir.
    Phi { target: String },
    /// Finite unitary representations and their energies.
    Spectrum(SpectrumArgs),
    /// Finite-difference spectra compared against the algebraic energies.
    NumericCheck {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Everything above in one report.
    FullReport {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SIQS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("SIQS_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let outcome = match &cli.command {
        Command::LadderCheck { potential } => commands::ladder_check(potential),
        Command::Algebra { target } => commands::algebra(target),
        Command::Casimir { potential } => commands::casimir(potential),
        Command::Phi { target } => commands::phi(target),
        Command::Spectrum(s) => commands::spectrum(&s.potential, s.params.as_deref(), s.pmax),
        Command::NumericCheck { spectrum, grid } => commands::numeric_check(spectrum, grid),
        Command::FullReport { spectrum, grid } => commands::full_report(spectrum, grid),
    }?;
    emit(&cli.out, &outcome.report)?;
    match outcome.failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("siqs: {e}");
            ExitCode::from(e.code())
        }
    }
}
