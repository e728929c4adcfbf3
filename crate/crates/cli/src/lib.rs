//! Batch front-end for `ttstar-core`: one subcommand per run, a TOML config
//! in, report files out.
//!
//! Exit codes: `0` all checks passed, `1` a tolerance check failed, `2` usage
//! or input error, `3` model degeneracy.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{Context, Outcome};
use crate::error::{CliError, Result, EXIT_PASS, EXIT_TOLERANCE, EXIT_USAGE};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "TTSTAR_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "ttstar",
    version,
    about = "tt* workbench for exponential Landau-Ginzburg models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "ttstar-out")]
    pub out: PathBuf,

    /// Admit model_b with c = 1 on the B = 0 (principal chiral) pathway.
    #[arg(long, global = true)]
    pub allow_degenerate: bool,

    /// Replace every tolerance in the config.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Critical chains, η and the coupling matrix.
    Ring,
    /// Residual report for a grid of metric symbols.
    Verify,
    /// Toeplitz truncation and chain-reduction checks.
    Reduce,
    /// Exterior mode solution of the phase equation.
    SolveModes,
    /// Two-chain field equation against the principal chiral field.
    PcfCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ring => "ring",
            Self::Verify => "verify",
            Self::Reduce => "reduce",
            Self::SolveModes => "solve-modes",
            Self::PcfCheck => "pcf-check",
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
        log::debug!("thread pool already initialised; {THREADS_ENV} ignored");
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    configure_threads()?;
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::usage("--config <path> is required"))?;
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::usage("--tol must be finite and non-negative"));
        }
    }
    let loaded = config::load(path, cli.tol)?;
    let ctx = Context::new(loaded, cli.command.name(), cli.out.clone(), cli.allow_degenerate)?;
    match cli.command {
        Command::Ring => commands::ring(ctx),
        Command::Verify => commands::verify(ctx),
        Command::Reduce => commands::reduce(ctx),
        Command::SolveModes => commands::solve_modes(ctx),
        Command::PcfCheck => commands::pcf_check(ctx),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                println!("{}: pass", cli.command.name());
                EXIT_PASS
            } else {
                println!("{}: tolerance check failed", cli.command.name());
                EXIT_TOLERANCE
            }
        }
        Err(e) => {
            eprintln!("ttstar {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
