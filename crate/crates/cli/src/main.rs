//! `tamsdld` — exact distributions and sub-gamma deviation bounds for the
//! time-averaged mean square displacement (TAMSD) of Brownian and fractional
//! Brownian motion, with deterministic Monte Carlo validation.
//!
//! Exit status: 0 when the run succeeds and every requested check passes,
//! 1 on runtime/numerical failure, 2 on a usage or configuration error,
//! 3 when a Monte Carlo estimate exceeds its bound beyond the noise
//! allowance.

mod commands;
mod config;
mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{CommandKind, OutputFormat, Process, RawConfig, Resolved, UsageError};

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// An error carrying the process exit status it should produce.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: i32,
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError {
            message: e.0,
            exit_code: EXIT_USAGE,
        }
    }
}

impl From<tamsdld_core::Error> for CliError {
    fn from(e: tamsdld_core::Error) -> Self {
        CliError {
            message: e.to_string(),
            exit_code: EXIT_RUNTIME,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "tamsdld",
    version,
    about = "Exact TAMSD distributions and sub-gamma deviation bounds for Brownian and \
             fractional Brownian motion, validated by deterministic Monte Carlo",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate sub-gamma TAMSD deviation bounds on an epsilon grid
    Bound(CommonArgs),
    /// Tabulate the exact TAMSD distribution (pdf, cdf, tail)
    Dist(DistArgs),
    /// Check the TAMSD deviation bound against Monte Carlo tail estimates
    Verify(CommonArgs),
    /// Check the scaling-exponent estimator bound against Monte Carlo
    Beta(CommonArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ProcessArg {
    /// Brownian motion
    Bm,
    /// Fractional Brownian motion
    Fbm,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Process family
    #[arg(long, value_enum, env = "TAMSDLD_PROCESS")]
    process: Option<ProcessArg>,

    /// Hurst index H in (0, 1); fractional Brownian motion only
    #[arg(long, env = "TAMSDLD_HURST", value_name = "H")]
    hurst: Option<f64>,

    /// Diffusivity D > 0 [default: 0.5]
    #[arg(long, env = "TAMSDLD_DIFFUSION", value_name = "D")]
    diffusion: Option<f64>,

    /// Trajectory length N: the process is observed at times 1, ..., N
    #[arg(short = 'N', long = "length", env = "TAMSDLD_N", value_name = "N")]
    n: Option<u64>,

    /// Lag tau (repeatable or comma-separated); one row group per lag
    #[arg(long, env = "TAMSDLD_TAU", value_delimiter = ',', num_args = 1.., value_name = "TAU")]
    tau: Vec<u64>,

    /// Deviation level epsilon (repeatable or comma-separated)
    #[arg(long, env = "TAMSDLD_EPS", value_delimiter = ',', num_args = 1..,
          conflicts_with = "eps_grid", value_name = "EPS")]
    eps: Vec<f64>,

    /// Inclusive linear epsilon grid
    #[arg(long = "eps-grid", env = "TAMSDLD_EPS_GRID", value_name = "LO:HI:STEPS")]
    eps_grid: Option<String>,

    /// Monte Carlo sample count [default: 10000]
    #[arg(long, env = "TAMSDLD_TRIALS", value_name = "COUNT")]
    trials: Option<u64>,

    /// Master seed of the deterministic Monte Carlo stream [default: 1]
    #[arg(long, env = "TAMSDLD_SEED", value_name = "SEED")]
    seed: Option<u64>,

    /// Monte Carlo worker threads; 0 = one per available core [default: 0]
    #[arg(long, env = "TAMSDLD_THREADS", value_name = "COUNT")]
    threads: Option<usize>,

    /// Output format [default: csv]
    #[arg(long, value_enum, env = "TAMSDLD_FORMAT")]
    format: Option<FormatArg>,

    /// Write the result table to PATH instead of stdout (written only on success)
    #[arg(long, env = "TAMSDLD_OUT", value_name = "PATH")]
    out: Option<PathBuf>,

    /// JSON config file; flags and TAMSDLD_* variables override its values
    #[arg(long, env = "TAMSDLD_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    /// Series truncation: stop once the captured mixture mass is within this
    /// tolerance of 1 [default: 1e-12]
    #[arg(long = "mass-tol", env = "TAMSDLD_MASS_TOL", value_name = "TOL")]
    mass_tol: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct DistArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Evaluation point x (repeatable or comma-separated)
    #[arg(long, env = "TAMSDLD_X", value_delimiter = ',', num_args = 1..,
          conflicts_with_all = ["x_grid", "q_grid"], value_name = "X")]
    x: Vec<f64>,

    /// Inclusive linear grid of evaluation points
    #[arg(long = "x-grid", env = "TAMSDLD_X_GRID", value_name = "LO:HI:STEPS",
          conflicts_with = "q_grid")]
    x_grid: Option<String>,

    /// Probability grid; evaluation points are the distribution quantiles
    /// [default: 0.001:0.999:41]
    #[arg(long = "q-grid", env = "TAMSDLD_Q_GRID", value_name = "LO:HI:STEPS")]
    q_grid: Option<String>,
}

impl CommonArgs {
    fn into_raw(self) -> RawConfig {
        RawConfig {
            process: self.process.map(|p| match p {
                ProcessArg::Bm => Process::Bm,
                ProcessArg::Fbm => Process::Fbm,
            }),
            hurst: self.hurst,
            diffusion: self.diffusion,
            n: self.n,
            tau: self.tau,
            eps: self.eps,
            eps_grid: self.eps_grid,
            trials: self.trials,
            seed: self.seed,
            threads: self.threads,
            format: self.format.map(|f| match f {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            }),
            out: self.out,
            mass_tol: self.mass_tol,
            x: Vec::new(),
            x_grid: None,
            q_grid: None,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            std::process::exit(err.exit_code);
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (kind, config_path, raw) = match cli.command {
        Cmd::Bound(args) => (CommandKind::Bound, args.config.clone(), args.into_raw()),
        Cmd::Dist(args) => {
            let config_path = args.common.config.clone();
            let mut raw = args.common.into_raw();
            raw.x = args.x;
            raw.x_grid = args.x_grid;
            raw.q_grid = args.q_grid;
            (CommandKind::Dist, config_path, raw)
        }
        Cmd::Verify(args) => (CommandKind::Verify, args.config.clone(), args.into_raw()),
        Cmd::Beta(args) => (CommandKind::Beta, args.config.clone(), args.into_raw()),
    };

    let file = config::load_file(config_path.as_deref())?;
    let cfg: Resolved = config::resolve(kind, raw, file)?;

    let outcome = match kind {
        CommandKind::Bound => commands::bound(&cfg)?,
        CommandKind::Dist => commands::dist(&cfg)?,
        CommandKind::Verify => commands::verify(&cfg)?,
        CommandKind::Beta => commands::beta(&cfg)?,
    };

    let text = match cfg.format {
        OutputFormat::Csv => outcome.table.to_csv(),
        OutputFormat::Json => outcome.table.to_json(),
    };

    // The table is materialized fully before any byte is written, so a
    // failure can never leave a partial output file behind.
    match &cfg.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError {
            message: format!("cannot write {}: {e}", path.display()),
            exit_code: EXIT_RUNTIME,
        })?,
        None => print!("{text}"),
    }

    Ok(if outcome.checks_passed {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}
