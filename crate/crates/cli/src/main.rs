//! `emi`: forward-model and invert frequency-domain EMI soundings over a
//! layered earth.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 convergence failure,
//! 4 numerical failure. `EMI_THREADS` bounds the number of worker threads
//! used by section inversion.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod cmds;
mod files;

#[derive(Debug)]
pub enum CliError {
    /// Malformed files, unknown flags values, I/O problems.
    Parse(String),
    /// One or more columns failed to converge (results are still written).
    Convergence(String),
    /// The forward model or the regularized solve broke down.
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Convergence(m) | CliError::Numeric(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "emi", version, about = "Layered-earth EMI forward modeling and inversion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
pub struct InvertOpts {
    /// Survey file to invert.
    #[arg(long)]
    pub config: PathBuf,
    /// Stabilizer: i (identity), d1, d2, or mgs.
    #[arg(long, default_value = "d2")]
    pub reg: String,
    /// MGS focusing parameter.
    #[arg(long, default_value_t = 1e-2)]
    pub tau: f64,
    /// Truncation-level rule: disc, lcurve, or fixed.
    #[arg(long, default_value = "disc")]
    pub param: String,
    /// Truncation level for --param fixed.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Relative noise level assumed by the discrepancy rule.
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    /// Run seed, recorded in the result metadata.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Data mode: complex or quadrature.
    #[arg(long, default_value = "complex")]
    pub mode: String,
    /// Number of start models (geometric half-space ladder).
    #[arg(long, default_value_t = 1)]
    pub starts: usize,
    /// DOI sensitivity threshold.
    #[arg(long, default_value_t = emi_core::doi::DEFAULT_ETA)]
    pub eta: f64,
    /// Number of inversion layers.
    #[arg(long, default_value_t = 60)]
    pub layers: usize,
    /// Depth of the inversion grid, meters.
    #[arg(long, default_value_t = 3.5)]
    pub depth: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forward-model a conductivity section into device readings.
    Forward {
        /// Model file (device header + per-column conductivities).
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Generate a synthetic survey: gaussian, step, or pseudo2d.
    Synth {
        experiment: String,
        /// Relative noise level.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Invert a survey column by column.
    Invert(InvertOpts),
    /// DOI table of a result or model file.
    Doi {
        /// Result or model file.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = emi_core::doi::DEFAULT_ETA)]
        eta: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Ok(threads) = std::env::var("EMI_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| CliError::Parse(format!("EMI_THREADS={threads:?} is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok(); // a second invocation in-process keeps the first pool
    }
    match &cli.cmd {
        Cmd::Forward { config, out_dir } => cmds::cmd_forward(config, out_dir),
        Cmd::Synth { experiment, delta, seed, out_dir } => {
            cmds::cmd_synth(experiment, *delta, *seed, out_dir)
        }
        Cmd::Invert(opts) => cmds::cmd_invert(opts),
        Cmd::Doi { config, eta, out_dir } => cmds::cmd_doi(config, *eta, out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", e.message());
            if !e.message().ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(e.exit_code())
        }
    }
}
