//! `vlab`: runs the verifications and lattice experiments of `vlab-core`,
//! manages the coefficient cache and writes reports.
//!
//! Exit status is 0 on success, 1 when a check misses its tolerance (the
//! report is still written) and 2 for invalid arguments or any other error.

mod coeffs;
mod config;
mod experiment;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vlab_core::arith::TableCache;

use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] vlab_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Text to emit and whether the run met its tolerance.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub struct Context {
    pub config: RunConfig,
    pub cache: TableCache,
}

#[derive(Parser)]
#[command(name = "vlab", version, about = "Numerical verification of Poisson and Voronoi summation formulas")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Config file layered over the built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one config key; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Coefficient cache directory (overrides VLAB_CACHE and the config).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Worker threads for the engines.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for randomly sampled check points.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report runtime_ms as 0 so that reports are byte-comparable.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both sides of a summation formula or identity.
    #[command(subcommand)]
    Verify(verify::VerifyCmd),
    /// Lattice-point error-term experiments.
    #[command(subcommand)]
    Experiment(experiment::ExperimentCmd),
    /// Build, ingest or dump cached coefficient tables.
    #[command(subcommand)]
    Coeffs(coeffs::CoeffsCmd),
}

fn context(g: &GlobalArgs) -> Result<Context, CliError> {
    let mut config = RunConfig::load(g.config.as_deref(), &g.set)?;
    if let Some(dir) = std::env::var_os("VLAB_CACHE").filter(|v| !v.is_empty()) {
        config.cache_dir = dir.into();
    }
    if let Some(dir) = &g.cache {
        config.cache_dir = dir.clone();
    }
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        config.threads = t;
    }
    if let Some(f) = g.format {
        config.format = f;
    }
    if let Some(s) = g.seed {
        config.seed = s;
    }
    if g.no_timing {
        config.timing = false;
    }
    let cache = TableCache::new(config.cache_dir.clone());
    Ok(Context { config, cache })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let ctx = context(&cli.global)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.config.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} worker threads: {e}", ctx.config.threads)))?;
    let outcome = pool.install(|| match &cli.command {
        Command::Verify(cmd) => verify::run(cmd, &ctx),
        Command::Experiment(cmd) => experiment::run(cmd, &ctx),
        Command::Coeffs(cmd) => coeffs::run(cmd, &ctx),
    })?;
    emit(&outcome.text, cli.global.out.as_ref())?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("vlab: {e}");
            ExitCode::from(2)
        }
    }
}
