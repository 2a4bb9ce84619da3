//! `adpt`: config-driven runner for the validation experiments.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 for an
//! invalid command line or config, 3 when an experiment or the output
//! writer errors out.

mod config;
mod output;
mod registry;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::{Config, ConfigError};
use registry::{Job, REGISTRY};

#[derive(Parser)]
#[command(name = "adpt", version, about = "Run space-adiabatic perturbation theory validation experiments")]
struct Cli {
    /// Worker threads for ε sweeps (default: all cores).
    #[arg(long, global = true, env = "ADPT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output.dir`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Sample-set seed; overrides `samples.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the experiment registry.
    ListExperiments,
    /// Parse and range-check a config without running it.
    Validate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },

    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("experiment {experiment}: {source}")]
    Runtime { experiment: &'static str, source: adpt_core::AdptError },

    #[error("experiment {experiment}: writing results to {dir}: {source}")]
    Output { experiment: &'static str, dir: String, source: std::io::Error },

    #[error("thread pool: {0}")]
    Threads(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Read { .. } | CliError::Threads(_) => 2,
            CliError::Runtime { .. } | CliError::Output { .. } => 3,
        }
    }
}

struct Loaded {
    config: Config,
    job: Job,
}

fn load(path: &Path, seed: Option<u64>) -> Result<Loaded, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    let wrap = |source| CliError::Config { path: shown.clone(), source };
    let config = Config::parse(&text).map_err(wrap)?;
    let job = Job::from_config(&config, seed).map_err(wrap)?;
    config.raw("output.dir");
    config.reject_unused(job.name()).map_err(wrap)?;
    Ok(Loaded { config, job })
}

/// `output.dir` is relative to the config file.
fn out_dir(flag: Option<PathBuf>, loaded: &Loaded, config_path: &Path) -> PathBuf {
    if let Some(d) = flag {
        return d;
    }
    match loaded.config.raw("output.dir") {
        Some(d) => config_path.parent().unwrap_or(Path::new(".")).join(d),
        None => PathBuf::from("adpt-out"),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Threads("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Threads(e.to_string()))?;
    }
    match cli.command {
        Command::ListExperiments => {
            for (name, about) in REGISTRY {
                println!("{name:<18} {about}");
            }
            Ok(true)
        }
        Command::Validate { config, seed } => {
            let loaded = load(&config, seed)?;
            println!("{}: valid {} config", config.display(), loaded.job.name());
            println!("{}", serde_json::to_string_pretty(&loaded.job.params_json()).expect("json"));
            Ok(true)
        }
        Command::Run { config, out_dir: flag, seed } => {
            let loaded = load(&config, seed)?;
            let job = &loaded.job;
            let experiment = job.name();
            let report = job.run().map_err(|source| CliError::Runtime { experiment, source })?;
            let dir = out_dir(flag, &loaded, &config);
            let pairs: Vec<(&str, &str)> = loaded.config.pairs().collect();
            let files = output::write_bundle(&dir, job, &pairs, &report).map_err(|source| CliError::Output {
                experiment,
                dir: dir.display().to_string(),
                source,
            })?;
            for c in &report.checks {
                println!("{c}");
            }
            let verdict = if report.passed() { "passed" } else { "FAILED" };
            println!("{experiment} {verdict}; wrote {} files to {}", files.len(), dir.display());
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
