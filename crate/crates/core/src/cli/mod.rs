//! Command-line front end: configuration files, subcommands and writers.
//!
//! Exit codes: 0 on success, 2 for configuration or usage errors, 3 for
//! numerical failures.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use commands::Command;
pub use config::{ConfigError, ExperimentConfig, Format, Preset};
pub use output::{format_number, render, Header};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("error[config]: {0}")]
    Config(String),
    #[error("error[numerical]: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "nvmag",
    version,
    about = "Post-selected weak-value magnetometry with an NV centre and a nuclear meter"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Overrides [noise] seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Replaces species and timing budget.
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
}

/// Rendered output and where it should go.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub text: String,
    pub path: Option<PathBuf>,
    pub config: ExperimentConfig,
}

/// Loads and resolves the configuration, runs the command and renders it.
pub fn run(cli: &Cli) -> Result<RunOutput, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(p) = cli.preset {
        cfg.apply_preset(p);
    }
    if let Some(s) = cli.seed {
        cfg.noise.seed = s;
    }
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    cli.command.prepare(&mut cfg)?;
    if cfg.output.precision == 0 || cfg.output.precision > 17 {
        return Err(CliError::Config(format!(
            "[output] precision must lie in 1..=17, got {}",
            cfg.output.precision
        )));
    }

    let table = match cli.threads {
        Some(0) => return Err(CliError::Config("--threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(|| cli.command.run(&cfg))?,
        None => cli.command.run(&cfg)?,
    };

    let header = Header {
        command: cli.command.name().into(),
        seed: cfg.noise.seed,
        config_sha256: cfg.hash(),
        config: cfg.echo(),
    };
    let text = render(&table, &header, cfg.output.format, cfg.output.precision);
    let path = cli
        .out
        .clone()
        .or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    Ok(RunOutput {
        text,
        path,
        config: cfg,
    })
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let out = run(cli)?;
    match &out.path {
        Some(p) => std::fs::write(p, &out.text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{}", out.text),
    }
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn main_entry() -> i32 {
    run_from(std::env::args_os())
}
