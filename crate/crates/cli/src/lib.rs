//! Batch front end for the qubit-array simulator.
//!
//! `sqa --config run.toml` validates the config, computes every output in
//! memory and then writes the files atomically. Exit status: 0 on success,
//! 2 for configuration errors, 3 for numerical failures, 1 for I/O errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod tables;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::config::{Command, Overrides, RawConfig, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::OutputFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Structured,
    Both,
}

impl Format {
    fn names(self) -> Vec<String> {
        match self {
            Format::Csv => vec!["csv".into()],
            Format::Structured => vec!["structured".into()],
            Format::Both => vec!["csv".into(), "structured".into()],
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sqa",
    version,
    about = "Exact-diagonalization simulator for disordered qubit arrays"
)]
pub struct Cli {
    /// spectrum | susceptibility | sweep | stark | transmission | reproduce-figure
    /// (overrides the config's `command`)
    pub command: Option<String>,
    /// Figure for reproduce-figure: pic3, pic5, pic8, pic10, pic11, pic6
    pub figure: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the disorder seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Validate the config and print a report without computing anything
    #[arg(long)]
    pub validate_only: bool,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            command: self.command.clone(),
            figure: self.figure.clone(),
            seed: self.seed,
            out: self.out.clone(),
            formats: self.format.map(Format::names),
        }
    }

    fn raw_config(&self) -> CliResult<RawConfig> {
        let mut raw = match &self.config {
            Some(path) => config::load(path)?,
            None => RawConfig::default(),
        };
        self.overrides().apply(&mut raw);
        Ok(raw)
    }
}

/// Compute every file of a resolved run without writing anything.
pub fn render(rc: &RunConfig, seed_override: Option<u64>) -> CliResult<Vec<OutputFile>> {
    match (rc.command, rc.figure) {
        (Command::ReproduceFigure, Some(fig)) => presets::reproduce(fig, seed_override, rc),
        _ => commands::execute(rc, ""),
    }
}

fn execute(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let raw = cli.raw_config()?;
    let rc = config::resolve(&raw)?;
    for w in &rc.warnings {
        eprintln!("warning: {w}");
    }
    let files = render(&rc, cli.seed)?;
    output::write_all(&rc.output.directory, &files)
}

/// Run with explicit arguments (the first is the program name) and return
/// the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.validate_only {
        let report = match cli.raw_config() {
            Ok(raw) => config::validate(&raw),
            Err(e) => config::ValidationReport::from_error(e),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return if report.valid { 0 } else { 2 };
    }
    let result = match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::config("--threads", e.to_string())),
        },
        None => execute(&cli),
    };
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
