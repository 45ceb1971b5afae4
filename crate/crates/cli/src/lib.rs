//! Command-line harness around the `entbound` library.
//!
//! Every subcommand is deterministic for a given configuration: per-sample
//! random streams are derived from the seed and the sample index, and
//! parallel results are merged in index order.

use std::ffi::OsString;
use std::fs;

use clap::Parser;

pub mod commands;
pub mod config;
pub mod report;

pub use commands::run;
pub use config::{Cli, Command, CommandName, Format, RunConfig, Series};
pub use report::Report;

/// Failures of a run, each with its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Numeric(#[from] entbound::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_ASSERTION: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Numeric(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

/// Parses `args`, runs the subcommand, writes its output and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) if report.passed => EXIT_OK,
        Ok(_) => {
            eprintln!("entbound: check failed (see summary)");
            EXIT_ASSERTION
        }
        Err(e) => {
            eprintln!("entbound: {e}");
            e.exit_code()
        }
    }
}

/// Validates, runs and writes one command.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    let config = RunConfig::from_command(command)?;
    let report = run(&config)?;
    let text = report.render(config.format);
    match &config.out_path {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(report)
}
