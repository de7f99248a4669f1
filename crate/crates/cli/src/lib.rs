//! Command-line front end: every study is a subcommand that writes one CSV or
//! JSON artifact.

pub mod args;
pub mod commands;
pub mod output;
pub mod records;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use fsi_core::spin::health_warnings;
use fsi_core::FsiError;
use thiserror::Error;

pub use args::Cli;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid configuration: {0}")]
    Config(#[from] FsiError),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("numerical health check failed: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("FSI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FSI_THREADS must be a positive integer, got `{raw}`")))?;
    if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
        log::warn!("worker pool already initialized; FSI_THREADS ignored");
    }
    Ok(())
}

fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run(argv: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let command_line: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, &command_line.join(" ")) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fsi: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, command_line: &str) -> Result<(), CliError> {
    configure_threads()?;
    let before = health_warnings();
    log::info!("running `{command_line}`");
    let outcome = commands::execute(&cli.command, cli.format, command_line)?;
    emit(&outcome.bytes, cli.out.as_deref())?;
    if let Some(msg) = outcome.failure {
        return Err(CliError::Numerical(msg));
    }
    let warnings = health_warnings() - before;
    if warnings > 0 {
        return Err(CliError::Numerical(format!("{warnings} outcome distributions failed to normalize")));
    }
    Ok(())
}
