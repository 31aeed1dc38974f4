//! Library half of the `cghist` command-line tool; the binary is a thin
//! wrapper so every code path stays testable in-process.

pub mod config;
pub mod io;
pub mod output;
pub mod run;

use anyhow::Result;

pub use config::{Cli, Command, FileConfig, OutputFormat, RunConfig};
pub use output::{Document, ReportDto};
pub use run::{emit, run, RunOutcome};

/// Resolve the configuration, run the command, emit the document, and
/// return the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    let file = config::load_file_config(cli.config.as_ref())?;
    let resolved = config::resolve(&cli.command, file)?;
    let outcome = run::run(resolved)?;
    run::emit(&outcome)?;
    Ok(outcome.exit_code)
}
