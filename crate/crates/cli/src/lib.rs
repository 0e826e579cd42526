//! Command-line front end for the `sqrtpot` solver: spectra, wavefunctions,
//! validation reports and parameter sweeps as CSV or JSON.

pub mod args;
pub mod commands;
pub mod error;
pub mod job;
pub mod table;

use std::io::Write;

pub use commands::{run, Report};
pub use error::{CliError, Result};
pub use job::{JobSpec, Mode, Settings};

/// Runs a parsed command line: builds the job, executes it, and writes the
/// body to `--out` or stdout. Returns the verdict for the exit code.
pub fn execute(cli: args::Cli) -> Result<()> {
    let (mode, job_args) = cli.command.split();
    let mut settings = match &job_args.config {
        Some(path) => job::read_config(path)?,
        None => Settings::default(),
    };
    settings = settings.overridden_by(job_args.to_settings()?);
    let spec = JobSpec::from_settings(mode, &settings)?;
    let report = run(&spec)?;
    match &spec.out {
        Some(path) => std::fs::write(path, &report.body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => std::io::stdout()
            .lock()
            .write_all(report.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    report.outcome
}
