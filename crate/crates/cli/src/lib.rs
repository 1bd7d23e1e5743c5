//! Batch front end: one TOML config describes one job; the report is written
//! as line-oriented text or as a JSON document.

pub mod config;
pub mod report;
pub mod run;

use std::path::Path;

pub use config::{load_config, parse_config, ConfigError, JobConfig, JobKind};
pub use report::{emit, Format, Outcome, Report};
pub use run::run_job;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Job(#[from] blocklie::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Loads, runs and serializes one job.
pub fn execute(config_path: &Path, seed: Option<u64>, format: Format) -> Result<(JobConfig, Report, String), CliError> {
    let config = load_config(config_path, seed)?;
    let report = run_job(&config)?;
    let text = emit(&report, format);
    Ok((config, report, text))
}
