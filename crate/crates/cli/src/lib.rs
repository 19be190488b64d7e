//! The `movcat` command-line tool as a library, so tests can drive it
//! without spawning processes.

mod commands;
pub mod input;
pub mod job;
pub mod report;
pub mod verify;

use std::time::Instant;

use thiserror::Error;

pub use job::{Cli, Command, Format, JobSpec, Mode};
pub use report::{Report, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        2
    }
}

/// Sizes the rayon pool from `MOVCAT_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(n) = std::env::var("MOVCAT_THREADS") else {
        return Ok(());
    };
    let n: usize = n
        .parse()
        .map_err(|_| CliError::Input(format!("MOVCAT_THREADS: not a thread count: {n:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(format!("MOVCAT_THREADS: {e}")))
}

/// Runs a job and, when asked, re-checks the emitted report.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    let start = Instant::now();
    job.validate()?;
    let out = commands::execute(job)?;
    let mut report = Report {
        schema: report::SCHEMA,
        tool: report::Tool {
            name: "movcat",
            version: env!("CARGO_PKG_VERSION"),
        },
        command: job.command.name(),
        options: job.options(),
        inputs: out.inputs,
        results: out.entries,
        status: Status::Ok,
        verification: None,
        timing: report::Timing { elapsed_ms: 0 },
    };
    if job.verify {
        let emitted: serde_json::Value =
            serde_json::from_str(&report.to_json()).expect("reports round-trip through JSON");
        report.verification = Some(verify::verify_report(&emitted, job));
    }
    report.refresh_status();
    report.timing.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}
