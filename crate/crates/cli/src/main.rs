use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use movcat_cli::{configure_threads, run, Cli, Format, JobSpec};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = configure_threads()
        .and_then(|()| JobSpec::from_cli(cli))
        .and_then(|job| {
            let report = run(&job)?;
            Ok((job.format, report))
        });
    match outcome {
        Ok((format, report)) => {
            let out = match format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(report.status.exit_code())
        }
        Err(e) => {
            eprintln!("movcat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
