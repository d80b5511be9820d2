use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use toric_perf_cli::{run, Cli, JobSpec};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&JobSpec::from_cli(&cli));
    for line in &report.diagnostics {
        eprintln!("toric-perf: {line}");
    }
    let doc = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    // a closed pipe is not worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{doc}");
    ExitCode::from(report.exit_code() as u8)
}
