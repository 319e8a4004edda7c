use std::process::ExitCode;

use clap::Parser;
use koranyi_cli::{execute, exit_code_for, init_threads, Cli, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match execute(&cli) {
        Ok(report) => {
            println!("{}", report.to_json());
            ExitCode::from(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
