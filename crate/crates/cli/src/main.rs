use std::process::ExitCode;

use clap::Parser;
use wellposed_cli::{execute, Cli, EXIT_ERROR};

fn main() -> ExitCode {
    let cfg = Cli::parse().into_config();
    match execute(&cfg) {
        Ok(outcome) => {
            if cfg.out.is_none() {
                print!("{}", outcome.report);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("cannot write report: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
