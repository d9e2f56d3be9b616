use std::process::ExitCode;

use clap::Parser;
use robint_cli::{args::Cli, run};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("robint: {e:#}");
            e.exit_code()
        }
    }
}
