//! Batch front-end for robustness-interval certification.
//!
//! Exit codes: 0 on success, 2 when an input file does not parse, 3 when
//! `--strict` meets a bound outside its applicability region, 1 otherwise.

pub mod args;
pub mod certify;
pub mod commands;
pub mod error;
pub mod io;
pub mod tables;

use args::{Cli, Command};
pub use error::{CliError, CliResult};

pub fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Bounds(a) => commands::bounds(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::CheckTables(a) => commands::check_tables(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Verify(a) => commands::verify(a),
    }
}
