//! `causalci`: sample data from a BIF network, run independence tests,
//! learn a CPDAG with PC-stable, and run the evaluation experiments.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 malformed input,
//! 3 I/O failure. Verbosity comes from `CAUSALCI_LOG` (e.g. `debug`).

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CAUSALCI_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("causalci: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
