mod args;
mod commands;
mod format;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{run, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
