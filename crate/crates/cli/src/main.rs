mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::config::Cli;
use crate::output::{emit, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::RunConfig::resolve(&cli).and_then(|cfg| {
        let outcome = commands::run(&cli.command, &cfg)?;
        emit(&cfg, &outcome)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => match outcome.violation {
            Some(msg) => {
                eprintln!("theorem violation: {msg}");
                ExitCode::from(4)
            }
            None => ExitCode::SUCCESS,
        },
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
