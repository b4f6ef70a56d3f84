//! Command-line front end for `edm-counts`.
//!
//! The binary is a thin wrapper around [`run`], which takes the raw
//! arguments and returns the exit code with everything to print.

pub mod args;
pub mod commands;
pub mod output;
pub mod report;
pub mod validate;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, EXIT_USAGE};

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            // help and version requests are not errors
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Run { code: 0, stdout: text, stderr: String::new() },
                _ => Run { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    let outcome = match &cli.command {
        Command::Stats(a) => commands::stats(a),
        Command::Fit(a) => commands::fit(a),
        Command::Compare(a) => commands::compare(a),
        Command::Pmf(a) => commands::pmf(a),
        Command::Measure(a) => commands::measure(a),
        Command::Validate(a) => commands::validate(a),
    };
    match outcome {
        Ok(stdout) => Run { code: 0, stdout, stderr: String::new() },
        Err(Failure { code, message, output }) => Run {
            code,
            stdout: output.unwrap_or_default(),
            stderr: format!("error: {message}\n"),
        },
    }
}
