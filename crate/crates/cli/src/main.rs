//! `selfoc`: mode-coupling spectra between harmonic waveguides.

mod args;
mod emit;
mod report;
mod run;
mod scenario;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<selfoc::Error> for CliError {
    fn from(e: selfoc::Error) -> Self {
        use selfoc::Error::*;
        let code = match e {
            PartialSpectrum { .. } | PartialTensor { .. } => EXIT_CAP,
            NumericOverflow { .. } | NoConvergence { .. } | EmptyTensor => EXIT_NUMERIC,
            IndexOverflow { .. } | InvalidParameter { .. } | OrderOutOfRange(_) | NotPositiveDefinite { .. } => {
                EXIT_INVALID
            }
        };
        let flag = match &e {
            InvalidParameter { name: "epsilon", .. } => Some("--eps"),
            IndexOverflow { .. } => Some("--n/--cap"),
            _ => None,
        };
        let message = match flag {
            Some(flag) => format!("{flag}: {e}"),
            None => e.to_string(),
        };
        Self { code, message }
    }
}

fn execute(argv: Vec<String>) -> Result<u8, CliError> {
    let argv = scenario::expand(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return Ok(code);
        }
    };
    let outcome = run::run(&cli.command)?;
    match &cli.command.common().out {
        Some(path) => fs::write(path, &outcome.data)
            .map_err(|e| CliError::invalid(format!("--out {}: {e}", path.display())))?,
        None => {
            let mut stdout = io::stdout().lock();
            // a closed pipe is not worth a failure code
            let _ = stdout.write_all(outcome.data.as_bytes()).and_then(|_| stdout.flush());
        }
    }
    eprint!("{}", outcome.report);
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let argv: Vec<String> = match std::env::args_os().map(|a| a.into_string()).collect() {
        Ok(v) => v,
        Err(bad) => {
            eprintln!("error: argument is not valid UTF-8: {bad:?}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match execute(argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
