//! Command-line front end: argument handling, commands and output.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Parser;

pub use args::Cli;
pub use commands::execute;
pub use error::{CliError, EXIT_CONFIG, EXIT_DOMAIN, EXIT_IO};

fn emit(cli: &Cli, report: &report::Report) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            let io_err = |source| CliError::Output {
                path: path.clone(),
                source,
            };
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            report.write(cli.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report
                .write(cli.format, &mut w)
                .and_then(|_| w.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|report| {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
        emit(&cli, &report)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
