//! Command-line front end for `fiberlink-core`: configuration, deterministic
//! CSV output and the `evolve`, `sweep`, `esd`, `verify`, `modes` and
//! `fiber-check` subcommands.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::io::Write;

pub use error::{CliError, Result};

/// Parses `argv`, runs the command and writes its output. Returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;

    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { error::EXIT_CONFIG } else { error::EXIT_OK };
        }
    };
    let (command, run_args) = cli.command.split();
    match execute(command, &run_args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fiberlink {}: {e}", command.name());
            e.exit_code()
        }
    }
}

fn execute(command: config::Command, run_args: &args::RunArgs) -> Result<i32> {
    let cfg = run_args.resolve(command)?;
    let outcome = commands::run(command, &cfg)?;
    if cfg.output_path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(outcome.document.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(&cfg.output_path, outcome.document.as_bytes())?;
    }
    if let Some(summary) = &outcome.summary {
        eprint!("{summary}");
    }
    Ok(outcome.exit_code)
}
