use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use fockgram::cli::{execute, Cli};

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let status = execute(&cli.command, &mut stdout);
    stdout.flush().context("flushing stdout")?;
    Ok(match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    })
}

fn main() -> ExitCode {
    run().unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
