mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    let (report, out) = match &cli.command {
        Command::Classify(a) => (commands::classify(a)?, &a.out),
        Command::Sequence(a) => (commands::sequence(a)?, &a.out),
        Command::Bounds(a) => (commands::bounds(a)?, &a.out),
        Command::Simulate(a) => (commands::simulate(a)?, &a.out),
        Command::Sweep(a) => (commands::sweep(a)?, &a.out),
        Command::CookeCheck(a) => (commands::cooke_check(a)?, &a.out),
    };
    output::write_report(report, out.format, out.output.as_deref())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
