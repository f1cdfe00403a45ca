use std::process::ExitCode;

use clap::Parser;
use ifs_lab_cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(&Cli::parse()))
}
