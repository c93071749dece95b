use std::process::ExitCode;

use clap::Parser;
use metalfluct_cli::{execute, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    ExitCode::from(execute(&cli, &argv) as u8)
}
