//! Command-line front end: flag and config-file resolution, dispatch to the
//! core computations, CSV/JSON tables and a run manifest.

pub mod args;
pub mod config;
pub mod parse;
pub mod run;

use metalfluct_core::Error;

pub use args::{Cli, CommandArgs, Options};
pub use config::{resolve, Command, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug)]
pub enum Failure {
    /// Bad input, naming the offending field.
    Usage { field: String, message: String },
    Compute(Error),
    Io(String),
}

impl Failure {
    pub fn usage(field: &str, message: String) -> Self {
        Failure::Usage {
            field: field.to_string(),
            message,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage { .. } => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Compute(e) => match e {
                Error::Convergence { .. } | Error::Singularity { .. } => EXIT_CONVERGENCE,
                Error::Table(_) => EXIT_IO,
                Error::Domain(_) | Error::OutOfRange { .. } | Error::ModelMismatch(_) | Error::Config(_) => {
                    EXIT_USAGE
                }
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_USAGE => "usage",
            EXIT_CONVERGENCE => "convergence",
            _ => "io",
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage { field, message } => write!(f, "{field}: {message}"),
            Failure::Compute(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Resolves and runs one invocation; returns the process exit code.
pub fn execute(cli: &Cli, argv: &[String]) -> i32 {
    let attempt = || -> Result<Vec<String>, Failure> {
        let file = cli
            .command
            .options()
            .config
            .as_deref()
            .map(config::read_config_file)
            .transpose()?;
        let cfg = resolve(&cli.command, file.as_ref())?;
        run::run(&cfg, argv, file.as_ref())
    };
    match attempt() {
        Ok(summary) => {
            for line in summary {
                println!("{line}");
            }
            EXIT_OK
        }
        Err(f) => {
            eprintln!("metalfluct {}: {} error: {f}", cli.command.name(), f.kind());
            f.exit_code()
        }
    }
}
