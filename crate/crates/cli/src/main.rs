mod args;
mod commands;
mod plot;
mod source;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use bipartite_resilience::Error;
use clap::Parser;

use args::{Cli, Command};

/// A failed run: message for stderr and the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
    pub const INFEASIBLE: u8 = 4;

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: Self::USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } => Failure::CAPACITY,
            Error::Infeasible(_) => Failure::INFEASIBLE,
            _ => Failure::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("cannot set up {n} threads: {e}")))?;
    }
    let f = cli.format;
    let output = match &cli.command {
        Command::Eval(a) => commands::eval(a, f)?,
        Command::Simulate(a) => commands::simulate(a, f)?,
        Command::StarCurve(a) => commands::star_curve(a, f)?,
        Command::Phase(a) => commands::phase(a, f)?,
        Command::Search(a) => commands::search(a, f)?,
        Command::Subnet(a) => commands::subnet(a, f)?,
        Command::Reduce(a) => commands::reduce(a, f)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, output)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(output.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("bires: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
