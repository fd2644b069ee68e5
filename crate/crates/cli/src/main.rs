mod commands;
mod config;

use std::process::ExitCode;

use bifree_core::verify::Suite;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{cmd_grid, cmd_spectrum, cmd_verify, CommandError, EXIT_INVALID, EXIT_IO};
use config::{ConfigError, RunArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "bifree", version, about = "Principal function of the bi-free central limit operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Analytic,
    Oracle,
    Lemma,
    Fock,
    Ellipse,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Analytic => Suite::Analytic,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Lemma => Suite::Lemma,
            SuiteArg::Fock => Suite::Fock,
            SuiteArg::Ellipse => Suite::Ellipse,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate g(delta, gamma) on a uniform grid over the spectral rectangle
    Grid,
    /// Run numerical verification checks
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Seed for the randomized checks
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare eigenvalues of the truncated operator with the spectral rectangle
    Spectrum,
}

fn run(cli: &Cli) -> Result<u8, CommandError> {
    let default_depth = match cli.command {
        Command::Verify { .. } => 16,
        _ => 8,
    };
    let run = RunConfig::resolve(&cli.run, default_depth).map_err(|e| CommandError {
        code: match e {
            ConfigError::Io(..) => EXIT_IO,
            ConfigError::Invalid(_) => EXIT_INVALID,
        },
        message: e.to_string(),
    })?;
    match cli.command {
        Command::Grid => cmd_grid(&run),
        Command::Verify { suite, seed } => cmd_verify(&run, suite.into(), seed),
        Command::Spectrum => cmd_spectrum(&run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
