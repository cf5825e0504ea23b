//! `qswarm`: sequence inspection, suite listing, experiment runs, rank
//! statistics and convergence plots.

mod compare;
mod config;
mod plot;
mod run;
mod seq;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// A failed command with its exit code: 1 for runtime failures, 2 for usage
/// and validation errors.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: error.into(),
        }
    }

    pub fn runtime(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 1,
            error: error.into(),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "qswarm", version, about = "HCLPSO with replaceable random streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print points of a sequence in the point-set text format.
    Seq(seq::SeqArgs),
    /// Inspect the benchmark suite.
    Suite {
        #[command(subcommand)]
        command: SuiteCommand,
    },
    /// Run an experiment described by a TOML configuration file.
    Run(run::RunArgs),
    /// Rank algorithms on a results tree and run the Friedman/Nemenyi tests.
    Compare(compare::CompareArgs),
    /// Plot average convergence curves of one function.
    Plot(plot::PlotArgs),
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// List the suite functions.
    List(run::SuiteListArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MetricArg {
    Cs,
    Nos,
    Time,
}

pub fn default_plot_dir(results: &std::path::Path) -> PathBuf {
    results.join("plots")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Seq(args) => seq::cmd_seq(&args),
        Command::Suite {
            command: SuiteCommand::List(args),
        } => run::cmd_suite_list(&args),
        Command::Run(args) => run::cmd_run(&args),
        Command::Compare(args) => compare::cmd_compare(&args),
        Command::Plot(args) => plot::cmd_plot(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut msg = f.error.to_string();
            for cause in f.error.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(f.code)
        }
    }
}
