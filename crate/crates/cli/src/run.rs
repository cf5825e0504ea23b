//! `qswarm run` and `qswarm suite list`.

use std::fs;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use qswarm::bench::{family_of, standard_suite, Objective};
use qswarm::experiment::{run_experiment, ExperimentError, MatrixResult};
use serde::Serialize;

use crate::config;
use crate::{CmdResult, Failure};

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Experiment configuration (TOML).
    config: PathBuf,
    /// Results root, overriding the file's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 1 if any run fails.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
pub struct SuiteListArgs {
    #[arg(short = 'd', long = "dim", default_value_t = 10)]
    dim: usize,
    /// Seed of the shifts and rotations.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

fn classify(e: ExperimentError) -> Failure {
    match e {
        ExperimentError::Config(_) | ExperimentError::Bench(_) | ExperimentError::Threads(_) => {
            Failure::usage(e)
        }
        _ => Failure::runtime(e),
    }
}

fn print_table(result: &MatrixResult, eps_tol: &[f64]) {
    let mut header = format!("{:<10} {:<20}", "function", "algorithm");
    for eps in eps_tol {
        header.push_str(&format!(" {:>12} {:>6}", format!("CS@{eps}"), "NoS"));
    }
    println!("{header}");
    for ts in &result.trials {
        let mut line = format!("{:<10} {:<20}", ts.function, ts.algorithm);
        for &eps in eps_tol {
            match result.summary(&ts.function, &ts.algorithm, eps) {
                Some(s) => line.push_str(&format!(" {:>12} {:>6}", s.cs.to_string(), s.nos)),
                None => line.push_str(&format!(" {:>12} {:>6}", "?", "?")),
            }
        }
        println!("{line}");
    }
    for f in &result.failures {
        println!(
            "{:<10} {:<20} FAILED (run {}): {}",
            f.function, f.algorithm, f.run, f.error
        );
    }
}

pub fn cmd_run(args: &RunArgs) -> CmdResult {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::usage(anyhow!("reading {}: {e}", args.config.display())))?;
    let base = args
        .config
        .parent()
        .map(|p| p.to_path_buf())
        .unwrap_or_default();
    let file = config::parse(&text, &base).map_err(Failure::usage)?;
    let out = args.out.clone().unwrap_or(file.output);
    let cfg = &file.experiment;
    log::info!(
        "running {} functions x {} algorithms x {} runs",
        cfg.functions.len(),
        cfg.algorithms.len(),
        cfg.runs
    );
    let (result, tree) = run_experiment(cfg, &out).map_err(classify)?;
    print_table(&result, &cfg.eps_tol);
    println!("results written to {}", tree.root.display());
    if !result.failures.is_empty() {
        let msg = format!("{} cell(s) failed", result.failures.len());
        if args.strict {
            return Err(Failure::runtime(anyhow!(msg)));
        }
        eprintln!("warning: {msg}; see diagnostics.json");
    }
    Ok(())
}

#[derive(Serialize)]
struct Listed<'a> {
    id: &'a str,
    family: qswarm::bench::FunctionFamily,
    name: &'a str,
    optimum: f64,
    lower: f64,
    upper: f64,
}

pub fn cmd_suite_list(args: &SuiteListArgs) -> CmdResult {
    let suite = standard_suite(args.dim, args.seed).map_err(Failure::usage)?;
    let listed: Vec<Listed> = suite
        .iter()
        .map(|s| Listed {
            id: &s.id,
            family: family_of(&s.id).expect("suite ids have a family"),
            name: &s.name,
            optimum: s.optimum(),
            lower: s.bounds.lower()[0],
            upper: s.bounds.upper()[0],
        })
        .collect();
    if args.json {
        let text = serde_json::to_string_pretty(&listed).map_err(Failure::runtime)?;
        println!("{text}");
        return Ok(());
    }
    println!("{:<5} {:<12} {:>7}  name", "id", "family", "Z*");
    for l in &listed {
        let family = serde_json::to_value(l.family).map_err(Failure::runtime)?;
        println!(
            "{:<5} {:<12} {:>7}  {}",
            l.id,
            family.as_str().unwrap_or(""),
            l.optimum,
            l.name
        );
    }
    Ok(())
}
