//! `qswarm compare`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::Args;
use qswarm::experiment::{load_summaries, ResultsTree, Summary};
use qswarm::stats::{analyze, Direction, Metric};
use serde::{Deserialize, Serialize};

use crate::seq::format_trimmed;
use crate::{CmdResult, Failure, MetricArg};

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Results directory holding summary.json.
    dir: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::Cs)]
    metric: MetricArg,
    /// Tolerance to compare at (defaults to the first one recorded).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Report path (defaults to `<dir>/report.json`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Report<'a> {
    metric: &'a str,
    eps_tol: f64,
    alpha: f64,
    algorithms: &'a [String],
    functions: &'a [String],
    values: &'a [Vec<Metric>],
    ranks: &'a [Vec<f64>],
    avg_ranks: &'a [f64],
    chi2: f64,
    #[serde(rename = "tau_F")]
    tau_f: Option<f64>,
    #[serde(rename = "tau_F_infinite")]
    tau_f_infinite: bool,
    tau_c: f64,
    reject_null: bool,
    #[serde(rename = "CD")]
    cd: Option<f64>,
    pairwise: Option<&'a [Vec<bool>]>,
}

#[derive(Deserialize)]
struct TimingEntry {
    function: String,
    algorithm: String,
    mean_time_to_tol_s: Vec<(f64, Metric)>,
}

fn same_eps(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn push_unique(list: &mut Vec<String>, s: &str) {
    if !list.iter().any(|x| x == s) {
        list.push(s.to_string());
    }
}

/// Function and algorithm order: the manifest's when present (so failed
/// cells still appear), otherwise first appearance in the summaries.
fn axes(tree: &ResultsTree, summaries: &[Summary]) -> (Vec<String>, Vec<String>) {
    let mut functions = Vec::new();
    let mut algorithms = Vec::new();
    if let Ok(text) = fs::read_to_string(tree.manifest_path()) {
        if let Ok(m) = serde_json::from_str::<serde_json::Value>(&text) {
            for s in m["suite"].as_array().into_iter().flatten() {
                if let Some(id) = s["id"].as_str() {
                    push_unique(&mut functions, id);
                }
            }
            for a in m["config"]["algorithms"].as_array().into_iter().flatten() {
                if let Some(l) = a["label"].as_str() {
                    push_unique(&mut algorithms, l);
                }
            }
        }
    }
    for s in summaries {
        push_unique(&mut functions, &s.function);
        push_unique(&mut algorithms, &s.algorithm);
    }
    (functions, algorithms)
}

fn load_timing(path: &Path) -> Result<Vec<TimingEntry>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(anyhow!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(anyhow!("{}: {e}", path.display())))
}

fn cell(v: Metric, metric: MetricArg) -> String {
    match (v, metric) {
        (Metric::Fail, _) => "-".into(),
        (Metric::Value(x), MetricArg::Time) => format_trimmed(x, 4),
        (Metric::Value(x), _) => format_trimmed(x, 0),
    }
}

pub fn cmd_compare(args: &CompareArgs) -> CmdResult {
    let tree = ResultsTree::new(&args.dir);
    let summaries = load_summaries(&tree).map_err(Failure::usage)?;
    let eps = match args.eps {
        Some(e) => e,
        None => summaries
            .first()
            .map(|s| s.eps_tol)
            .ok_or_else(|| Failure::usage(anyhow!("summary.json is empty")))?,
    };
    if !summaries.iter().any(|s| same_eps(s.eps_tol, eps)) {
        return Err(Failure::usage(anyhow!("no summaries recorded at eps_tol = {eps}")));
    }
    let (functions, algorithms) = axes(&tree, &summaries);
    if functions.len() < 2 || algorithms.len() < 2 {
        return Err(Failure::usage(anyhow!(
            "need at least 2 functions and 2 algorithms, found {} and {}",
            functions.len(),
            algorithms.len()
        )));
    }

    let timing = match args.metric {
        MetricArg::Time if summaries.iter().any(|s| s.mean_time_s.is_none()) => {
            Some(load_timing(&tree.timing_path())?)
        }
        _ => None,
    };
    let lookup = |f: &str, a: &str| -> Metric {
        let Some(s) = summaries
            .iter()
            .find(|s| s.function == f && s.algorithm == a && same_eps(s.eps_tol, eps))
        else {
            return Metric::Fail;
        };
        match args.metric {
            MetricArg::Cs => s.cs,
            MetricArg::Nos => Metric::Value(s.nos as f64),
            MetricArg::Time => s.mean_time_s.unwrap_or_else(|| {
                timing
                    .iter()
                    .flatten()
                    .find(|t| t.function == f && t.algorithm == a)
                    .and_then(|t| {
                        t.mean_time_to_tol_s
                            .iter()
                            .find(|(e, _)| same_eps(*e, eps))
                            .map(|(_, m)| *m)
                    })
                    .unwrap_or(Metric::Fail)
            }),
        }
    };
    let values: Vec<Vec<Metric>> = functions
        .iter()
        .map(|f| algorithms.iter().map(|a| lookup(f, a)).collect())
        .collect();
    let (name, direction) = match args.metric {
        MetricArg::Cs => ("cs", Direction::LowerIsBetter),
        MetricArg::Nos => ("nos", Direction::HigherIsBetter),
        MetricArg::Time => ("time", Direction::LowerIsBetter),
    };
    let an = analyze(&values, direction, args.alpha).map_err(Failure::usage)?;

    let report = Report {
        metric: name,
        eps_tol: eps,
        alpha: args.alpha,
        algorithms: &algorithms,
        functions: &functions,
        values: &values,
        ranks: &an.table.ranks,
        avg_ranks: &an.table.avg_ranks,
        chi2: an.friedman.chi2,
        tau_f: (!an.friedman.degenerate).then_some(an.friedman.tau_f),
        tau_f_infinite: an.friedman.degenerate,
        tau_c: an.tau_c,
        reject_null: an.reject_null,
        cd: an.cd,
        pairwise: an.pairwise.as_deref(),
    };
    let out = args.out.clone().unwrap_or_else(|| tree.root.join("report.json"));
    let mut text = serde_json::to_string_pretty(&report).map_err(Failure::runtime)?;
    text.push('\n');
    fs::write(&out, text).map_err(|e| Failure::runtime(anyhow!("writing {}: {e}", out.display())))?;

    let width = algorithms.iter().map(|a| a.len()).max().unwrap_or(0).max(12);
    let mut header = format!("{:<8}", "function");
    for a in &algorithms {
        header.push_str(&format!(" {a:>width$}"));
    }
    println!("{} at eps_tol = {eps}, value(rank)", name.to_uppercase());
    println!("{header}");
    for (i, f) in functions.iter().enumerate() {
        let mut line = format!("{f:<8}");
        for (j, v) in values[i].iter().enumerate() {
            let c = format!("{}({})", cell(*v, args.metric), format_trimmed(an.table.ranks[i][j], 2));
            line.push_str(&format!(" {c:>width$}"));
        }
        println!("{line}");
    }
    let mut line = format!("{:<8}", "avg rank");
    for r in &an.table.avg_ranks {
        line.push_str(&format!(" {:>width$}", format_trimmed(*r, 4)));
    }
    println!("{line}");
    let tau = if an.friedman.degenerate {
        "inf".to_string()
    } else {
        format!("{:.4}", an.friedman.tau_f)
    };
    println!(
        "chi2 = {:.4}, tau_F = {tau}, tau_c = {:.4} (alpha = {}): {}",
        an.friedman.chi2,
        an.tau_c,
        args.alpha,
        if an.reject_null {
            "null rejected"
        } else {
            "null not rejected"
        }
    );
    match (an.cd, &an.pairwise) {
        (Some(cd), Some(pw)) => {
            println!("CD = {cd:.4}");
            for (i, row) in pw.iter().enumerate() {
                for (j, &sig) in row.iter().enumerate().skip(i + 1) {
                    if sig {
                        println!("  {} vs {}: significant", algorithms[i], algorithms[j]);
                    }
                }
            }
        }
        _ => println!("CD = n/a (Nemenyi constants unavailable for this k/alpha)"),
    }
    println!("report written to {}", out.display());
    Ok(())
}
