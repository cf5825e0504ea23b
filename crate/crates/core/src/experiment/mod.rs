//! Multi-run experiments: run matrices, averaged curves, convergence speed,
//! success counts, and the on-disk results tree.

mod metrics;
mod persist;

use std::collections::HashSet;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::{standard_suite, BenchError, Objective, ObjectiveSpec};
use crate::hclpso::{
    BoundsMode, ConvergenceCurve, HclpsoConfig, HclpsoError, StreamLayout, VariantScheme,
};
use crate::seed;
use crate::stats::Metric;

pub use metrics::{
    average_curve, average_curves, convergence_speed, mean_time_to_tolerance, number_of_successes,
    relative_error,
};
pub use persist::{
    load_curves, load_summaries, read_curve_csv, run_experiment, write_curve_csv, write_results,
    ResultsTree,
};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QSWARM_THREADS";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("curve length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("trial set has no runs")]
    NoRuns,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}, line {line}: {msg}")]
    Csv { path: PathBuf, line: usize, msg: String },
    #[error("{THREADS_ENV}: {0}")]
    Threads(String),
}

/// One column of the comparison: a label and its stream bindings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Algorithm {
    pub label: String,
    pub variant: VariantScheme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Directory name of the experiment under the results root.
    pub name: String,
    pub dim: usize,
    /// Function ids; empty selects the whole suite.
    pub functions: Vec<String>,
    /// Seed of the shifts and rotations of the suite.
    pub suite_seed: u64,
    pub algorithms: Vec<Algorithm>,
    /// Runs per cell, R.
    pub runs: usize,
    pub max_iter: usize,
    pub n_explore: usize,
    pub n_exploit: usize,
    pub eps_tol: Vec<f64>,
    pub master_seed: u64,
    pub layout: StreamLayout,
    pub velocity_clamp: f64,
    pub bounds_mode: BoundsMode,
    pub refresh_gap: usize,
    pub pc_min: f64,
    pub pc_max: f64,
    /// Write mean wall times into the summary. Off by default so the summary
    /// stays a pure function of the configuration.
    pub record_times: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let h = HclpsoConfig::default();
        Self {
            name: "experiment".into(),
            dim: 10,
            functions: Vec::new(),
            suite_seed: 0,
            algorithms: Vec::new(),
            runs: 30,
            max_iter: h.max_iter,
            n_explore: h.n_explore,
            n_exploit: h.n_exploit,
            eps_tol: vec![0.05],
            master_seed: 0,
            layout: h.layout,
            velocity_clamp: h.velocity_clamp,
            bounds_mode: h.bounds_mode,
            refresh_gap: h.refresh_gap,
            pc_min: h.pc_min,
            pc_max: h.pc_max,
            record_times: false,
        }
    }
}

fn is_safe_label(s: &str) -> bool {
    !s.is_empty()
        && s != "."
        && s != ".."
        && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl ExperimentConfig {
    /// Engine settings for one run.
    pub fn hclpso(&self, variant: &VariantScheme, seed: u64) -> HclpsoConfig {
        HclpsoConfig {
            n_explore: self.n_explore,
            n_exploit: self.n_exploit,
            max_iter: self.max_iter,
            variant: variant.clone(),
            layout: self.layout,
            seed,
            velocity_clamp: self.velocity_clamp,
            bounds_mode: self.bounds_mode,
            refresh_gap: self.refresh_gap,
            pc_min: self.pc_min,
            pc_max: self.pc_max,
        }
    }

    /// Seed of run `run` of the (`function`, `algorithm`) cell.
    pub fn run_seed(&self, function: &str, algorithm: &str, run: usize) -> u64 {
        seed::derive(self.master_seed, &[function, algorithm, &run.to_string()])
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if !is_safe_label(&self.name) {
            return bad(format!(
                "name {:?} must be non-empty and use only letters, digits, '_', '-' or '.'",
                self.name
            ));
        }
        if self.algorithms.is_empty() {
            return bad("at least one algorithm is required".into());
        }
        let mut seen = HashSet::new();
        for a in &self.algorithms {
            if !is_safe_label(&a.label) {
                return bad(format!(
                    "algorithm label {:?} must be non-empty and use only letters, digits, '_', '-' or '.'",
                    a.label
                ));
            }
            if !seen.insert(a.label.as_str()) {
                return bad(format!("duplicate algorithm label {:?}", a.label));
            }
        }
        let mut seen = HashSet::new();
        for f in &self.functions {
            if !seen.insert(f.as_str()) {
                return bad(format!("duplicate function id {f:?}"));
            }
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.eps_tol.is_empty() {
            return bad("eps_tol needs at least one tolerance".into());
        }
        if let Some(e) = self.eps_tol.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return bad(format!("tolerance {e} must be positive"));
        }
        self.hclpso(&VariantScheme::all_random(), 0)
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))
    }

    /// The selected functions of the seeded suite, in configuration order.
    pub fn suite(&self) -> Result<Vec<ObjectiveSpec>, ExperimentError> {
        let all = standard_suite(self.dim, self.suite_seed)?;
        if self.functions.is_empty() {
            return Ok(all);
        }
        self.functions
            .iter()
            .map(|id| {
                all.iter()
                    .find(|s| s.id.eq_ignore_ascii_case(id))
                    .cloned()
                    .ok_or_else(|| BenchError::UnknownFunction(id.clone()).into())
            })
            .collect()
    }
}

/// All runs of one (function, algorithm) cell.
#[derive(Debug, Clone)]
pub struct TrialSet {
    pub function: String,
    pub algorithm: String,
    pub optimum: f64,
    pub curves: Vec<ConvergenceCurve>,
    /// Seconds since run start at each curve entry, per run.
    pub elapsed: Vec<Vec<f64>>,
}

/// One row of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub function: String,
    pub algorithm: String,
    pub eps_tol: f64,
    /// Convergence speed of the average curve; FAIL if it never gets there.
    #[serde(rename = "CS")]
    pub cs: Metric,
    #[serde(rename = "NoS")]
    pub nos: usize,
    /// `null` unless wall times are recorded.
    pub mean_time_s: Option<Metric>,
    #[serde(rename = "R")]
    pub runs: usize,
    #[serde(rename = "G")]
    pub max_iter: usize,
}

impl Summary {
    pub fn of(ts: &TrialSet, eps_tol: f64, record_times: bool) -> Result<Self, ExperimentError> {
        let avg = average_curve(ts)?;
        let cs = convergence_speed(&avg, ts.optimum, eps_tol);
        let mean_time_s = record_times.then(|| match cs {
            Some(_) => Metric::from(mean_time_to_tolerance(ts, eps_tol)),
            None => Metric::Fail,
        });
        Ok(Self {
            function: ts.function.clone(),
            algorithm: ts.algorithm.clone(),
            eps_tol,
            cs: Metric::from(cs.map(|t| t as f64)),
            nos: number_of_successes(ts, eps_tol),
            mean_time_s,
            runs: ts.curves.len(),
            max_iter: avg.len().saturating_sub(1),
        })
    }
}

/// A cell that could not be completed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub function: String,
    pub algorithm: String,
    pub run: usize,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct MatrixResult {
    pub trials: Vec<TrialSet>,
    pub summaries: Vec<Summary>,
    pub failures: Vec<CellFailure>,
}

impl MatrixResult {
    pub fn trial(&self, function: &str, algorithm: &str) -> Option<&TrialSet> {
        self.trials
            .iter()
            .find(|t| t.function == function && t.algorithm == algorithm)
    }

    pub fn summary(&self, function: &str, algorithm: &str, eps_tol: f64) -> Option<&Summary> {
        self.summaries
            .iter()
            .find(|s| s.function == function && s.algorithm == algorithm && s.eps_tol == eps_tol)
    }
}

fn thread_cap() -> Result<Option<usize>, ExperimentError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(ExperimentError::Threads(format!("expected a thread count, found {v:?}"))),
        },
    }
}

/// Runs every (function, algorithm) cell `config.runs` times in parallel.
///
/// A run error fails only its cell: the cell is left out of `trials` and
/// `summaries` and recorded in `failures`.
pub fn run_matrix(
    objectives: &[&dyn Objective],
    config: &ExperimentConfig,
) -> Result<MatrixResult, ExperimentError> {
    config.validate()?;
    let tasks: Vec<(usize, usize, usize)> = (0..objectives.len())
        .flat_map(|f| {
            (0..config.algorithms.len()).flat_map(move |a| (0..config.runs).map(move |r| (f, a, r)))
        })
        .collect();
    let work = || -> Vec<Result<crate::hclpso::RunOutcome, HclpsoError>> {
        tasks
            .par_iter()
            .map(|&(f, a, r)| {
                let obj = objectives[f];
                let alg = &config.algorithms[a];
                let seed = config.run_seed(obj.id(), &alg.label, r);
                crate::hclpso::run(obj, &config.hclpso(&alg.variant, seed))
            })
            .collect()
    };
    let outcomes = match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ExperimentError::Threads(e.to_string()))?
            .install(work),
        None => work(),
    };

    let mut outcomes = outcomes.into_iter();
    let mut result = MatrixResult {
        trials: Vec::new(),
        summaries: Vec::new(),
        failures: Vec::new(),
    };
    for obj in objectives {
        for alg in &config.algorithms {
            let runs: Vec<_> = outcomes.by_ref().take(config.runs).collect();
            if let Some((run, err)) = runs
                .iter()
                .enumerate()
                .find_map(|(k, r)| r.as_ref().err().map(|e| (k, e)))
            {
                log::warn!("{} / {}: run {} failed: {err}", obj.id(), alg.label, run + 1);
                result.failures.push(CellFailure {
                    function: obj.id().to_string(),
                    algorithm: alg.label.clone(),
                    run: run + 1,
                    error: err.to_string(),
                });
                continue;
            }
            let (curves, elapsed) = runs
                .into_iter()
                .map(|r| {
                    let o = r.expect("errors handled above");
                    (o.curve, o.elapsed)
                })
                .unzip();
            let ts = TrialSet {
                function: obj.id().to_string(),
                algorithm: alg.label.clone(),
                optimum: obj.optimum(),
                curves,
                elapsed,
            };
            for &eps in &config.eps_tol {
                result.summaries.push(Summary::of(&ts, eps, config.record_times)?);
            }
            result.trials.push(ts);
        }
    }
    Ok(result)
}
