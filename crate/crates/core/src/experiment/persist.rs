use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::{mean_time_to_tolerance, run_matrix, ExperimentConfig, ExperimentError, MatrixResult, Summary};
use crate::bench::{Objective, ObjectiveSpec};
use crate::hclpso::ConvergenceCurve;
use crate::stats::Metric;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Layout of one experiment's output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultsTree {
    pub root: PathBuf,
}

impl ResultsTree {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn cell_dir(&self, function: &str, algorithm: &str) -> PathBuf {
        self.root.join(function).join(algorithm)
    }

    /// `run` counts from 1.
    pub fn curve_path(&self, function: &str, algorithm: &str, run: usize) -> PathBuf {
        self.cell_dir(function, algorithm).join(format!("run{run}.csv"))
    }

    pub fn summary_path(&self) -> PathBuf {
        self.root.join("summary.json")
    }

    pub fn manifest_path(&self) -> PathBuf {
        self.root.join("manifest.json")
    }

    pub fn timing_path(&self) -> PathBuf {
        self.root.join("timing.json")
    }

    pub fn diagnostics_path(&self) -> PathBuf {
        self.root.join("diagnostics.json")
    }
}

/// Writes `iter,best_fitness` rows, one per curve entry.
pub fn write_curve_csv(path: &Path, curve: &ConvergenceCurve) -> Result<(), ExperimentError> {
    let mut text = String::with_capacity(24 * curve.len() + 20);
    text.push_str("iter,best_fitness\n");
    for (t, v) in curve.values().iter().enumerate() {
        text.push_str(&format!("{t},{v}\n"));
    }
    fs::write(path, text).map_err(io_err(path))
}

pub fn read_curve_csv(path: &Path) -> Result<ConvergenceCurve, ExperimentError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let csv_err = |line: usize, msg: String| ExperimentError::Csv {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "iter,best_fitness" => {}
        _ => return Err(csv_err(1, "expected header iter,best_fitness".into())),
    }
    let mut values = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (iter, value) = line
            .split_once(',')
            .ok_or_else(|| csv_err(i + 1, "expected two fields".into()))?;
        let iter: usize = iter
            .trim()
            .parse()
            .map_err(|_| csv_err(i + 1, format!("bad iteration {iter:?}")))?;
        if iter != values.len() {
            return Err(csv_err(i + 1, format!("expected iteration {}, found {iter}", values.len())));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| csv_err(i + 1, format!("bad value {value:?}")))?;
        values.push(v);
    }
    Ok(ConvergenceCurve(values))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), ExperimentError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| ExperimentError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(text.as_bytes()).map_err(io_err(path))
}

#[derive(Serialize)]
struct Manifest<'a> {
    timestamp: u64,
    master_seed: u64,
    config: &'a ExperimentConfig,
    suite: &'a [ObjectiveSpec],
}

#[derive(Serialize)]
struct Timing<'a> {
    function: &'a str,
    algorithm: &'a str,
    run_total_s: Vec<f64>,
    mean_time_to_tol_s: Vec<(f64, Metric)>,
}

/// Persists curves, summary, manifest, timings and diagnostics under `tree`.
pub fn write_results(
    tree: &ResultsTree,
    config: &ExperimentConfig,
    suite: &[ObjectiveSpec],
    result: &MatrixResult,
) -> Result<(), ExperimentError> {
    fs::create_dir_all(&tree.root).map_err(io_err(&tree.root))?;
    for ts in &result.trials {
        let dir = tree.cell_dir(&ts.function, &ts.algorithm);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        for (k, c) in ts.curves.iter().enumerate() {
            write_curve_csv(&tree.curve_path(&ts.function, &ts.algorithm, k + 1), c)?;
        }
    }
    write_json(&tree.summary_path(), &result.summaries)?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    write_json(
        &tree.manifest_path(),
        &Manifest {
            timestamp,
            master_seed: config.master_seed,
            config,
            suite,
        },
    )?;
    let timing: Vec<Timing> = result
        .trials
        .iter()
        .map(|ts| Timing {
            function: &ts.function,
            algorithm: &ts.algorithm,
            run_total_s: ts.elapsed.iter().map(|e| e.last().copied().unwrap_or(0.0)).collect(),
            mean_time_to_tol_s: config
                .eps_tol
                .iter()
                .map(|&eps| (eps, Metric::from(mean_time_to_tolerance(ts, eps))))
                .collect(),
        })
        .collect();
    write_json(&tree.timing_path(), &timing)?;
    write_json(&tree.diagnostics_path(), &result.failures)
}

/// Builds the configured suite, runs the matrix and writes the results tree
/// under `out_root/<name>`.
pub fn run_experiment(
    config: &ExperimentConfig,
    out_root: &Path,
) -> Result<(MatrixResult, ResultsTree), ExperimentError> {
    config.validate()?;
    let suite = config.suite()?;
    let objectives: Vec<&dyn Objective> = suite.iter().map(|s| s as &dyn Objective).collect();
    let result = run_matrix(&objectives, config)?;
    let tree = ResultsTree::new(out_root.join(&config.name));
    write_results(&tree, config, &suite, &result)?;
    Ok((result, tree))
}

pub fn load_summaries(tree: &ResultsTree) -> Result<Vec<Summary>, ExperimentError> {
    let path = tree.summary_path();
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|source| ExperimentError::Json { path, source })
}

/// Reads `run1.csv`, `run2.csv`, … of a cell until the first gap.
pub fn load_curves(
    tree: &ResultsTree,
    function: &str,
    algorithm: &str,
) -> Result<Vec<ConvergenceCurve>, ExperimentError> {
    let mut curves = Vec::new();
    loop {
        let path = tree.curve_path(function, algorithm, curves.len() + 1);
        if !path.exists() {
            break;
        }
        curves.push(read_curve_csv(&path)?);
    }
    Ok(curves)
}
