//! Experiment configuration files (TOML, schema version 1).
//!
//! ```toml
//! version = 1
//! name = "desk"
//! output = "results"        # relative to this file
//! master_seed = 1
//! runs = 30
//! max_iter = 2000
//! n_explore = 15
//! n_exploit = 25
//! eps_tol = [0.05, 0.01]
//! record_times = false
//!
//! [suite]
//! dim = 10
//! seed = 0
//! functions = ["F1", "F2"]  # omit for all 17
//!
//! [engine]                  # optional
//! layout = "restart"        # or "continuous"
//! velocity_clamp = 0.2
//! bounds_mode = "skip"      # or "clamp"
//! refresh_gap = 7
//! pc_min = 0.05
//! pc_max = 0.5
//!
//! [[algorithm]]
//! label = "Rand"
//! preset = "rand"
//!
//! [[algorithm]]
//! label = "Halton"
//! preset = "hclpso1"
//! stream = { kind = "halton" }
//!
//! [[algorithm]]
//! label = "custom"
//! roles.explore = { kind = "huawang", p = 23 }
//! roles.exploit_social = { kind = "file", path = "des.txt", wrap = "error" }
//! ```

use std::path::{Path, PathBuf};

use qswarm::experiment::{Algorithm, ExperimentConfig};
use qswarm::hclpso::{BoundsMode, Preset, StreamLayout, VariantScheme};
use qswarm::seqgen::{StreamKind, WrapPolicy};
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

const TOP_KEYS: &[&str] = &[
    "version",
    "name",
    "output",
    "master_seed",
    "runs",
    "max_iter",
    "n_explore",
    "n_exploit",
    "eps_tol",
    "record_times",
    "suite",
    "engine",
    "algorithm",
];
const SUITE_KEYS: &[&str] = &["dim", "seed", "functions"];
const ENGINE_KEYS: &[&str] = &[
    "layout",
    "velocity_clamp",
    "bounds_mode",
    "refresh_gap",
    "pc_min",
    "pc_max",
];
const ALGORITHM_KEYS: &[&str] = &["label", "preset", "stream", "roles"];
const ROLE_KEYS: &[&str] = &["init", "explore", "exploit_cognitive", "exploit_social"];

/// A validated configuration file.
#[derive(Debug, Clone)]
pub struct RunFile {
    pub experiment: ExperimentConfig,
    /// Results root; the experiment writes to `output/<name>`.
    pub output: PathBuf,
}

/// Every problem found in a file, one message per offending key.
#[derive(Debug)]
pub struct SchemaErrors(pub Vec<String>);

impl std::fmt::Display for SchemaErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "configuration has {} problem(s):", self.0.len())?;
        for e in &self.0 {
            writeln!(f, "  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SchemaErrors {}

struct Reader<'a> {
    errors: Vec<String>,
    base: &'a Path,
}

impl Reader<'_> {
    fn unknown_keys(&mut self, table: &Table, allowed: &[&str], path: &str) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                self.errors.push(format!("unknown key `{}`", join(path, key)));
            }
        }
    }

    fn type_error(&mut self, path: &str, expected: &str, found: &Value) {
        self.errors
            .push(format!("`{path}` must be {expected}, found {}", found.type_str()));
    }

    fn uint(&mut self, table: &Table, key: &str, path: &str) -> Option<u64> {
        let p = join(path, key);
        match table.get(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            v => {
                self.type_error(&p, "a non-negative integer", v);
                None
            }
        }
    }

    fn float(&mut self, table: &Table, key: &str, path: &str) -> Option<f64> {
        let p = join(path, key);
        match table.get(key)? {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            v => {
                self.type_error(&p, "a number", v);
                None
            }
        }
    }

    fn string(&mut self, table: &Table, key: &str, path: &str) -> Option<String> {
        let p = join(path, key);
        match table.get(key)? {
            Value::String(s) => Some(s.clone()),
            v => {
                self.type_error(&p, "a string", v);
                None
            }
        }
    }

    fn boolean(&mut self, table: &Table, key: &str, path: &str) -> Option<bool> {
        let p = join(path, key);
        match table.get(key)? {
            Value::Boolean(b) => Some(*b),
            v => {
                self.type_error(&p, "a boolean", v);
                None
            }
        }
    }

    fn table<'t>(&mut self, table: &'t Table, key: &str, path: &str) -> Option<&'t Table> {
        let p = join(path, key);
        match table.get(key)? {
            Value::Table(t) => Some(t),
            v => {
                self.type_error(&p, "a table", v);
                None
            }
        }
    }

    fn path(&self, s: &str) -> PathBuf {
        let p = PathBuf::from(s);
        if p.is_absolute() {
            p
        } else {
            self.base.join(p)
        }
    }

    fn stream(&mut self, table: &Table, path: &str) -> Option<StreamKind> {
        let Some(kind) = self.string(table, "kind", path) else {
            if !table.contains_key("kind") {
                self.errors.push(format!("`{}` is required", join(path, "kind")));
            }
            return None;
        };
        let allowed: &[&str] = match kind.as_str() {
            "random" => &["kind", "seed"],
            "huawang" => &["kind", "p"],
            "halton" => &["kind", "permutations"],
            "oa" => &["kind", "levels", "exponent"],
            "file" => &["kind", "path", "wrap"],
            other => {
                self.errors.push(format!(
                    "`{}`: unknown stream kind {other:?} (expected random, huawang, halton, oa or file)",
                    join(path, "kind")
                ));
                return None;
            }
        };
        self.unknown_keys(table, allowed, path);
        Some(match kind.as_str() {
            "random" => StreamKind::Random {
                seed: self.uint(table, "seed", path),
            },
            "huawang" => StreamKind::HuaWang {
                p: self.uint(table, "p", path),
            },
            "halton" => StreamKind::Halton {
                permutations: self.string(table, "permutations", path).map(|s| self.path(&s)),
            },
            "oa" => StreamKind::OrthogonalArray {
                levels: self.uint(table, "levels", path),
                exponent: self.uint(table, "exponent", path).map(|j| j as u32),
            },
            _ => {
                let file = match self.string(table, "path", path) {
                    Some(s) => self.path(&s),
                    None => {
                        if !table.contains_key("path") {
                            self.errors.push(format!("`{}` is required", join(path, "path")));
                        }
                        PathBuf::new()
                    }
                };
                let wrap = match self.string(table, "wrap", path).as_deref() {
                    None | Some("wrap") => WrapPolicy::Wrap,
                    Some("error") => WrapPolicy::Error,
                    Some(other) => {
                        self.errors.push(format!(
                            "`{}`: expected \"wrap\" or \"error\", found {other:?}",
                            join(path, "wrap")
                        ));
                        WrapPolicy::Wrap
                    }
                };
                StreamKind::File { path: file, wrap }
            }
        })
    }

    fn algorithm(&mut self, table: &Table, path: &str) -> Option<Algorithm> {
        self.unknown_keys(table, ALGORITHM_KEYS, path);
        let label = self.string(table, "label", path);
        if !table.contains_key("label") {
            self.errors.push(format!("`{}` is required", join(path, "label")));
        }
        let preset = self.string(table, "preset", path).and_then(|s| match s.parse::<Preset>() {
            Ok(p) => Some(p),
            Err(e) => {
                self.errors.push(format!("`{}`: {e}", join(path, "preset")));
                None
            }
        });
        let stream = self
            .table(table, "stream", path)
            .and_then(|t| self.stream(t, &join(path, "stream")));
        let mut variant = match (preset, stream) {
            (Some(Preset::Hclpso3), _) | (None, None) => VariantScheme::all_random(),
            (Some(p), Some(s)) => VariantScheme::preset(p, s),
            (Some(p), None) => {
                if !table.contains_key("stream") {
                    self.errors.push(format!(
                        "`{}` is required for preset {p}",
                        join(path, "stream")
                    ));
                }
                VariantScheme::all_random()
            }
            (None, Some(_)) => {
                self.errors
                    .push(format!("`{}` needs a `preset`", join(path, "stream")));
                VariantScheme::all_random()
            }
        };
        if let Some(roles) = self.table(table, "roles", path) {
            let rpath = join(path, "roles");
            self.unknown_keys(roles, ROLE_KEYS, &rpath);
            for key in ROLE_KEYS {
                let Some(t) = self.table(roles, key, &rpath) else {
                    continue;
                };
                if let Some(kind) = self.stream(t, &join(&rpath, key)) {
                    match *key {
                        "init" => variant.init = kind,
                        "explore" => variant.explore = kind,
                        "exploit_cognitive" => variant.exploit_cognitive = kind,
                        _ => variant.exploit_social = kind,
                    }
                }
            }
        }
        Some(Algorithm {
            label: label?,
            variant,
        })
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Parses and validates configuration text. Relative paths are resolved
/// against `base`.
pub fn parse(text: &str, base: &Path) -> Result<RunFile, SchemaErrors> {
    let root: Table = toml::from_str(text).map_err(|e| SchemaErrors(vec![e.to_string()]))?;
    let mut r = Reader {
        errors: Vec::new(),
        base,
    };
    r.unknown_keys(&root, TOP_KEYS, "");
    match root.get("version") {
        None => r.errors.push("`version` is required".into()),
        Some(Value::Integer(v)) if *v == SCHEMA_VERSION => {}
        Some(v) => r.errors.push(format!(
            "`version` must be {SCHEMA_VERSION}, found {v}"
        )),
    }

    let mut cfg = ExperimentConfig::default();
    if let Some(v) = r.string(&root, "name", "") {
        cfg.name = v;
    }
    let output = r
        .string(&root, "output", "")
        .map(|s| r.path(&s))
        .unwrap_or_else(|| base.join("results"));
    if let Some(v) = r.uint(&root, "master_seed", "") {
        cfg.master_seed = v;
    }
    if let Some(v) = r.uint(&root, "runs", "") {
        cfg.runs = v as usize;
    }
    if let Some(v) = r.uint(&root, "max_iter", "") {
        cfg.max_iter = v as usize;
    }
    if let Some(v) = r.uint(&root, "n_explore", "") {
        cfg.n_explore = v as usize;
    }
    if let Some(v) = r.uint(&root, "n_exploit", "") {
        cfg.n_exploit = v as usize;
    }
    if let Some(v) = r.boolean(&root, "record_times", "") {
        cfg.record_times = v;
    }
    match root.get("eps_tol") {
        None => {}
        Some(Value::Array(items)) => {
            let mut eps = Vec::new();
            for (i, item) in items.iter().enumerate() {
                match item {
                    Value::Float(f) => eps.push(*f),
                    Value::Integer(n) => eps.push(*n as f64),
                    v => r.type_error(&format!("eps_tol[{i}]"), "a number", v),
                }
            }
            cfg.eps_tol = eps;
        }
        Some(Value::Float(f)) => cfg.eps_tol = vec![*f],
        Some(v) => r.type_error("eps_tol", "a number or an array of numbers", v),
    }

    if let Some(suite) = r.table(&root, "suite", "") {
        r.unknown_keys(suite, SUITE_KEYS, "suite");
        if let Some(v) = r.uint(suite, "dim", "suite") {
            cfg.dim = v as usize;
        }
        if let Some(v) = r.uint(suite, "seed", "suite") {
            cfg.suite_seed = v;
        }
        match suite.get("functions") {
            None => {}
            Some(Value::Array(items)) => {
                for (i, item) in items.iter().enumerate() {
                    match item {
                        Value::String(s) => cfg.functions.push(s.clone()),
                        v => r.type_error(&format!("suite.functions[{i}]"), "a string", v),
                    }
                }
            }
            Some(v) => r.type_error("suite.functions", "an array of strings", v),
        }
    }

    if let Some(engine) = r.table(&root, "engine", "") {
        r.unknown_keys(engine, ENGINE_KEYS, "engine");
        match r.string(engine, "layout", "engine").as_deref() {
            None => {}
            Some("restart") => cfg.layout = StreamLayout::Restart,
            Some("continuous") => cfg.layout = StreamLayout::Continuous,
            Some(other) => r.errors.push(format!(
                "`engine.layout`: expected \"restart\" or \"continuous\", found {other:?}"
            )),
        }
        match r.string(engine, "bounds_mode", "engine").as_deref() {
            None => {}
            Some("skip") => cfg.bounds_mode = BoundsMode::Skip,
            Some("clamp") => cfg.bounds_mode = BoundsMode::Clamp,
            Some(other) => r.errors.push(format!(
                "`engine.bounds_mode`: expected \"skip\" or \"clamp\", found {other:?}"
            )),
        }
        if let Some(v) = r.float(engine, "velocity_clamp", "engine") {
            cfg.velocity_clamp = v;
        }
        if let Some(v) = r.uint(engine, "refresh_gap", "engine") {
            cfg.refresh_gap = v as usize;
        }
        if let Some(v) = r.float(engine, "pc_min", "engine") {
            cfg.pc_min = v;
        }
        if let Some(v) = r.float(engine, "pc_max", "engine") {
            cfg.pc_max = v;
        }
    }

    match root.get("algorithm") {
        None => r.errors.push("at least one [[algorithm]] is required".into()),
        Some(Value::Array(items)) => {
            for (i, item) in items.iter().enumerate() {
                let path = format!("algorithm[{i}]");
                match item {
                    Value::Table(t) => {
                        if let Some(a) = r.algorithm(t, &path) {
                            cfg.algorithms.push(a);
                        }
                    }
                    v => r.type_error(&path, "a table", v),
                }
            }
        }
        Some(v) => r.type_error("algorithm", "an array of tables ([[algorithm]])", v),
    }

    if r.errors.is_empty() {
        if let Err(e) = cfg.validate() {
            r.errors.push(e.to_string());
        } else if let Err(e) = cfg.suite() {
            r.errors.push(e.to_string());
        }
    }
    if r.errors.is_empty() {
        Ok(RunFile {
            experiment: cfg,
            output,
        })
    } else {
        Err(SchemaErrors(r.errors))
    }
}
