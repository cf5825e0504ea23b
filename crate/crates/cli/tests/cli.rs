use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn qswarm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qswarm"))
        .args(args)
        .env("QSWARM_THREADS", "2")
        .output()
        .expect("spawn qswarm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const MINIMAL: &str = r#"
version = 1
name = "mini"
output = "out"
master_seed = 7
runs = 3
max_iter = 200
eps_tol = [0.05]

[suite]
dim = 10
functions = ["F1"]

[[algorithm]]
label = "Rand"
preset = "rand"

[[algorithm]]
label = "Halton"
preset = "hclpso1"
stream = { kind = "halton" }
"#;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("exp.toml");
    fs::write(&path, text).unwrap();
    path
}

fn files_under(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path.strip_prefix(root).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

#[test]
fn seq_hua_wang_golden() {
    let o = qswarm(&["seq", "huawang", "-d", "1", "-p", "5", "-n", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "0.618034\n0.236068\n0.854102\n");
}

#[test]
fn seq_halton_golden() {
    let o = qswarm(&["seq", "halton", "-d", "2", "-n", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.5 0.333333\n");
    let o = qswarm(&["seq", "halton", "-d", "2", "-n", "1", "--exact"]);
    assert_eq!(stdout(&o), format!("0.5 {}\n", 1.0f64 / 3.0));
}

#[test]
fn seq_discrepancy_line() {
    let o = qswarm(&["seq", "halton", "-d", "2", "-n", "16", "--discrepancy"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 17);
    let cl2: f64 = lines[16].strip_prefix("# CL2 ").unwrap().parse().unwrap();
    assert!(cl2 > 0.0 && cl2 < 0.2);
}

#[test]
fn seq_errors_exit_2() {
    let o = qswarm(&["seq", "file", "--path", "missing.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.txt"));
    let o = qswarm(&["seq", "huawang", "-d", "3", "-p", "4", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qswarm(&["seq", "halton", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qswarm(&["seq", "sobol", "-d", "2", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seq_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pts.txt");
    let o = qswarm(&["seq", "random", "-d", "3", "-n", "5", "--seed", "4", "--exact", "-o", p(&out)]);
    assert!(o.status.success());
    let o = qswarm(&["seq", "file", "--path", p(&out), "--exact"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), fs::read_to_string(&out).unwrap());
    let o = qswarm(&["seq", "file", "--path", p(&out), "-n", "6", "--wrap", "error"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn suite_list() {
    let o = qswarm(&["suite", "list", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let items = v.as_array().unwrap();
    assert_eq!(items.len(), 17);
    assert_eq!(items[0]["id"], "F1");
    assert_eq!(items[0]["family"], "simple");
    assert_eq!(items[16]["family"], "composition");
    let o = qswarm(&["suite", "list"]);
    assert_eq!(stdout(&o).lines().count(), 18);
}

#[test]
fn minimal_run_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINIMAL);
    let o = qswarm(&["run", p(&cfg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let root = dir.path().join("out/mini");
    let files = files_under(&root);
    let csvs: Vec<_> = files.iter().filter(|f| f.extension().is_some_and(|e| e == "csv")).collect();
    assert_eq!(csvs.len(), 6);
    let summary: Value = serde_json::from_str(&fs::read_to_string(root.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary.as_array().unwrap().len(), 2);
    assert!(stdout(&o).contains("Halton"));

    let again = dir.path().join("again");
    let o = qswarm(&["run", p(&cfg), "--out", p(&again)]);
    assert!(o.status.success());
    let root2 = again.join("mini");
    assert_eq!(files, files_under(&root2));
    for f in &files {
        let a = fs::read(root.join(f)).unwrap();
        let b = fs::read(root2.join(f)).unwrap();
        if f == Path::new("manifest.json") {
            let mut a: Value = serde_json::from_slice(&a).unwrap();
            let mut b: Value = serde_json::from_slice(&b).unwrap();
            a["timestamp"] = Value::Null;
            b["timestamp"] = Value::Null;
            assert_eq!(a, b);
        } else if f == Path::new("timing.json") {
            continue;
        } else {
            assert!(a == b, "{} differs", f.display());
        }
    }
}

#[test]
fn strict_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let rows: String = (0..5).map(|i| format!("{}\n", vec![format!("0.{i}5"); 10].join(" "))).collect();
    fs::write(dir.path().join("short.txt"), rows).unwrap();
    let text = format!(
        "{MINIMAL}\n[[algorithm]]\nlabel = \"Short\"\nroles.exploit_social = {{ kind = \"file\", path = \"short.txt\", wrap = \"error\" }}\n"
    );
    let cfg = write_config(dir.path(), &text);
    let o = qswarm(&["run", p(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    let diag: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("out/mini/diagnostics.json")).unwrap(),
    )
    .unwrap();
    assert!(diag.as_array().unwrap().iter().all(|d| d["algorithm"] == "Short"));
    assert!(!diag.as_array().unwrap().is_empty());
    let o = qswarm(&["run", p(&cfg), "--strict"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_errors_exit_2_and_list_keys() {
    let dir = tempfile::tempdir().unwrap();
    let text = MINIMAL.replace("runs = 3", "runs = 3\nrunz = 4").replace("dim = 10", "dim = 10\nshape = 1");
    let cfg = write_config(dir.path(), &text);
    let o = qswarm(&["run", p(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("`runz`") && err.contains("`suite.shape`"), "{err}");
    assert!(!dir.path().join("out").exists());
    let o = qswarm(&["run", p(&dir.path().join("nope.toml"))]);
    assert_eq!(o.status.code(), Some(2));
}

fn synthetic(dir: &Path, cs: &[Vec<Value>], nos: Option<&[Vec<usize>]>) {
    let mut rows = Vec::new();
    for (i, row) in cs.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            rows.push(json!({
                "function": format!("F{}", i + 1),
                "algorithm": format!("A{}", j + 1),
                "eps_tol": 0.05,
                "CS": v,
                "NoS": nos.map_or(30, |n| n[i][j]),
                "mean_time_s": null,
                "R": 30,
                "G": 2000,
            }));
        }
    }
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&rows).unwrap()).unwrap();
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn compare_k5_m17_cd() {
    let dir = tempfile::tempdir().unwrap();
    let cs: Vec<Vec<Value>> = (0..17)
        .map(|i| (0..5).map(|j| json!(100 + 10 * ((i + j) % 5))).collect())
        .collect();
    synthetic(dir.path(), &cs, None);
    let o = qswarm(&["compare", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("CD = 1.4795"), "{}", stdout(&o));
    let r = report(dir.path());
    assert!((r["CD"].as_f64().unwrap() - 1.4795).abs() < 1e-3);
    assert_eq!(r["algorithms"].as_array().unwrap().len(), 5);
    assert_eq!(r["functions"].as_array().unwrap().len(), 17);
}

#[test]
fn compare_identical_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let cs: Vec<Vec<Value>> = (0..6).map(|i| vec![json!(50 + i); 3]).collect();
    synthetic(dir.path(), &cs, None);
    let o = qswarm(&["compare", p(dir.path())]);
    assert!(o.status.success());
    let r = report(dir.path());
    assert_eq!(r["tau_F"].as_f64(), Some(0.0));
    assert_eq!(r["reject_null"], false);
    assert_eq!(r["avg_ranks"], json!([2.0, 2.0, 2.0]));
}

#[test]
fn compare_fail_cells_and_nos_direction() {
    let dir = tempfile::tempdir().unwrap();
    let cs = vec![
        vec![json!(10), json!("FAIL"), json!(30)],
        vec![json!(5), json!(7), json!("FAIL")],
    ];
    let nos = [vec![30, 20, 10], vec![30, 25, 0]];
    synthetic(dir.path(), &cs, Some(&nos));
    let o = qswarm(&["compare", p(dir.path())]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("-(3)"));
    let r = report(dir.path());
    assert_eq!(r["values"][0][1], "FAIL");
    assert_eq!(r["ranks"][0], json!([1.0, 3.0, 2.0]));

    let out = dir.path().join("nos.json");
    let o = qswarm(&["compare", p(dir.path()), "--metric", "nos", "--out", p(&out)]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["metric"], "nos");
    assert_eq!(r["avg_ranks"], json!([1.0, 2.0, 3.0]));
    assert!(r["CD"].is_number());
}

#[test]
fn compare_insufficient_matrix() {
    let dir = tempfile::tempdir().unwrap();
    synthetic(dir.path(), &[vec![json!(1), json!(2)]], None);
    let o = qswarm(&["compare", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    let empty = tempfile::tempdir().unwrap();
    let o = qswarm(&["compare", p(empty.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), MINIMAL);
    assert!(qswarm(&["run", p(&cfg)]).status.success());
    let root = dir.path().join("out/mini");

    let o = qswarm(&["plot", p(&root), "--function", "F1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = fs::read_to_string(root.join("plots/F1.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains(">Rand</text>") && svg.contains(">Halton</text>"));
    let csv = fs::read_to_string(root.join("plots/F1.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("iter,Rand,Halton"));
    assert_eq!(csv.lines().count(), 202);
    assert!(csv.lines().nth(1).unwrap().starts_with("0,"));

    let only = dir.path().join("csv-only");
    let o = qswarm(&["plot", p(&root), "--function", "F1", "--csv-only", "--out-dir", p(&only)]);
    assert!(o.status.success());
    assert!(only.join("F1.csv").exists());
    assert!(!only.join("F1.svg").exists());

    let o = qswarm(&["plot", p(&root), "--function", "F9"]);
    assert_eq!(o.status.code(), Some(2));
    let empty = tempfile::tempdir().unwrap();
    let o = qswarm(&["plot", p(empty.path()), "--function", "F1"]);
    assert_eq!(o.status.code(), Some(2));
}
