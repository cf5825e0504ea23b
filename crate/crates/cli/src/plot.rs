//! `qswarm plot`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use qswarm::experiment::{average_curves, load_curves, relative_error, ResultsTree};

use crate::{default_plot_dir, CmdResult, Failure};

/// Relative errors below this are drawn at the floor on a log axis.
pub const LOG_FLOOR: f64 = 1e-12;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Results directory.
    dir: PathBuf,
    /// Function id, e.g. F3.
    #[arg(long)]
    function: String,
    /// Write only the CSV.
    #[arg(long)]
    csv_only: bool,
    /// Linear instead of logarithmic y axis.
    #[arg(long)]
    linear: bool,
    /// Output directory (defaults to `<dir>/plots`).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// One averaged relative-error curve per algorithm.
pub struct Series {
    pub label: String,
    pub values: Vec<f64>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_csv(series: &[Series]) -> String {
    let mut out = String::from("iter");
    for s in series {
        out.push(',');
        out.push_str(&s.label);
    }
    out.push('\n');
    let len = series.iter().map(|s| s.values.len()).max().unwrap_or(0);
    for i in 0..len {
        out.push_str(&i.to_string());
        for s in series {
            out.push(',');
            if let Some(v) = s.values.get(i) {
                out.push_str(&format!("{v:e}"));
            }
        }
        out.push('\n');
    }
    out
}

pub fn render_svg(title: &str, series: &[Series], log: bool) -> String {
    let transform = |v: f64| if log { v.max(LOG_FLOOR).log10() } else { v };
    let all = series.iter().flat_map(|s| s.values.iter().map(|&v| transform(v)));
    let (mut lo, mut hi) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if log {
        lo = lo.floor();
        hi = hi.ceil();
    } else {
        lo = lo.min(0.0);
    }
    if !lo.is_finite() {
        lo = 0.0;
    }
    if !hi.is_finite() || hi <= lo {
        hi = lo + 1.0;
    }
    let len = series.iter().map(|s| s.values.len()).max().unwrap_or(1).max(2);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let x = |i: usize| LEFT + pw * i as f64 / (len - 1) as f64;
    let y = |v: f64| TOP + ph * (1.0 - (v - lo) / (hi - lo));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let ticks: Vec<f64> = if log {
        let step = ((hi - lo) / 8.0).ceil().max(1.0);
        let mut t = Vec::new();
        let mut v = lo;
        while v <= hi + 1e-9 {
            t.push(v);
            v += step;
        }
        t
    } else {
        (0..=5).map(|k| lo + (hi - lo) * k as f64 / 5.0).collect()
    };
    for t in ticks {
        let label = if log { format!("1e{}", t as i64) } else { format!("{t:.3e}") };
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" x2="{}" y1="{yy:.2}" y2="{yy:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{label}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y(t) + 4.0,
            yy = y(t)
        );
    }
    for k in 0..=4 {
        let i = (len - 1) * k / 4;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            x(i),
            TOP + ph + 18.0,
            i
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">iteration</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">mean relative error</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );
    for (n, s) in series.iter().enumerate() {
        let color = COLORS[n % COLORS.len()];
        let points: Vec<String> = s
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", x(i), y(transform(v))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * n as f64;
        let lx = LEFT + pw + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" x2="{}" y1="{ly}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn cmd_plot(args: &PlotArgs) -> CmdResult {
    let tree = ResultsTree::new(&args.dir);
    let manifest_path = tree.manifest_path();
    let text = fs::read_to_string(&manifest_path).map_err(|e| {
        Failure::usage(anyhow!("no results in {} ({e})", args.dir.display()))
    })?;
    let manifest: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(anyhow!("{}: {e}", manifest_path.display())))?;
    let spec = manifest["suite"]
        .as_array()
        .into_iter()
        .flatten()
        .find(|s| s["id"].as_str() == Some(args.function.as_str()))
        .ok_or_else(|| Failure::usage(anyhow!("unknown function {:?}", args.function)))?;
    let optimum = spec["bias"]
        .as_f64()
        .ok_or_else(|| Failure::usage(anyhow!("manifest lacks the optimum of {}", args.function)))?;

    let mut series = Vec::new();
    for alg in manifest["config"]["algorithms"].as_array().into_iter().flatten() {
        let Some(label) = alg["label"].as_str() else {
            continue;
        };
        let curves = load_curves(&tree, &args.function, label).map_err(Failure::runtime)?;
        if curves.is_empty() {
            log::warn!("no curves for {}/{label}", args.function);
            continue;
        }
        let avg = average_curves(&curves).map_err(Failure::runtime)?;
        series.push(Series {
            label: label.to_string(),
            values: avg.values().iter().map(|&f| relative_error(f, optimum)).collect(),
        });
    }
    if series.is_empty() {
        return Err(Failure::usage(anyhow!(
            "no curves for {} in {}",
            args.function,
            args.dir.display()
        )));
    }

    let out_dir = args.out_dir.clone().unwrap_or_else(|| default_plot_dir(&args.dir));
    fs::create_dir_all(&out_dir)
        .map_err(|e| Failure::runtime(anyhow!("creating {}: {e}", out_dir.display())))?;
    let write = |name: String, body: String| -> CmdResult {
        let path = out_dir.join(name);
        fs::write(&path, body)
            .map_err(|e| Failure::runtime(anyhow!("writing {}: {e}", path.display())))?;
        println!("{}", path.display());
        Ok(())
    };
    write(format!("{}.csv", args.function), render_csv(&series))?;
    if !args.csv_only {
        let title = format!("{}: average convergence", args.function);
        write(
            format!("{}.svg", args.function),
            render_svg(&title, &series, !args.linear),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> Vec<Series> {
        vec![
            Series {
                label: "A".into(),
                values: vec![1.0, 0.1, 0.0],
            },
            Series {
                label: "B<1>".into(),
                values: vec![2.0, 1.0, 0.5],
            },
        ]
    }

    #[test]
    fn svg_structure() {
        let svg = render_svg("t", &demo(), true);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">A</text>"));
        assert!(svg.contains(">B&lt;1&gt;</text>"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
        let lin = render_svg("t", &demo(), false);
        assert_eq!(lin.matches("<polyline").count(), 2);
    }

    #[test]
    fn csv_layout() {
        let csv = render_csv(&demo());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "iter,A,B<1>");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,1e0,2e0");
        assert_eq!(lines[3], "2,0e0,5e-1");
    }
}
