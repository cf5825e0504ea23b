//! `qswarm seq`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use qswarm::seqgen::{centered_l2_discrepancy, load_point_set, PointSet, PointStream, StreamKind, WrapPolicy};

use crate::{CmdResult, Failure};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SeqKind {
    Random,
    Huawang,
    Halton,
    Oa,
    File,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum WrapArg {
    #[default]
    Wrap,
    Error,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    kind: SeqKind,
    /// Dimension (inferred from the file for `file`).
    #[arg(short = 'd', long = "dim")]
    dim: Option<usize>,
    /// Number of points (defaults to the whole table for `file`).
    #[arg(short = 'n', long = "count")]
    count: Option<usize>,
    /// Hua-Wang prime.
    #[arg(short = 'p', long)]
    prime: Option<u64>,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Halton digit-permutation table.
    #[arg(long)]
    permutations: Option<PathBuf>,
    /// Orthogonal-array levels q (a prime).
    #[arg(long)]
    levels: Option<u64>,
    /// Orthogonal-array exponent J (q^J runs).
    #[arg(long)]
    exponent: Option<u32>,
    /// Point-set file for `file`.
    #[arg(long)]
    path: Option<PathBuf>,
    /// What `file` does past its last row.
    #[arg(long, value_enum, default_value_t = WrapArg::Wrap)]
    wrap: WrapArg,
    /// Append the centered L2 discrepancy as a comment line.
    #[arg(long)]
    discrepancy: bool,
    /// Decimal places; trailing zeros are trimmed.
    #[arg(long, default_value_t = 6)]
    precision: usize,
    /// Print the shortest round-trip representation instead.
    #[arg(long, conflicts_with = "precision")]
    exact: bool,
    /// Write to a file instead of stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// Fixed-point with `digits` decimals, trailing zeros and point trimmed.
pub fn format_trimmed(v: f64, digits: usize) -> String {
    let s = format!("{v:.digits$}");
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" { "0".into() } else { t.into() }
}

fn points(args: &SeqArgs) -> Result<PointSet, Failure> {
    if let SeqKind::File = args.kind {
        let path = args
            .path
            .as_ref()
            .ok_or_else(|| Failure::usage(anyhow::anyhow!("`seq file` needs --path")))?;
        let set = load_point_set(path).map_err(Failure::usage)?;
        if let Some(d) = args.dim {
            if d != set.dimension() {
                return Err(Failure::usage(anyhow::anyhow!(
                    "{} has dimension {}, not {d}",
                    path.display(),
                    set.dimension()
                )));
            }
        }
        let n = args.count.unwrap_or(set.len());
        let wrap = match args.wrap {
            WrapArg::Wrap => WrapPolicy::Wrap,
            WrapArg::Error => WrapPolicy::Error,
        };
        let mut stream = PointStream::from_point_set(set.into(), wrap);
        return PointSet::from_stream(&mut stream, n).map_err(Failure::usage);
    }
    let dim = args
        .dim
        .ok_or_else(|| Failure::usage(anyhow::anyhow!("-d/--dim is required")))?;
    let kind = match args.kind {
        SeqKind::Random => StreamKind::random(args.seed),
        SeqKind::Huawang => StreamKind::HuaWang { p: args.prime },
        SeqKind::Halton => StreamKind::Halton {
            permutations: args.permutations.clone(),
        },
        SeqKind::Oa => StreamKind::OrthogonalArray {
            levels: args.levels,
            exponent: args.exponent,
        },
        SeqKind::File => unreachable!(),
    };
    let mut stream = PointStream::new(&kind, dim).map_err(Failure::usage)?;
    let n = args
        .count
        .ok_or_else(|| Failure::usage(anyhow::anyhow!("-n/--count is required")))?;
    PointSet::from_stream(&mut stream, n).map_err(Failure::usage)
}

pub fn cmd_seq(args: &SeqArgs) -> CmdResult {
    let set = points(args)?;
    let mut out: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .with_context(|| format!("creating {}", p.display()))
                .map_err(Failure::runtime)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let write = |out: &mut dyn Write| -> io::Result<()> {
        for p in set.points() {
            let line: Vec<String> = p
                .iter()
                .map(|&v| {
                    if args.exact {
                        format!("{v}")
                    } else {
                        format_trimmed(v, args.precision)
                    }
                })
                .collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        if args.discrepancy {
            writeln!(out, "# CL2 {}", centered_l2_discrepancy(&set))?;
        }
        out.flush()
    };
    write(&mut *out).context("writing points").map_err(Failure::runtime)
}

#[cfg(test)]
mod tests {
    use super::format_trimmed;

    #[test]
    fn trimming() {
        assert_eq!(format_trimmed(0.5, 6), "0.5");
        assert_eq!(format_trimmed(1.0 / 3.0, 6), "0.333333");
        assert_eq!(format_trimmed(0.0, 6), "0");
        assert_eq!(format_trimmed(-1e-9, 6), "0");
        assert_eq!(format_trimmed(12.0, 0), "12");
    }
}
