//! Plain-text point-set and permutation-table files.
//!
//! Point sets: one point per line, whitespace-separated coordinates in
//! `[0,1)`. Lines starting with `#` and blank lines are ignored.
//!
//! Permutation tables: line j holds the digit permutation for the j-th prime
//! base as whitespace-separated integers.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{PointSet, SeqError};

fn read(path: &Path) -> Result<String, SeqError> {
    fs::read_to_string(path).map_err(|source| SeqError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_point_set(text: &str, provenance: &str) -> Result<PointSet, SeqError> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (line, content) in content_lines(text) {
        let row = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| SeqError::Parse {
                    line,
                    msg: format!("{tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = points.first() {
            if row.len() != first.len() {
                return Err(SeqError::Ragged {
                    line,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        if let Some(&value) = row.iter().find(|v| !(0.0..1.0).contains(*v)) {
            return Err(SeqError::OutOfRange { line, value });
        }
        points.push(row);
    }
    PointSet::new(points, provenance)
}

pub fn load_point_set(path: &Path) -> Result<PointSet, SeqError> {
    let text = read(path)?;
    parse_point_set(&text, &path.display().to_string())
}

/// Writes one point per line. `precision = None` uses the shortest
/// representation that round-trips.
pub fn write_point_set<W: Write>(
    out: &mut W,
    points: &[Vec<f64>],
    precision: Option<usize>,
) -> std::io::Result<()> {
    for p in points {
        let line = p
            .iter()
            .map(|v| match precision {
                Some(digits) => format!("{v:.digits$}"),
                None => format!("{v}"),
            })
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads raw permutation tables. Validation against the prime bases happens
/// when a Halton stream is built from them.
pub fn load_permutations(path: &Path) -> Result<Vec<Vec<u32>>, SeqError> {
    let text = read(path)?;
    content_lines(&text)
        .map(|(line, content)| {
            content
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u32>().map_err(|e| SeqError::Parse {
                        line,
                        msg: format!("{tok:?}: {e}"),
                    })
                })
                .collect()
        })
        .collect()
}
