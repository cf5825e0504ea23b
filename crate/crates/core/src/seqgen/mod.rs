//! Uniform-random and low-discrepancy point streams over the unit cube.
//!
//! Every source of `[0,1)^D` points used by the optimizer goes through
//! [`PointStream`], so a pseudo-random stream and any quasi-random sequence
//! are interchangeable behind one cursor-based interface.

mod discrepancy;
mod halton;
mod huawang;
mod io;
mod oa;

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use discrepancy::{centered_l2_discrepancy, star_discrepancy_1d};
pub use halton::{first_primes, radical_inverse, Halton};
pub use huawang::{default_hua_wang_prime, hua_wang_generator, is_prime, HuaWang};
pub use io::{load_permutations, load_point_set, parse_point_set, write_point_set};
pub use oa::{choose_oa_params, oa_point_set, oa_point_set_with, orthogonal_array};

/// Largest `f64` strictly below one.
pub(crate) const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

#[derive(Debug, Error)]
pub enum SeqError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point count must be at least 1")]
    ZeroPoints,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} is too small for dimension {dim}; need p >= {min}")]
    PrimeTooSmall { p: u64, dim: usize, min: u64 },
    #[error("permutation table for base {base} has {len} entries")]
    PermutationLength { base: u64, len: usize },
    #[error("table for base {base} is not a permutation of 0..{base}")]
    NotPermutation { base: u64 },
    #[error("need {needed} permutation tables, found {found}")]
    MissingPermutations { needed: usize, found: usize },
    #[error("orthogonal array L{runs} has {columns} columns, cannot provide {dim} dimensions")]
    TooFewColumns { runs: u64, columns: u64, dim: usize },
    #[error("orthogonal array L{runs} cannot provide {requested} rows")]
    TooFewRuns { runs: u64, requested: usize },
    #[error("orthogonal array with {levels} levels and exponent {exponent} is too large")]
    ArrayTooLarge { levels: u64, exponent: u32 },
    #[error("point set exhausted after {len} points")]
    Exhausted { len: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: coordinate {value} outside [0,1)")]
    OutOfRange { line: usize, value: f64 },
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("point set is empty")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A finite, validated set of points in `[0,1)^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    provenance: String,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>, provenance: impl Into<String>) -> Result<Self, SeqError> {
        let first = points.first().ok_or(SeqError::Empty)?;
        let dim = first.len();
        if dim == 0 {
            return Err(SeqError::ZeroDimension);
        }
        for (row, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SeqError::Ragged {
                    line: row + 1,
                    expected: dim,
                    found: p.len(),
                });
            }
            if let Some(&value) = p.iter().find(|v| !(0.0..1.0).contains(*v)) {
                return Err(SeqError::OutOfRange {
                    line: row + 1,
                    value,
                });
            }
        }
        Ok(Self {
            points,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.points[index]
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Collects the first `n` points of a stream.
    pub fn from_stream(stream: &mut PointStream, n: usize) -> Result<Self, SeqError> {
        if n == 0 {
            return Err(SeqError::ZeroPoints);
        }
        let points = (0..n)
            .map(|_| stream.next_point_vec())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(points, stream.label())
    }
}

/// What a finite point table does once its cursor runs past the last row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WrapPolicy {
    /// Restart from the first row (cursor modulo N).
    #[default]
    Wrap,
    /// Fail with [`SeqError::Exhausted`].
    Error,
}

/// Declarative description of a stream, independent of dimension.
///
/// This is what run configurations carry; [`PointStream::new`] turns it into
/// a live stream for a given dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StreamKind {
    /// ChaCha8 pseudo-random stream. `None` means "derive from the run seed".
    Random {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// Kronecker sequence with the Hua-Wang cyclotomic generator.
    #[serde(rename = "huawang")]
    HuaWang {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<u64>,
    },
    /// Halton sequence over the first D primes, optionally with digit
    /// permutations loaded from a table file.
    Halton {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutations: Option<PathBuf>,
    },
    /// Rows of an orthogonal array, cycled.
    #[serde(rename = "oa")]
    OrthogonalArray {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent: Option<u32>,
    },
    /// A point set stored on disk.
    File {
        path: PathBuf,
        #[serde(default)]
        wrap: WrapPolicy,
    },
}

impl StreamKind {
    pub fn random(seed: u64) -> Self {
        StreamKind::Random { seed: Some(seed) }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, StreamKind::Random { .. })
    }

    /// Short label such as `halton` or `huawang`.
    pub fn name(&self) -> &'static str {
        match self {
            StreamKind::Random { .. } => "random",
            StreamKind::HuaWang { .. } => "huawang",
            StreamKind::Halton { .. } => "halton",
            StreamKind::OrthogonalArray { .. } => "oa",
            StreamKind::File { .. } => "file",
        }
    }
}

/// Default number of levels for orthogonal-array streams.
pub const DEFAULT_OA_LEVELS: u64 = 5;

#[derive(Debug, Clone)]
enum Source {
    Random { seed: u64, rng: Box<ChaCha8Rng> },
    HuaWang(HuaWang),
    Halton(Halton),
    Table {
        set: Arc<PointSet>,
        wrap: WrapPolicy,
        warned: bool,
    },
}

/// A stateful, replayable source of points in `[0,1)^D`.
#[derive(Debug, Clone)]
pub struct PointStream {
    dim: usize,
    cursor: u64,
    label: String,
    source: Source,
}

impl PointStream {
    /// Builds a stream of the given kind. A `Random` kind without a seed uses
    /// seed 0; callers that derive seeds should resolve them first.
    pub fn new(kind: &StreamKind, dim: usize) -> Result<Self, SeqError> {
        if dim == 0 {
            return Err(SeqError::ZeroDimension);
        }
        match kind {
            StreamKind::Random { seed } => Ok(Self::random(seed.unwrap_or(0), dim)),
            StreamKind::HuaWang { p } => {
                let p = p.unwrap_or_else(|| default_hua_wang_prime(dim));
                Ok(Self::hua_wang(dim, p)?)
            }
            StreamKind::Halton { permutations } => {
                let perms = permutations.as_deref().map(load_permutations).transpose()?;
                Self::halton(dim, perms)
            }
            StreamKind::OrthogonalArray { levels, exponent } => {
                let q = levels.unwrap_or(DEFAULT_OA_LEVELS);
                let j = match exponent {
                    Some(j) => *j,
                    None => oa::min_exponent(q, dim)?,
                };
                let runs = oa::run_count(q, j)?;
                let set = oa_point_set_with(q, j, runs as usize, dim)?;
                Ok(Self::from_point_set(Arc::new(set), WrapPolicy::Wrap))
            }
            StreamKind::File { path, wrap } => {
                let set = load_point_set(path)?;
                if set.dimension() != dim {
                    return Err(SeqError::DimensionMismatch {
                        expected: dim,
                        found: set.dimension(),
                    });
                }
                Ok(Self::from_point_set(Arc::new(set), *wrap))
            }
        }
    }

    pub fn random(seed: u64, dim: usize) -> Self {
        Self {
            dim,
            cursor: 0,
            label: format!("random(seed={seed})"),
            source: Source::Random {
                seed,
                rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    pub fn hua_wang(dim: usize, p: u64) -> Result<Self, SeqError> {
        let hw = HuaWang::new(dim, p)?;
        Ok(Self {
            dim,
            cursor: 0,
            label: format!("huawang(p={p})"),
            source: Source::HuaWang(hw),
        })
    }

    pub fn halton(dim: usize, permutations: Option<Vec<Vec<u32>>>) -> Result<Self, SeqError> {
        let permuted = permutations.is_some();
        let h = Halton::new(dim, permutations)?;
        Ok(Self {
            dim,
            cursor: 0,
            label: if permuted { "halton(permuted)" } else { "halton" }.to_string(),
            source: Source::Halton(h),
        })
    }

    pub fn from_point_set(set: Arc<PointSet>, wrap: WrapPolicy) -> Self {
        Self {
            dim: set.dimension(),
            cursor: 0,
            label: format!("table({})", set.provenance()),
            source: Source::Table {
                set,
                wrap,
                warned: false,
            },
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// True for pseudo-random streams.
    pub fn is_random(&self) -> bool {
        matches!(self.source, Source::Random { .. })
    }

    /// Index of the next point to be emitted; equals the number emitted
    /// since construction or the last [`reset`](Self::reset).
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Rewinds to the first point. Replaying yields identical output.
    pub fn reset(&mut self) {
        self.cursor = 0;
        match &mut self.source {
            Source::Random { seed, rng } => **rng = ChaCha8Rng::seed_from_u64(*seed),
            Source::Table { warned, .. } => *warned = false,
            Source::HuaWang(_) | Source::Halton(_) => {}
        }
    }

    /// Writes the next point into `out` and advances the cursor.
    pub fn next_point(&mut self, out: &mut [f64]) -> Result<(), SeqError> {
        if out.len() != self.dim {
            return Err(SeqError::DimensionMismatch {
                expected: self.dim,
                found: out.len(),
            });
        }
        match &mut self.source {
            Source::Random { rng, .. } => {
                for v in out.iter_mut() {
                    *v = rng.random::<f64>();
                }
            }
            // Quasi-random sequences start at index 1; index 0 is the origin.
            Source::HuaWang(hw) => hw.point_into(self.cursor + 1, out),
            Source::Halton(h) => h.point_into(self.cursor + 1, out),
            Source::Table { set, wrap, warned } => {
                let len = set.len() as u64;
                let row = if self.cursor < len {
                    self.cursor
                } else {
                    match wrap {
                        WrapPolicy::Error => return Err(SeqError::Exhausted { len: set.len() }),
                        WrapPolicy::Wrap => {
                            if !*warned {
                                log::warn!(
                                    "point set {} exhausted after {len} points; wrapping around",
                                    set.provenance()
                                );
                                *warned = true;
                            }
                            self.cursor % len
                        }
                    }
                };
                out.copy_from_slice(set.point(row as usize));
            }
        }
        self.cursor += 1;
        Ok(())
    }

    pub fn next_point_vec(&mut self) -> Result<Vec<f64>, SeqError> {
        let mut out = vec![0.0; self.dim];
        self.next_point(&mut out)?;
        Ok(out)
    }
}
