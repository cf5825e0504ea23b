//! Shifted and rotated benchmark objectives: simple, hybrid and composition.

mod functions;
mod suite;
mod transform;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use functions::BaseFunction;
pub use suite::{family_of, simple_suite, standard_suite, FunctionFamily, SUITE_SIZE};
pub use transform::{load_transform, make_transform, parse_transform, Rotation, Transform};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("invalid bounds in dimension {dim}: lower {lower} must be below upper {upper}")]
    InvalidBounds { dim: usize, lower: f64, upper: f64 },
    #[error("{id}: dimension {dim} too small to split into {blocks} hybrid blocks")]
    HybridTooSmall { id: String, dim: usize, blocks: usize },
    #[error("hybrid partition is invalid: {0}")]
    InvalidPartition(String),
    #[error("unknown function id {0:?}")]
    UnknownFunction(String),
    #[error("transform file line {line}: {msg}")]
    TransformFile { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Box constraints `a ≤ x ≤ b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, BenchError> {
        if lower.is_empty() {
            return Err(BenchError::ZeroDimension);
        }
        if lower.len() != upper.len() {
            return Err(BenchError::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(BenchError::InvalidBounds {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self, BenchError> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    /// `[-100, 100]^D`.
    pub fn standard(dim: usize) -> Result<Self, BenchError> {
        Self::uniform(dim, -100.0, 100.0)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }
}

/// Anything the optimizer can minimize.
pub trait Objective: Send + Sync {
    fn id(&self) -> &str;
    fn dimension(&self) -> usize;
    fn bounds(&self) -> &Bounds;
    /// Known optimal value Z*.
    fn optimum(&self) -> f64;
    /// `x.len()` equals [`Objective::dimension`]; callers check this once up front.
    fn evaluate(&self, x: &[f64]) -> f64;
}

/// One constituent of a composition function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub base: BaseFunction,
    pub transform: Transform,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpecKind {
    Simple {
        base: BaseFunction,
        transform: Transform,
    },
    Hybrid {
        transform: Transform,
        /// `permutation[k]` is the coordinate of `z` placed at position k.
        permutation: Vec<usize>,
        /// Constituents in block order with their block sizes.
        blocks: Vec<(BaseFunction, usize)>,
    },
    Composition {
        components: Vec<Component>,
    },
}

/// A fully specified benchmark objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub id: String,
    pub name: String,
    pub bias: f64,
    pub bounds: Bounds,
    pub kind: SpecKind,
}

impl ObjectiveSpec {
    pub fn simple(
        id: impl Into<String>,
        base: BaseFunction,
        transform: Transform,
        bias: f64,
        bounds: Bounds,
    ) -> Result<Self, BenchError> {
        check_dim(bounds.dim(), transform.dim())?;
        check_dim(bounds.dim(), transform.rotation.dim())?;
        Ok(Self {
            id: id.into(),
            name: format!("Shifted and rotated {}", base.name()),
            bias,
            bounds,
            kind: SpecKind::Simple { base, transform },
        })
    }

    pub fn hybrid(
        id: impl Into<String>,
        blocks: Vec<(BaseFunction, usize)>,
        transform: Transform,
        permutation: Vec<usize>,
        bias: f64,
        bounds: Bounds,
    ) -> Result<Self, BenchError> {
        let dim = bounds.dim();
        check_dim(dim, transform.dim())?;
        check_dim(dim, permutation.len())?;
        let covered: usize = blocks.iter().map(|b| b.1).sum();
        if covered != dim || blocks.iter().any(|b| b.1 == 0) {
            return Err(BenchError::InvalidPartition(format!(
                "block sizes {:?} do not partition {dim} dimensions",
                blocks.iter().map(|b| b.1).collect::<Vec<_>>()
            )));
        }
        let mut seen = vec![false; dim];
        for &p in &permutation {
            match seen.get_mut(p) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(BenchError::InvalidPartition(
                        "permutation does not cover every dimension exactly once".into(),
                    ))
                }
            }
        }
        let name = format!(
            "Hybrid ({})",
            blocks.iter().map(|b| b.0.name()).collect::<Vec<_>>().join(", ")
        );
        Ok(Self {
            id: id.into(),
            name,
            bias,
            bounds,
            kind: SpecKind::Hybrid {
                transform,
                permutation,
                blocks,
            },
        })
    }

    pub fn composition(
        id: impl Into<String>,
        components: Vec<Component>,
        bias: f64,
        bounds: Bounds,
    ) -> Result<Self, BenchError> {
        if components.is_empty() {
            return Err(BenchError::InvalidPartition("composition without components".into()));
        }
        for c in &components {
            check_dim(bounds.dim(), c.transform.dim())?;
        }
        let name = format!(
            "Composition ({})",
            components.iter().map(|c| c.base.name()).collect::<Vec<_>>().join(", ")
        );
        Ok(Self {
            id: id.into(),
            name,
            bias,
            bounds,
            kind: SpecKind::Composition { components },
        })
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Location of the global optimum (the first component's shift for
    /// compositions).
    pub fn shift(&self) -> &[f64] {
        match &self.kind {
            SpecKind::Simple { transform, .. } | SpecKind::Hybrid { transform, .. } => {
                &transform.shift
            }
            SpecKind::Composition { components } => &components[0].transform.shift,
        }
    }

    /// Replaces the shift and rotation of a simple or hybrid spec, e.g. with
    /// data loaded by [`load_transform`].
    pub fn with_transform(mut self, t: Transform) -> Result<Self, BenchError> {
        check_dim(self.dim(), t.dim())?;
        match &mut self.kind {
            SpecKind::Simple { transform, .. } | SpecKind::Hybrid { transform, .. } => {
                *transform = t;
                Ok(self)
            }
            SpecKind::Composition { .. } => Err(BenchError::InvalidPartition(
                "compositions carry one transform per component".into(),
            )),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, BenchError> {
        check_dim(self.dim(), x.len())?;
        Ok(self.value(x))
    }

    fn value(&self, x: &[f64]) -> f64 {
        let dim = self.dim();
        let mut scratch = vec![0.0; dim];
        let mut z = vec![0.0; dim];
        match &self.kind {
            SpecKind::Simple { base, transform } => {
                transform.apply(x, &mut scratch, &mut z);
                self.bias + base.conditioned(&z)
            }
            SpecKind::Hybrid {
                transform,
                permutation,
                blocks,
            } => {
                transform.apply(x, &mut scratch, &mut z);
                for (s, &p) in scratch.iter_mut().zip(permutation) {
                    *s = z[p];
                }
                let mut start = 0;
                let mut total = self.bias;
                for &(base, len) in blocks {
                    total += base.conditioned(&scratch[start..start + len]);
                    start += len;
                }
                total
            }
            SpecKind::Composition { components } => {
                let w = composition_weights(components, x);
                let mut total = self.bias;
                for (c, wi) in components.iter().zip(w) {
                    if wi == 0.0 {
                        continue;
                    }
                    c.transform.apply(x, &mut scratch, &mut z);
                    total += wi * (c.lambda * c.base.conditioned(&z) + c.bias);
                }
                total
            }
        }
    }

    /// Normalized composition weights at `x`; empty for other kinds.
    pub fn weights(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            SpecKind::Composition { components } => composition_weights(components, x),
            _ => Vec::new(),
        }
    }
}

impl Objective for ObjectiveSpec {
    fn id(&self) -> &str {
        &self.id
    }

    fn dimension(&self) -> usize {
        self.dim()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn optimum(&self) -> f64 {
        self.bias
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        self.value(x)
    }
}

/// `w_i ∝ exp(−‖x − o_i‖²/(2Dσ_i²)) / ‖x − o_i‖`, normalized to sum to 1.
/// A point exactly on some `o_i` puts all weight there; if every weight
/// underflows the weights are uniform.
fn composition_weights(components: &[Component], x: &[f64]) -> Vec<f64> {
    let d = x.len() as f64;
    let dist2: Vec<f64> = components
        .iter()
        .map(|c| x.iter().zip(&c.transform.shift).map(|(a, b)| (a - b).powi(2)).sum())
        .collect();
    if let Some(hit) = dist2.iter().position(|&r| r == 0.0) {
        let mut w = vec![0.0; components.len()];
        w[hit] = 1.0;
        return w;
    }
    let raw: Vec<f64> = components
        .iter()
        .zip(&dist2)
        .map(|(c, &r2)| (-r2 / (2.0 * d * c.sigma * c.sigma)).exp() / r2.sqrt())
        .collect();
    let sum: f64 = raw.iter().sum();
    if sum > 0.0 && sum.is_finite() {
        raw.iter().map(|w| w / sum).collect()
    } else {
        vec![1.0 / components.len() as f64; components.len()]
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), BenchError> {
    if expected == found {
        Ok(())
    } else {
        Err(BenchError::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rastrigin_at_origin_returns_bias() {
        let b = Bounds::standard(5).unwrap();
        let spec =
            ObjectiveSpec::simple("r", BaseFunction::Rastrigin, Transform::identity(5), 500.0, b)
                .unwrap();
        assert_eq!(spec.eval(&[0.0; 5]).unwrap(), 500.0);
        assert!(matches!(
            spec.eval(&[0.0; 4]),
            Err(BenchError::DimensionMismatch { expected: 5, found: 4 })
        ));
    }

    #[test]
    fn monotone_penalty_along_first_axis() {
        let b = Bounds::standard(4).unwrap();
        for base in [BaseFunction::BentCigar, BaseFunction::HighConditionedElliptic] {
            let spec = ObjectiveSpec::simple("m", base, Transform::identity(4), 0.0, b.clone())
                .unwrap();
            let mut prev = spec.eval(&[0.0; 4]).unwrap();
            for k in 1..=100 {
                let t = k as f64;
                let pos = spec.eval(&[t, 0.0, 0.0, 0.0]).unwrap();
                let neg = spec.eval(&[-t, 0.0, 0.0, 0.0]).unwrap();
                assert!(pos >= prev && neg >= prev);
                assert_eq!(pos, neg);
                prev = pos;
            }
        }
    }

    #[test]
    fn hybrid_equals_manual_block_sum() {
        let b = Bounds::standard(4).unwrap();
        let t = make_transform(11, &b);
        let perm = vec![2, 0, 3, 1];
        let spec = ObjectiveSpec::hybrid(
            "h",
            vec![(BaseFunction::Zakharov, 2), (BaseFunction::Rastrigin, 2)],
            t.clone(),
            perm.clone(),
            1100.0,
            b,
        )
        .unwrap();
        let x = [10.0, -20.0, 30.5, 3.0];
        // brute force: z = R(x - o) written out by hand
        let mut z = [0.0; 4];
        for (r, zr) in z.iter_mut().enumerate() {
            for (c, xc) in x.iter().enumerate() {
                *zr += t.rotation.get(r, c) * (xc - t.shift[c]);
            }
        }
        let first = [z[perm[0]], z[perm[1]]];
        let second = [z[perm[2]], z[perm[3]]];
        let want = 1100.0
            + BaseFunction::Zakharov.conditioned(&first)
            + BaseFunction::Rastrigin.conditioned(&second);
        assert!((spec.eval(&x).unwrap() - want).abs() < 1e-9);
        assert!((spec.eval(&t.shift).unwrap() - 1100.0).abs() < 1e-9);
    }

    #[test]
    fn hybrid_partition_is_validated() {
        let b = Bounds::standard(4).unwrap();
        let t = Transform::identity(4);
        let blocks = vec![(BaseFunction::Zakharov, 2), (BaseFunction::Rastrigin, 1)];
        assert!(ObjectiveSpec::hybrid("h", blocks, t.clone(), vec![0, 1, 2, 3], 0.0, b.clone())
            .is_err());
        let blocks = vec![(BaseFunction::Zakharov, 2), (BaseFunction::Rastrigin, 2)];
        assert!(ObjectiveSpec::hybrid("h", blocks, t, vec![0, 1, 1, 3], 0.0, b).is_err());
    }

    #[test]
    fn bounds_validation() {
        assert!(Bounds::new(vec![0.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![], vec![]).is_err());
        assert!(Bounds::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let b = Bounds::uniform(2, -1.0, 1.0).unwrap();
        assert!(b.contains(&[1.0, -1.0]));
        assert!(!b.contains(&[1.0 + 1e-12, 0.0]));
    }
}
