//! The 17-function suite: 7 simple, 7 hybrid, 3 composition functions, with
//! seeded shifts, rotations and hybrid permutations.
//!
//! Hybrid proportions and composition parameters follow the CEC 2017
//! definitions where the constituent list matches; hybrids whose
//! constituent list differs use equal blocks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{make_transform, BaseFunction, BenchError, Bounds, Component, ObjectiveSpec};
use crate::seed;

pub const SUITE_SIZE: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionFamily {
    Simple,
    Hybrid,
    Composition,
}

use BaseFunction::*;

const SIMPLE: [(&str, BaseFunction, f64); 7] = [
    ("F1", Zakharov, 300.0),
    ("F2", Rosenbrock, 400.0),
    ("F3", Rastrigin, 500.0),
    ("F4", ExpandedSchafferF6, 600.0),
    ("F5", LunacekBiRastrigin, 700.0),
    ("F6", NonContinuousRastrigin, 800.0),
    ("F7", Levy, 900.0),
];

struct HybridDef {
    id: &'static str,
    bias: f64,
    parts: &'static [(BaseFunction, f64)],
}

const HYBRID: [HybridDef; 7] = [
    HybridDef {
        id: "F8",
        bias: 1100.0,
        parts: &[(Zakharov, 0.2), (Rosenbrock, 0.4), (Rastrigin, 0.4)],
    },
    HybridDef {
        id: "F9",
        bias: 1400.0,
        parts: &[
            (HighConditionedElliptic, 0.2),
            (Ackley, 0.2),
            (ExpandedSchafferF6, 0.2),
            (Rastrigin, 0.4),
        ],
    },
    HybridDef {
        id: "F10",
        bias: 1500.0,
        parts: &[(BentCigar, 0.2), (HgBat, 0.2), (Rastrigin, 0.3), (Rosenbrock, 0.3)],
    },
    HybridDef {
        id: "F11",
        bias: 1600.0,
        parts: &[
            (ExpandedSchafferF6, 0.2),
            (HgBat, 0.2),
            (Rosenbrock, 0.2),
            (ModifiedSchwefel, 0.2),
            (Rastrigin, 0.2),
        ],
    },
    HybridDef {
        id: "F12",
        bias: 1700.0,
        parts: &[
            (Katsuura, 0.1),
            (Ackley, 0.2),
            (ExpandedGriewankRosenbrock, 0.2),
            (ModifiedSchwefel, 0.2),
            (Rastrigin, 0.3),
        ],
    },
    HybridDef {
        id: "F13",
        bias: 1900.0,
        parts: &[
            (BentCigar, 0.25),
            (ExpandedGriewankRosenbrock, 0.25),
            (Rastrigin, 0.25),
            (ExpandedSchafferF6, 0.25),
        ],
    },
    HybridDef {
        id: "F14",
        bias: 2000.0,
        parts: &[
            (Katsuura, 0.2),
            (Ackley, 0.2),
            (Rastrigin, 0.2),
            (ExpandedSchafferF6, 0.2),
            (ModifiedSchwefel, 0.2),
        ],
    },
];

struct CompositionDef {
    id: &'static str,
    bias: f64,
    /// (base, sigma, lambda, component bias)
    parts: &'static [(BaseFunction, f64, f64, f64)],
}

const COMPOSITION: [CompositionDef; 3] = [
    CompositionDef {
        id: "F15",
        bias: 2100.0,
        parts: &[
            (Rosenbrock, 10.0, 1.0, 0.0),
            (HighConditionedElliptic, 20.0, 1e-6, 100.0),
            (Rastrigin, 30.0, 1.0, 200.0),
        ],
    },
    CompositionDef {
        id: "F16",
        bias: 2200.0,
        parts: &[
            (Rastrigin, 10.0, 1.0, 0.0),
            (Griewank, 20.0, 10.0, 100.0),
            (ModifiedSchwefel, 30.0, 1.0, 200.0),
        ],
    },
    CompositionDef {
        id: "F17",
        bias: 2400.0,
        parts: &[
            (Ackley, 10.0, 10.0, 0.0),
            (HighConditionedElliptic, 20.0, 1e-6, 100.0),
            (Griewank, 30.0, 10.0, 200.0),
            (Rastrigin, 40.0, 1.0, 300.0),
        ],
    },
];

/// Block sizes `ceil(p_k D)` for all but the last block, which takes the rest.
fn block_sizes(id: &str, parts: &[(BaseFunction, f64)], dim: usize) -> Result<Vec<usize>, BenchError> {
    let too_small = || BenchError::HybridTooSmall {
        id: id.to_string(),
        dim,
        blocks: parts.len(),
    };
    let mut sizes: Vec<usize> = parts[..parts.len() - 1]
        .iter()
        // the epsilon absorbs products like 0.3 * 10 = 3.0000000000000004
        .map(|&(_, p)| (p * dim as f64 - 1e-9).ceil().max(1.0) as usize)
        .collect();
    let used: usize = sizes.iter().sum();
    if used >= dim {
        return Err(too_small());
    }
    sizes.push(dim - used);
    Ok(sizes)
}

/// Family of a suite function id, `None` for unknown ids.
pub fn family_of(id: &str) -> Option<FunctionFamily> {
    if SIMPLE.iter().any(|s| s.0 == id) {
        Some(FunctionFamily::Simple)
    } else if HYBRID.iter().any(|h| h.id == id) {
        Some(FunctionFamily::Hybrid)
    } else if COMPOSITION.iter().any(|c| c.id == id) {
        Some(FunctionFamily::Composition)
    } else {
        None
    }
}

/// All 17 suite functions in dimension `dim`, transforms derived from `seed`.
pub fn standard_suite(dim: usize, seed: u64) -> Result<Vec<ObjectiveSpec>, BenchError> {
    if dim == 0 {
        return Err(BenchError::ZeroDimension);
    }
    let bounds = Bounds::standard(dim)?;
    let mut suite = simple_suite(dim, seed)?;

    for h in &HYBRID {
        let sizes = block_sizes(h.id, h.parts, dim)?;
        let transform = make_transform(seed::derive(seed, &[h.id, "transform"]), &bounds);
        let mut permutation: Vec<usize> = (0..dim).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, &[h.id, "permutation"]));
        permutation.shuffle(&mut rng);
        let blocks = h.parts.iter().map(|p| p.0).zip(sizes).collect();
        suite.push(ObjectiveSpec::hybrid(
            h.id,
            blocks,
            transform,
            permutation,
            h.bias,
            bounds.clone(),
        )?);
    }

    for c in &COMPOSITION {
        let components = c
            .parts
            .iter()
            .enumerate()
            .map(|(k, &(base, sigma, lambda, bias))| Component {
                base,
                transform: make_transform(
                    seed::derive(seed, &[c.id, "component", &k.to_string()]),
                    &bounds,
                ),
                sigma,
                lambda,
                bias,
            })
            .collect();
        suite.push(ObjectiveSpec::composition(c.id, components, c.bias, bounds.clone())?);
    }
    Ok(suite)
}

/// The seven simple functions F1–F7 only. Works for any `dim >= 1`.
pub fn simple_suite(dim: usize, seed: u64) -> Result<Vec<ObjectiveSpec>, BenchError> {
    let bounds = Bounds::standard(dim)?;
    SIMPLE
        .iter()
        .map(|&(id, base, bias)| {
            let t = make_transform(seed::derive(seed, &[id, "transform"]), &bounds);
            ObjectiveSpec::simple(id, base, t, bias, bounds.clone())
        })
        .collect()
}
