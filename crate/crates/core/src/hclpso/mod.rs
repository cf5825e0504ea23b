//! The HCLPSO optimizer.
//!
//! The swarm is split into an exploration subpopulation, which follows
//! comprehensive-learning exemplars built from its own members only, and an
//! exploitation subpopulation, which follows exemplars from the whole swarm
//! plus the global best. Each of the four uniform-vector roles ([`Role`]) is
//! fed by its own [`PointStream`](crate::seqgen::PointStream), so any role can
//! be switched from pseudo-random to low-discrepancy points.

mod engine;
mod exemplar;
mod schedule;
mod variant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seqgen::SeqError;

pub use engine::{init_population, run, update_velocity, Hclpso, Pull, RoleStreams, SwarmState};
pub use exemplar::{assign_exemplar, learning_probability, peer_pool};
pub use schedule::Schedule;
pub use variant::{Preset, Role, VariantScheme};

#[derive(Debug, Error)]
pub enum HclpsoError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{role} stream: {source}")]
    Stream {
        role: &'static str,
        #[source]
        source: SeqError,
    },
    #[error("objective returned {value} for particle {particle} at iteration {iteration}")]
    NonFinite {
        particle: usize,
        iteration: usize,
        value: f64,
    },
    #[error("run already finished after {0} iterations")]
    Finished(usize),
}

/// What happens to a particle that leaves the search box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsMode {
    /// Keep the position but do not evaluate it.
    #[default]
    Skip,
    /// Project the position back onto the box, then evaluate.
    Clamp,
}

/// How the velocity roles walk through a low-discrepancy stream.
///
/// Pseudo-random streams always run on; the layout only affects
/// deterministic streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamLayout {
    /// Rewind at the start of every iteration, so each iteration uses the
    /// same N-point design: particle i always gets the i-th point.
    #[default]
    Restart,
    /// One long sequence: iteration g, particle i reads point g·N + i.
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HclpsoConfig {
    /// Exploration subpopulation size N₁.
    pub n_explore: usize,
    /// Exploitation subpopulation size N₂.
    pub n_exploit: usize,
    /// Iteration budget G.
    pub max_iter: usize,
    pub variant: VariantScheme,
    pub layout: StreamLayout,
    pub seed: u64,
    /// Velocity limit as a fraction of each dimension's range.
    pub velocity_clamp: f64,
    pub bounds_mode: BoundsMode,
    /// Iterations without personal-best improvement before an exemplar is rebuilt.
    pub refresh_gap: usize,
    pub pc_min: f64,
    pub pc_max: f64,
}

impl Default for HclpsoConfig {
    fn default() -> Self {
        Self {
            n_explore: 15,
            n_exploit: 25,
            max_iter: 2000,
            variant: VariantScheme::all_random(),
            layout: StreamLayout::Restart,
            seed: 0,
            velocity_clamp: 0.2,
            bounds_mode: BoundsMode::Skip,
            refresh_gap: 7,
            pc_min: 0.05,
            pc_max: 0.5,
        }
    }
}

impl HclpsoConfig {
    pub fn population(&self) -> usize {
        self.n_explore + self.n_exploit
    }

    pub fn validate(&self) -> Result<(), HclpsoError> {
        let bad = |m: String| Err(HclpsoError::Config(m));
        if self.population() < 2 {
            return bad(format!(
                "population must be at least 2, got {} + {}",
                self.n_explore, self.n_exploit
            ));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive".into());
        }
        if !(self.velocity_clamp > 0.0 && self.velocity_clamp.is_finite()) {
            return bad(format!("velocity_clamp must be positive, got {}", self.velocity_clamp));
        }
        if self.refresh_gap == 0 {
            return bad("refresh_gap must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.pc_min)
            || !(0.0..=1.0).contains(&self.pc_max)
            || self.pc_min > self.pc_max
        {
            return bad(format!(
                "learning probability range [{}, {}] must lie in [0, 1] and be ordered",
                self.pc_min, self.pc_max
            ));
        }
        Ok(())
    }
}

/// Best-so-far fitness after each iteration; entry 0 is the initial population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConvergenceCurve(pub Vec<f64>);

impl ConvergenceCurve {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn last(&self) -> Option<f64> {
        self.0.last().copied()
    }

    pub fn is_monotone(&self) -> bool {
        self.0.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub curve: ConvergenceCurve,
    /// Seconds since the run started, recorded alongside each curve entry.
    pub elapsed: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
}

impl RunOutcome {
    /// Wall time until the curve first reaches `target`, if it does.
    pub fn time_to(&self, target: f64) -> Option<f64> {
        self.curve
            .values()
            .iter()
            .position(|&f| f <= target)
            .map(|t| self.elapsed[t])
    }
}
