//! Heterogeneous comprehensive-learning particle swarm optimization with
//! replaceable random streams.
//!
//! * [`seqgen`]: pseudo-random and low-discrepancy point streams.
//! * [`bench`]: shifted/rotated, hybrid and composition test functions.
//! * [`hclpso`]: the optimizer and its stream-binding variants.
//! * [`experiment`]: multi-run trials, convergence speed, success counts.
//! * [`stats`]: Friedman / Nemenyi rank statistics.

pub mod bench;
pub mod experiment;
pub mod hclpso;
pub mod seed;
pub mod seqgen;
pub mod stats;
