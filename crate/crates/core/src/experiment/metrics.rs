use super::{ExperimentError, TrialSet};
use crate::hclpso::ConvergenceCurve;

/// `(f − Z*)/|Z*|`, or the plain gap `f − Z*` when Z* is zero.
pub fn relative_error(f: f64, optimum: f64) -> f64 {
    if optimum == 0.0 {
        f - optimum
    } else {
        (f - optimum) / optimum.abs()
    }
}

/// Pointwise mean of equally long curves.
pub fn average_curves(curves: &[ConvergenceCurve]) -> Result<ConvergenceCurve, ExperimentError> {
    let first = curves.first().ok_or(ExperimentError::NoRuns)?;
    let len = first.len();
    let mut sum = vec![0.0; len];
    for c in curves {
        if c.len() != len {
            return Err(ExperimentError::LengthMismatch {
                expected: len,
                found: c.len(),
            });
        }
        for (s, v) in sum.iter_mut().zip(c.values()) {
            *s += v;
        }
    }
    let r = curves.len() as f64;
    Ok(ConvergenceCurve(sum.into_iter().map(|s| s / r).collect()))
}

pub fn average_curve(ts: &TrialSet) -> Result<ConvergenceCurve, ExperimentError> {
    average_curves(&ts.curves)
}

/// First iteration (0 = initial population) at which the curve is within
/// `eps_tol` relative error of the optimum; `None` means FAIL.
pub fn convergence_speed(avg: &ConvergenceCurve, optimum: f64, eps_tol: f64) -> Option<usize> {
    avg.values()
        .iter()
        .position(|&f| relative_error(f, optimum) <= eps_tol)
}

/// Runs whose final best value is within `eps_tol` of the optimum.
pub fn number_of_successes(ts: &TrialSet, eps_tol: f64) -> usize {
    ts.curves
        .iter()
        .filter(|c| c.last().is_some_and(|f| relative_error(f, ts.optimum) <= eps_tol))
        .count()
}

/// Mean wall time, over the runs that reach `eps_tol`, from the start of the
/// run to the first iteration within tolerance; `None` if no run gets there.
pub fn mean_time_to_tolerance(ts: &TrialSet, eps_tol: f64) -> Option<f64> {
    let times: Vec<f64> = ts
        .curves
        .iter()
        .zip(&ts.elapsed)
        .filter_map(|(c, e)| convergence_speed(c, ts.optimum, eps_tol).map(|t| e[t]))
        .collect();
    if times.is_empty() {
        None
    } else {
        Some(times.iter().sum::<f64>() / times.len() as f64)
    }
}
