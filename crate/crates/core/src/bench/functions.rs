//! Base test functions.
//!
//! Each function has two forms:
//!
//! * [`BaseFunction::raw`] is the textbook formula, minimized wherever the
//!   textbook puts the minimum (the origin for most, `1` for Rosenbrock,
//!   `-1` for HGBat, ...).
//! * [`BaseFunction::conditioned`] is what objectives evaluate on the
//!   shifted, rotated variable `z`: it applies the usual search-range scale
//!   for the function, moves the minimizer to `z = 0` and normalizes so the
//!   value there is `0`.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

const LUNACEK_MU0: f64 = 2.5;
const LUNACEK_D: f64 = 1.0;
const SCHWEFEL_OPT: f64 = 4.209687462275036e2;
const SCHWEFEL_CONST: f64 = 4.189828872724338e2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunction {
    Zakharov,
    Rosenbrock,
    Rastrigin,
    ExpandedSchafferF6,
    LunacekBiRastrigin,
    NonContinuousRastrigin,
    Levy,
    Ackley,
    Griewank,
    ModifiedSchwefel,
    BentCigar,
    HgBat,
    HighConditionedElliptic,
    Katsuura,
    ExpandedGriewankRosenbrock,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 15] = [
        BaseFunction::Zakharov,
        BaseFunction::Rosenbrock,
        BaseFunction::Rastrigin,
        BaseFunction::ExpandedSchafferF6,
        BaseFunction::LunacekBiRastrigin,
        BaseFunction::NonContinuousRastrigin,
        BaseFunction::Levy,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
        BaseFunction::ModifiedSchwefel,
        BaseFunction::BentCigar,
        BaseFunction::HgBat,
        BaseFunction::HighConditionedElliptic,
        BaseFunction::Katsuura,
        BaseFunction::ExpandedGriewankRosenbrock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Zakharov => "Zakharov",
            BaseFunction::Rosenbrock => "Rosenbrock",
            BaseFunction::Rastrigin => "Rastrigin",
            BaseFunction::ExpandedSchafferF6 => "Expanded Schaffer F6",
            BaseFunction::LunacekBiRastrigin => "Lunacek bi-Rastrigin",
            BaseFunction::NonContinuousRastrigin => "Non-continuous Rastrigin",
            BaseFunction::Levy => "Levy",
            BaseFunction::Ackley => "Ackley",
            BaseFunction::Griewank => "Griewank",
            BaseFunction::ModifiedSchwefel => "Modified Schwefel",
            BaseFunction::BentCigar => "Bent Cigar",
            BaseFunction::HgBat => "HGBat",
            BaseFunction::HighConditionedElliptic => "High-conditioned elliptic",
            BaseFunction::Katsuura => "Katsuura",
            BaseFunction::ExpandedGriewankRosenbrock => "Expanded Griewank plus Rosenbrock",
        }
    }

    /// Search-range scale applied to `z` before the formula.
    fn scale(self) -> f64 {
        match self {
            BaseFunction::Rosenbrock => 2.048 / 100.0,
            BaseFunction::Rastrigin | BaseFunction::NonContinuousRastrigin => 5.12 / 100.0,
            BaseFunction::LunacekBiRastrigin => 10.0 / 100.0,
            BaseFunction::Griewank => 600.0 / 100.0,
            BaseFunction::ModifiedSchwefel => 1000.0 / 100.0,
            BaseFunction::HgBat
            | BaseFunction::Katsuura
            | BaseFunction::ExpandedGriewankRosenbrock => 5.0 / 100.0,
            _ => 1.0,
        }
    }

    /// Textbook formula.
    pub fn raw(self, x: &[f64]) -> f64 {
        match self {
            BaseFunction::Zakharov => zakharov(x),
            BaseFunction::Rosenbrock => rosenbrock(x),
            BaseFunction::Rastrigin => rastrigin(x),
            BaseFunction::ExpandedSchafferF6 => expanded_schaffer_f6(x),
            BaseFunction::LunacekBiRastrigin => lunacek_bi_rastrigin(x),
            BaseFunction::NonContinuousRastrigin => non_continuous_rastrigin(x),
            BaseFunction::Levy => levy(x),
            BaseFunction::Ackley => ackley(x),
            BaseFunction::Griewank => griewank(x),
            BaseFunction::ModifiedSchwefel => {
                let n = x.len() as f64;
                SCHWEFEL_CONST * n + x.iter().map(|&v| schwefel_term(v, n)).sum::<f64>()
            }
            BaseFunction::BentCigar => bent_cigar(x),
            BaseFunction::HgBat => hgbat(x),
            BaseFunction::HighConditionedElliptic => elliptic(x),
            BaseFunction::Katsuura => katsuura(x),
            BaseFunction::ExpandedGriewankRosenbrock => expanded_griewank_rosenbrock(x),
        }
    }

    /// Formula on the search variable `z`; minimum value `0` at `z = 0`.
    pub fn conditioned(self, z: &[f64]) -> f64 {
        let s = self.scale();
        match self {
            BaseFunction::ModifiedSchwefel => {
                // subtract the per-dimension value at the optimum so f(0) is exactly 0
                let n = z.len() as f64;
                let at_opt = schwefel_term(SCHWEFEL_OPT, n);
                z.iter()
                    .map(|&v| schwefel_term(s * v + SCHWEFEL_OPT, n) - at_opt)
                    .sum()
            }
            _ => {
                let offset = match self {
                    BaseFunction::Rosenbrock
                    | BaseFunction::Levy
                    | BaseFunction::ExpandedGriewankRosenbrock => 1.0,
                    BaseFunction::HgBat => -1.0,
                    // the 2 stretches [-100, 100] onto [-20, 20] around μ0
                    BaseFunction::LunacekBiRastrigin => LUNACEK_MU0,
                    _ => 0.0,
                };
                let s = if self == BaseFunction::LunacekBiRastrigin {
                    2.0 * s
                } else {
                    s
                };
                let y: Vec<f64> = z.iter().map(|&v| s * v + offset).collect();
                self.raw(&y)
            }
        }
    }
}

/// `Σ x_i² + (Σ ½ i x_i)² + (Σ ½ i x_i)⁴`, i from 1. f(1, 0) = 1.3125.
pub fn zakharov(x: &[f64]) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let lin: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
        .sum();
    sq + lin.powi(2) + lin.powi(4)
}

/// `Σ 100(x_i² − x_{i+1})² + (x_i − 1)²`; minimum 0 at `(1, …, 1)`, f(0, 0) = 1.
pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

/// `Σ x_i² − 10 cos(2π x_i) + 10`; f(½) = 20.25.
pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

fn schaffer_f6_pair(a: f64, b: f64) -> f64 {
    let r2 = a * a + b * b;
    let s = r2.sqrt().sin();
    0.5 + (s * s - 0.5) / (1.0 + 0.001 * r2).powi(2)
}

/// Schaffer F6 summed over consecutive pairs, wrapping the last onto the first.
pub fn expanded_schaffer_f6(x: &[f64]) -> f64 {
    let n = x.len();
    (0..n).map(|i| schaffer_f6_pair(x[i], x[(i + 1) % n])).sum()
}

/// Lunacek bi-Rastrigin with `μ0 = 2.5`, `d = 1`,
/// `s = 1 − 1/(2√(D + 20) − 8.2)`, `μ1 = −√((μ0² − d)/s)`:
///
/// `min(Σ (x_i − μ0)², dD + s Σ (x_i − μ1)²) + 10 Σ (1 − cos 2π(x_i − μ0))`,
/// minimum 0 at `x = μ0`.
pub fn lunacek_bi_rastrigin(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let s = 1.0 - 1.0 / (2.0 * (n + 20.0).sqrt() - 8.2);
    let mu1 = -((LUNACEK_MU0 * LUNACEK_MU0 - LUNACEK_D) / s).sqrt();
    let near: f64 = x.iter().map(|v| (v - LUNACEK_MU0).powi(2)).sum();
    let far: f64 = LUNACEK_D * n + s * x.iter().map(|v| (v - mu1).powi(2)).sum::<f64>();
    let ripple: f64 = x
        .iter()
        .map(|v| 1.0 - (2.0 * PI * (v - LUNACEK_MU0)).cos())
        .sum();
    near.min(far) + 10.0 * ripple
}

/// Rastrigin on `y_i = x_i` if `|x_i| ≤ ½`, else `round(2 x_i)/2`.
pub fn non_continuous_rastrigin(x: &[f64]) -> f64 {
    let y: Vec<f64> = x
        .iter()
        .map(|&v| if v.abs() <= 0.5 { v } else { (2.0 * v).round() / 2.0 })
        .collect();
    rastrigin(&y)
}

/// Levy with `w_i = 1 + (x_i − 1)/4`:
/// `sin²(πw_1) + Σ (w_i − 1)²(1 + 10 sin²(πw_i + 1)) + (w_D − 1)²(1 + sin²(2πw_D))`,
/// minimum 0 at `(1, …, 1)`.
pub fn levy(x: &[f64]) -> f64 {
    let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
    let last = w[w.len() - 1];
    let head = (PI * w[0]).sin().powi(2);
    let body: f64 = w[..w.len() - 1]
        .iter()
        .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
        .sum();
    let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
    head + body + tail
}

/// `−20 exp(−0.2 √(Σx²/D)) − exp(Σ cos(2πx)/D) + 20 + e`.
pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let cs: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    -20.0 * (-0.2 * (sq / n).sqrt()).exp() - (cs / n).exp() + 20.0 + E
}

/// `Σ x_i²/4000 − Π cos(x_i/√i) + 1`.
pub fn griewank(x: &[f64]) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    sq / 4000.0 - prod + 1.0
}

/// Per-coordinate term of the modified Schwefel function in `n` dimensions,
/// with the quadratic penalty outside `[-500, 500]`.
fn schwefel_term(v: f64, n: f64) -> f64 {
    if v > 500.0 {
        let m = 500.0 - v % 500.0;
        -m * m.sqrt().sin() + ((v - 500.0) / 100.0).powi(2) / n
    } else if v < -500.0 {
        let r = v.abs() % 500.0;
        -(r - 500.0) * (500.0 - r).sqrt().sin() + ((v + 500.0) / 100.0).powi(2) / n
    } else {
        -v * v.abs().sqrt().sin()
    }
}

/// `x_1² + 10⁶ Σ_{i>1} x_i²`.
pub fn bent_cigar(x: &[f64]) -> f64 {
    x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>()
}

/// `|(Σx²)² − (Σx)²|^½ + (½Σx² + Σx)/D + ½`; minimum 0 at `(−1, …, −1)`.
pub fn hgbat(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let s: f64 = x.iter().sum();
    (r2 * r2 - s * s).abs().sqrt() + (0.5 * r2 + s) / n + 0.5
}

/// `Σ 10^{6(i−1)/(D−1)} x_i²`.
pub fn elliptic(x: &[f64]) -> f64 {
    let n = x.len();
    if n == 1 {
        return x[0] * x[0];
    }
    x.iter()
        .enumerate()
        .map(|(i, v)| 1e6f64.powf(i as f64 / (n - 1) as f64) * v * v)
        .sum()
}

/// `(10/D²) Π_i (1 + i Σ_{j=1}^{32} |2^j x_i − round(2^j x_i)|/2^j)^{10/D^1.2} − 10/D²`.
pub fn katsuura(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let expo = 10.0 / n.powf(1.2);
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let inner: f64 = (1..=32)
                .map(|j| {
                    let p = 2f64.powi(j);
                    (p * v - (p * v + 0.5).floor()).abs() / p
                })
                .sum();
            (1.0 + (i + 1) as f64 * inner).powf(expo)
        })
        .product();
    let c = 10.0 / (n * n);
    prod * c - c
}

/// Griewank of the two-variable Rosenbrock term, summed over consecutive
/// pairs with wrap-around; minimum 0 at `(1, …, 1)`.
pub fn expanded_griewank_rosenbrock(x: &[f64]) -> f64 {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (a, b) = (x[i], x[(i + 1) % n]);
            let t = 100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2);
            t * t / 4000.0 - t.cos() + 1.0
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_raw_values() {
        assert!((zakharov(&[1.0, 0.0]) - 1.3125).abs() < 1e-15);
        assert_eq!(rosenbrock(&[1.0; 5]), 0.0);
        assert_eq!(rosenbrock(&[0.0, 0.0]), 1.0);
        assert!((rastrigin(&[0.5]) - 20.25).abs() < 1e-12);
        assert!((bent_cigar(&[1.0, 1.0]) - 1_000_001.0).abs() < 1e-9);
        assert!((elliptic(&[1.0, 1.0]) - 1_000_001.0).abs() < 1e-6);
        // elliptic D=3, x=(1,1,1): 1 + 10^3 + 10^6
        assert!((elliptic(&[1.0, 1.0, 1.0]) - 1_001_001.0).abs() < 1e-6);
        assert!(hgbat(&[-1.0, -1.0, -1.0]).abs() < 1e-15);
        // hgbat(0,0) = 0 + 0 + 0.5
        assert_eq!(hgbat(&[0.0, 0.0]), 0.5);
        assert!(ackley(&[0.0; 4]).abs() < 1e-14);
        assert!(griewank(&[0.0; 4]).abs() < 1e-15);
        assert_eq!(katsuura(&[0.0; 3]), 0.0);
        assert!(levy(&[1.0; 3]).abs() < 1e-30);
        assert!(lunacek_bi_rastrigin(&[LUNACEK_MU0; 4]).abs() < 1e-12);
        assert!(expanded_griewank_rosenbrock(&[1.0; 3]).abs() < 1e-15);
        assert!(expanded_schaffer_f6(&[0.0; 3]).abs() < 1e-15);
        // schaffer pair at (1, 0): 0.5 + (sin²1 − 0.5)/1.001²
        let want = 0.5 + ((1f64).sin().powi(2) - 0.5) / 1.001f64.powi(2);
        assert!((schaffer_f6_pair(1.0, 0.0) - want).abs() < 1e-15);
    }

    #[test]
    fn conditioned_forms_vanish_at_origin() {
        for f in BaseFunction::ALL {
            for d in [2usize, 3, 10] {
                let v = f.conditioned(&vec![0.0; d]);
                assert!(v.abs() < 1e-9, "{} D={d}: {v}", f.name());
            }
        }
    }

    #[test]
    fn conditioned_forms_are_nonnegative_nearby() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for f in BaseFunction::ALL {
            for _ in 0..200 {
                let z: Vec<f64> = (0..6).map(|_| rng.random_range(-100.0..100.0)).collect();
                assert!(f.conditioned(&z) > -1e-9, "{}", f.name());
            }
        }
    }

    #[test]
    fn non_continuous_rastrigin_steps() {
        // 0.74 rounds to 0.5, 0.76 rounds to 1.0
        assert_eq!(non_continuous_rastrigin(&[0.74]), rastrigin(&[0.5]));
        assert_eq!(non_continuous_rastrigin(&[0.76]), rastrigin(&[1.0]));
        assert_eq!(non_continuous_rastrigin(&[0.3]), rastrigin(&[0.3]));
    }

    #[test]
    fn schwefel_penalty_is_continuous_at_the_box() {
        let inside = schwefel_term(500.0, 2.0);
        let outside = schwefel_term(500.0 + 1e-9, 2.0);
        assert!((inside - outside).abs() < 1e-4);
    }
}
