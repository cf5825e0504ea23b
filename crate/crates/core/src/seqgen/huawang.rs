use std::f64::consts::PI;

use super::{SeqError, BELOW_ONE};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `p >= 2D + 3`.
pub fn default_hua_wang_prime(dim: usize) -> u64 {
    let mut p = 2 * dim as u64 + 3;
    while !is_prime(p) {
        p += 1;
    }
    p
}

fn frac(x: f64) -> f64 {
    (x - x.floor()).min(BELOW_ONE)
}

/// Generator vector `γ_j = frac(2 cos(2πj/p))`, `j = 1..=D`.
pub fn hua_wang_generator(dim: usize, p: u64) -> Result<Vec<f64>, SeqError> {
    if dim == 0 {
        return Err(SeqError::ZeroDimension);
    }
    if !is_prime(p) {
        return Err(SeqError::NotPrime(p));
    }
    let min = 2 * dim as u64 + 3;
    if p < min {
        return Err(SeqError::PrimeTooSmall { p, dim, min });
    }
    Ok((1..=dim)
        .map(|j| frac(2.0 * (2.0 * PI * j as f64 / p as f64).cos()))
        .collect())
}

/// Kronecker sequence `x_i = frac(i γ)` with the Hua-Wang generator.
#[derive(Debug, Clone)]
pub struct HuaWang {
    gamma: Vec<f64>,
}

impl HuaWang {
    pub fn new(dim: usize, p: u64) -> Result<Self, SeqError> {
        Ok(Self {
            gamma: hua_wang_generator(dim, p)?,
        })
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn point_into(&self, index: u64, out: &mut [f64]) {
        let i = index as f64;
        for (v, g) in out.iter_mut().zip(&self.gamma) {
            *v = frac(i * g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_golden_values() {
        let g = hua_wang_generator(1, 5).unwrap();
        assert!((g[0] - 0.6180340).abs() < 1e-6);
        let g = hua_wang_generator(2, 7).unwrap();
        assert!((g[0] - 0.246980).abs() < 1e-6);
        assert!((g[1] - 0.554958).abs() < 1e-6);
    }

    #[test]
    fn generator_preconditions() {
        assert!(matches!(hua_wang_generator(1, 4), Err(SeqError::NotPrime(4))));
        assert!(matches!(
            hua_wang_generator(2, 5),
            Err(SeqError::PrimeTooSmall { p: 5, dim: 2, min: 7 })
        ));
        assert!(matches!(hua_wang_generator(0, 5), Err(SeqError::ZeroDimension)));
    }

    #[test]
    fn default_prime() {
        assert_eq!(default_hua_wang_prime(1), 5);
        assert_eq!(default_hua_wang_prime(2), 7);
        assert_eq!(default_hua_wang_prime(10), 23);
        assert_eq!(default_hua_wang_prime(3), 11);
    }

    #[test]
    fn additive_recurrence() {
        let hw = HuaWang::new(4, 11).unwrap();
        let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
        for i in 1..=1000u64 {
            hw.point_into(i, &mut a);
            hw.point_into(i + 1, &mut b);
            for j in 0..4 {
                let step = frac(a[j] + hw.gamma()[j]);
                let diff = (b[j] - step).abs();
                // both sides may sit on opposite sides of an integer
                assert!(diff.min(1.0 - diff) < 1e-12, "i={i} j={j}");
            }
        }
    }
}
