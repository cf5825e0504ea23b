/// Linearly varying coefficients over a run of `max_iter` iterations.
///
/// | coefficient | g = 0 | g = G |
/// |---|---|---|
/// | inertia `w` | 0.99 | 0.20 |
/// | exploration acceleration `k` | 3.0 | 2.5 |
/// | cognitive `c1` | 2.5 | 0.5 |
/// | social `c2` | 0.5 | 2.5 |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    max_iter: usize,
}

impl Schedule {
    pub fn new(max_iter: usize) -> Self {
        Self { max_iter }
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    fn progress(&self, g: usize) -> f64 {
        if self.max_iter == 0 {
            0.0
        } else {
            g as f64 / self.max_iter as f64
        }
    }

    pub fn inertia(&self, g: usize) -> f64 {
        0.99 - 0.79 * self.progress(g)
    }

    pub fn exploration(&self, g: usize) -> f64 {
        3.0 - 0.5 * self.progress(g)
    }

    pub fn cognitive(&self, g: usize) -> f64 {
        2.5 - 2.0 * self.progress(g)
    }

    pub fn social(&self, g: usize) -> f64 {
        0.5 + 2.0 * self.progress(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_values() {
        let s = Schedule::new(7500);
        assert_eq!(s.inertia(0), 0.99);
        assert!((s.inertia(7500) - 0.20).abs() < 1e-15);
        assert_eq!(s.exploration(0), 3.0);
        assert_eq!(s.exploration(7500), 2.5);
        assert_eq!(s.cognitive(0), 2.5);
        assert_eq!(s.social(7500), 2.5);
    }

    #[test]
    fn acceleration_coefficients_sum_to_three() {
        for g_max in [1usize, 7, 2000, 7500] {
            let s = Schedule::new(g_max);
            for g in 0..=g_max {
                assert!((s.cognitive(g) + s.social(g) - 3.0).abs() < 1e-15);
            }
        }
    }
}
