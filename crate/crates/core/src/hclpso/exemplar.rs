//! Comprehensive-learning exemplar selection.

use rand::Rng;

/// Learning probability of particle `i` (zero-based) in a swarm of `n`:
/// `lo + (hi − lo)(e^{10 i/(n−1)} − 1)/(e^{10} − 1)`. The usual range is
/// 0.05 to 0.5.
pub fn learning_probability(i: usize, n: usize, lo: f64, hi: f64) -> f64 {
    if n < 2 {
        return lo;
    }
    let t = 10.0 * i as f64 / (n - 1) as f64;
    lo + (hi - lo) * (t.exp() - 1.0) / (10f64.exp() - 1.0)
}

/// Range of particle indices particle `i` may learn from: its own
/// exploration subpopulation, or the whole swarm for exploitation particles.
pub fn peer_pool(i: usize, n_explore: usize, n_total: usize) -> std::ops::Range<usize> {
    if i < n_explore {
        0..n_explore
    } else {
        0..n_total
    }
}

/// Builds the exemplar of particle `i`: one source-particle index per
/// dimension.
///
/// Per dimension, with probability `pc`, the fitter (by personal-best
/// fitness) of two distinct particles drawn from the pool wins; otherwise the
/// particle follows its own personal best. If every dimension ended up on
/// `i`, one random dimension is redirected to a random other pool member.
pub fn assign_exemplar<R: Rng + ?Sized>(
    i: usize,
    n_explore: usize,
    pbest_fitness: &[f64],
    pc: f64,
    dim: usize,
    rng: &mut R,
) -> Vec<usize> {
    let pool = peer_pool(i, n_explore, pbest_fitness.len());
    let size = pool.len();
    let mut exemplar = vec![i; dim];
    if size < 2 {
        return exemplar;
    }
    for slot in exemplar.iter_mut() {
        if rng.random::<f64>() < pc {
            let a = pool.start + rng.random_range(0..size);
            let mut b = pool.start + rng.random_range(0..size - 1);
            if b >= a {
                b += 1;
            }
            *slot = if pbest_fitness[b] < pbest_fitness[a] { b } else { a };
        }
    }
    if exemplar.iter().all(|&e| e == i) {
        let d = rng.random_range(0..dim);
        let mut peer = pool.start + rng.random_range(0..size - 1);
        if peer >= i {
            peer += 1;
        }
        exemplar[d] = peer;
    }
    exemplar
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn probability_endpoints() {
        assert!((learning_probability(0, 40, 0.05, 0.5) - 0.05).abs() < 1e-15);
        assert!((learning_probability(39, 40, 0.05, 0.5) - 0.5).abs() < 1e-15);
        let ps: Vec<f64> = (0..40).map(|i| learning_probability(i, 40, 0.05, 0.5)).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_probability_forces_exactly_one_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fit = vec![5.0, 1.0, 3.0, 2.0];
        for _ in 0..200 {
            let e = assign_exemplar(2, 0, &fit, 0.0, 6, &mut rng);
            let others: Vec<_> = e.iter().filter(|&&x| x != 2).collect();
            assert_eq!(others.len(), 1);
            assert!(*others[0] < 4);
        }
    }

    #[test]
    fn two_particle_tournament() {
        // all four (i, fitter) combinations of a two-particle swarm
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (fit, i) in [([1.0, 2.0], 0usize), ([1.0, 2.0], 1), ([2.0, 1.0], 0), ([2.0, 1.0], 1)] {
            let other = 1 - i;
            let fitter = if fit[0] < fit[1] { 0 } else { 1 };
            for _ in 0..50 {
                let e = assign_exemplar(i, 0, &fit, 1.0, 5, &mut rng);
                if fitter == other {
                    assert!(e.iter().all(|&x| x == other));
                } else {
                    // own best wins every tournament; the forced dimension points away
                    assert_eq!(e.iter().filter(|&&x| x == other).count(), 1);
                }
            }
        }
    }

    #[test]
    fn exploration_pool_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fit: Vec<f64> = (0..40).map(|k| 40.0 - k as f64).collect();
        for i in 0..40 {
            for _ in 0..20 {
                let e = assign_exemplar(i, 15, &fit, 1.0, 10, &mut rng);
                if i < 15 {
                    assert!(e.iter().all(|&x| x < 15));
                } else {
                    assert!(e.iter().all(|&x| x < 40));
                }
            }
        }
    }

    #[test]
    fn singleton_pool_learns_from_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let e = assign_exemplar(0, 1, &[1.0, 0.0, 0.0], 1.0, 4, &mut rng);
        assert_eq!(e, vec![0; 4]);
    }
}
