use super::{SeqError, BELOW_ONE};

/// The first `n` primes, ascending.
pub fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut candidate = 2u64;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Radical inverse of `index` in `base`, optionally through a digit
/// permutation.
///
/// Digits are permuted from the least significant one up to the most
/// significant nonzero digit; the implicit zeros above it are left alone, so
/// index 0 always maps to 0 and the result stays in `[0,1)`.
pub fn radical_inverse(mut index: u64, base: u64, perm: Option<&[u32]>) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut value = 0.0;
    while index > 0 {
        let digit = index % base;
        let digit = match perm {
            Some(p) => u64::from(p[digit as usize]),
            None => digit,
        };
        value += digit as f64 * scale;
        scale *= inv;
        index /= base;
    }
    value.min(BELOW_ONE)
}

/// Halton sequence over the first D primes.
#[derive(Debug, Clone)]
pub struct Halton {
    bases: Vec<u64>,
    permutations: Option<Vec<Vec<u32>>>,
}

impl Halton {
    /// `permutations`, when given, must hold at least one table per base; the
    /// j-th table is used for the j-th prime. Tables beyond D are ignored.
    pub fn new(dim: usize, permutations: Option<Vec<Vec<u32>>>) -> Result<Self, SeqError> {
        if dim == 0 {
            return Err(SeqError::ZeroDimension);
        }
        let bases = first_primes(dim);
        let permutations = match permutations {
            None => None,
            Some(mut tables) => {
                if tables.len() < dim {
                    return Err(SeqError::MissingPermutations {
                        needed: dim,
                        found: tables.len(),
                    });
                }
                tables.truncate(dim);
                for (&base, table) in bases.iter().zip(&tables) {
                    validate_permutation(base, table)?;
                }
                Some(tables)
            }
        };
        Ok(Self {
            bases,
            permutations,
        })
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    pub fn point_into(&self, index: u64, out: &mut [f64]) {
        for (j, (v, &base)) in out.iter_mut().zip(&self.bases).enumerate() {
            let perm = self.permutations.as_ref().map(|t| t[j].as_slice());
            *v = radical_inverse(index, base, perm);
        }
    }
}

fn validate_permutation(base: u64, table: &[u32]) -> Result<(), SeqError> {
    if table.len() as u64 != base {
        return Err(SeqError::PermutationLength {
            base,
            len: table.len(),
        });
    }
    let mut seen = vec![false; table.len()];
    for &d in table {
        match seen.get_mut(d as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return Err(SeqError::NotPermutation { base }),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact rational evaluation of the permuted digit expansion.
    fn oracle(index: u64, base: u64, perm: &[u32]) -> f64 {
        let mut digits = Vec::new();
        let mut n = index;
        while n > 0 {
            digits.push(n % base);
            n /= base;
        }
        // sum perm[d_j] * base^(k-1-j) / base^k
        let k = digits.len() as u32;
        let numerator: u128 = digits
            .iter()
            .enumerate()
            .map(|(j, &d)| u128::from(perm[d as usize]) * u128::from(base).pow(k - 1 - j as u32))
            .sum();
        numerator as f64 / (base as f64).powi(k as i32)
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(10), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn unpermuted_two_dimensional_points() {
        let h = Halton::new(2, None).unwrap();
        let mut p = [0.0; 2];
        h.point_into(1, &mut p);
        assert_eq!(p, [0.5, 1.0 / 3.0]);
    }

    #[test]
    fn swapped_binary_digits_golden_values() {
        let swap = [1u32, 0];
        // 1 = (1)_2 -> (0) -> 0; 2 = (0,1) -> (1,0) -> 0.5; 3 = (1,1) -> 0;
        // 4 = (0,0,1) -> (1,1,0) -> 0.75; 5 = (1,0,1) -> (0,1,0) -> 0.25
        let golden = [0.0, 0.0, 0.5, 0.0, 0.75, 0.25];
        for (i, g) in golden.iter().enumerate() {
            assert_eq!(radical_inverse(i as u64, 2, Some(&swap)), *g, "index {i}");
        }
    }

    #[test]
    fn permuted_inverse_matches_digit_oracle() {
        let perm5 = [0u32, 3, 1, 4, 2];
        let perm7 = [6u32, 2, 5, 0, 1, 4, 3];
        for i in 0..5000u64 {
            assert!((radical_inverse(i, 5, Some(&perm5)) - oracle(i, 5, &perm5)).abs() < 1e-13);
            assert!((radical_inverse(i, 7, Some(&perm7)) - oracle(i, 7, &perm7)).abs() < 1e-13);
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(matches!(
            Halton::new(1, Some(vec![vec![0, 1, 2]])),
            Err(SeqError::PermutationLength { base: 2, len: 3 })
        ));
        assert!(matches!(
            Halton::new(2, Some(vec![vec![1, 0], vec![0, 0, 2]])),
            Err(SeqError::NotPermutation { base: 3 })
        ));
        assert!(matches!(
            Halton::new(2, Some(vec![vec![1, 0]])),
            Err(SeqError::MissingPermutations { needed: 2, found: 1 })
        ));
    }
}
