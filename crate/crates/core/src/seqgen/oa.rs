//! Orthogonal arrays `L_{q^J}(q^m)`, `m = (q^J - 1)/(q - 1)`, for prime `q`.
//!
//! Basic columns enumerate the run index in base q (most significant digit
//! first); every other column is a linear combination of an earlier column
//! and a basic column over GF(q).

use super::huawang::is_prime;
use super::{PointSet, SeqError};

/// Upper bound on array size, to keep accidental requests from exhausting memory.
const MAX_RUNS: u64 = 1 << 24;

pub(crate) fn run_count(q: u64, j: u32) -> Result<u64, SeqError> {
    q.checked_pow(j)
        .filter(|&r| r <= MAX_RUNS)
        .ok_or(SeqError::ArrayTooLarge {
            levels: q,
            exponent: j,
        })
}

fn column_count(q: u64, runs: u64) -> u64 {
    (runs - 1) / (q - 1)
}

/// Smallest exponent `J >= 2` whose array has at least `dim` columns.
pub(crate) fn min_exponent(q: u64, dim: usize) -> Result<u32, SeqError> {
    if !is_prime(q) {
        return Err(SeqError::NotPrime(q));
    }
    let mut j = 2;
    loop {
        let runs = run_count(q, j)?;
        if column_count(q, runs) >= dim as u64 {
            return Ok(j);
        }
        j += 1;
    }
}

/// Picks the smallest array (fewest runs `q^J`) with at least `n` rows and
/// `dim` columns, over all primes q and exponents J >= 1.
pub fn choose_oa_params(n: usize, dim: usize) -> Result<(u64, u32), SeqError> {
    if n == 0 {
        return Err(SeqError::ZeroPoints);
    }
    if dim == 0 {
        return Err(SeqError::ZeroDimension);
    }
    let (n, d) = (n as u64, dim as u64);
    let mut best: Option<(u64, u64, u32)> = None;
    // With J = 1 the array is a single column of q runs, so q never needs to
    // exceed the next prime above max(n, d + 1).
    let q_cap = (n.max(d + 1)..).find(|&p| is_prime(p)).unwrap_or(2);
    for q in (2..=q_cap).filter(|&q| is_prime(q)) {
        let mut j = 1u32;
        while let Some(runs) = q.checked_pow(j) {
            if best.is_some_and(|(r, _, _)| runs >= r) {
                break;
            }
            if runs >= n && column_count(q, runs) >= d {
                best = Some((runs, q, j));
                break;
            }
            j += 1;
        }
    }
    let (runs, q, j) = best.expect("q = next prime >= max(n, d+1) with J = 2 always qualifies");
    if runs > MAX_RUNS {
        return Err(SeqError::ArrayTooLarge {
            levels: q,
            exponent: j,
        });
    }
    Ok((q, j))
}

/// Full array with levels `0..q`, `q^J` rows by `(q^J - 1)/(q - 1)` columns.
pub fn orthogonal_array(q: u64, j: u32) -> Result<Vec<Vec<u32>>, SeqError> {
    if !is_prime(q) {
        return Err(SeqError::NotPrime(q));
    }
    if j == 0 {
        return Err(SeqError::ZeroDimension);
    }
    let runs = run_count(q, j)?;
    let cols = column_count(q, runs) as usize;
    let mut a = vec![vec![0u32; cols]; runs as usize];
    for k in 1..=j {
        let basic = ((q.pow(k - 1) - 1) / (q - 1)) as usize;
        let block = q.pow(j - k);
        for (i, row) in a.iter_mut().enumerate() {
            row[basic] = ((i as u64 / block) % q) as u32;
        }
    }
    for k in 2..=j {
        let basic = ((q.pow(k - 1) - 1) / (q - 1)) as usize;
        for s in 0..basic {
            for t in 1..q {
                let col = basic + s * (q as usize - 1) + t as usize;
                for row in a.iter_mut() {
                    row[col] = ((u64::from(row[s]) * t + u64::from(row[basic])) % q) as u32;
                }
            }
        }
    }
    Ok(a)
}

/// First `n` rows and `dim` columns of `L_{q^J}`, level `l` mapped to
/// `(l + 0.5)/q` (levels counted from zero).
pub fn oa_point_set_with(q: u64, j: u32, n: usize, dim: usize) -> Result<PointSet, SeqError> {
    if n == 0 {
        return Err(SeqError::ZeroPoints);
    }
    if dim == 0 {
        return Err(SeqError::ZeroDimension);
    }
    let array = orthogonal_array(q, j)?;
    let runs = array.len() as u64;
    let cols = array[0].len() as u64;
    if (dim as u64) > cols {
        return Err(SeqError::TooFewColumns {
            runs,
            columns: cols,
            dim,
        });
    }
    if (n as u64) > runs {
        return Err(SeqError::TooFewRuns { runs, requested: n });
    }
    let qf = q as f64;
    let points = array
        .iter()
        .take(n)
        .map(|row| row[..dim].iter().map(|&l| (f64::from(l) + 0.5) / qf).collect())
        .collect();
    PointSet::new(points, format!("oa(L{runs}, q={q})"))
}

/// Orthogonal-array point set of `n` points in `dim` dimensions, using the
/// smallest qualifying array (see [`choose_oa_params`]).
pub fn oa_point_set(n: usize, dim: usize) -> Result<PointSet, SeqError> {
    let (q, j) = choose_oa_params(n, dim)?;
    oa_point_set_with(q, j, n, dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_points_in_two_dimensions_is_the_centered_grid() {
        assert_eq!(choose_oa_params(9, 2).unwrap(), (3, 2));
        let ps = oa_point_set(9, 2).unwrap();
        let c = [1.0 / 6.0, 3.0 / 6.0, 5.0 / 6.0];
        let expected: Vec<Vec<f64>> = (0..3)
            .flat_map(|a| (0..3).map(move |b| vec![c[a], c[b]]))
            .collect();
        for (got, want) in ps.points().iter().zip(&expected) {
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-15);
            }
        }
        assert_eq!(ps.len(), 9);
    }

    #[test]
    fn single_point() {
        let ps = oa_point_set(1, 1).unwrap();
        assert_eq!(ps.len(), 1);
        // L2 with q = 2: first row has level 0
        assert_eq!(ps.point(0), &[0.25]);
    }

    #[test]
    fn l9_matches_textbook_table() {
        // L9(3^4) in zero-based levels
        let expected = [
            [0, 0, 0, 0],
            [0, 1, 1, 1],
            [0, 2, 2, 2],
            [1, 0, 1, 2],
            [1, 1, 2, 0],
            [1, 2, 0, 1],
            [2, 0, 2, 1],
            [2, 1, 0, 2],
            [2, 2, 1, 0],
        ];
        let a = orthogonal_array(3, 2).unwrap();
        for (row, want) in a.iter().zip(expected) {
            assert_eq!(row.as_slice(), want);
        }
    }

    #[test]
    fn strength_two_balance() {
        for (q, j) in [(2, 3), (3, 3), (5, 2), (7, 2)] {
            let a = orthogonal_array(q, j).unwrap();
            let cols = a[0].len();
            let runs = a.len() as u64;
            for c1 in 0..cols {
                let mut single = vec![0u64; q as usize];
                for row in &a {
                    single[row[c1] as usize] += 1;
                }
                assert!(single.iter().all(|&n| n == runs / q), "q={q} col {c1}");
                for c2 in c1 + 1..cols {
                    let mut pairs = vec![0u64; (q * q) as usize];
                    for row in &a {
                        pairs[(row[c1] as u64 * q + row[c2] as u64) as usize] += 1;
                    }
                    assert!(pairs.iter().all(|&n| n == runs / (q * q)));
                }
            }
        }
    }

    #[test]
    fn parameter_choice_minimizes_runs() {
        assert_eq!(choose_oa_params(1, 1).unwrap(), (2, 1));
        assert_eq!(choose_oa_params(16, 10).unwrap(), (2, 4));
        assert_eq!(choose_oa_params(20, 3).unwrap(), (5, 2));
        assert_eq!(choose_oa_params(5, 1).unwrap(), (5, 1));
    }

    #[test]
    fn coordinates_are_level_centers() {
        let ps = oa_point_set(40, 7).unwrap();
        let (q, _) = choose_oa_params(40, 7).unwrap();
        for p in ps.points() {
            for &x in p {
                let l = x * q as f64 - 0.5;
                assert!((l - l.round()).abs() < 1e-12 && l >= -1e-12 && l < q as f64);
            }
        }
    }

    #[test]
    fn explicit_parameters_are_checked() {
        assert!(matches!(oa_point_set_with(4, 2, 4, 2), Err(SeqError::NotPrime(4))));
        assert!(matches!(
            oa_point_set_with(3, 2, 10, 2),
            Err(SeqError::TooFewRuns { runs: 9, requested: 10 })
        ));
        assert!(matches!(
            oa_point_set_with(3, 2, 9, 5),
            Err(SeqError::TooFewColumns { .. })
        ));
    }
}
