use super::PointSet;

/// Centered L2 discrepancy (Hickernell), via the closed-form double sum
///
/// ```text
/// CD² = (13/12)^D
///     − (2/N) Σ_i Π_k (1 + |x_ik − ½|/2 − |x_ik − ½|²/2)
///     + (1/N²) Σ_i Σ_j Π_k (1 + |x_ik − ½|/2 + |x_jk − ½|/2 − |x_ik − x_jk|/2)
/// ```
///
/// Returns `CD` (the square root).
pub fn centered_l2_discrepancy(ps: &PointSet) -> f64 {
    let n = ps.len() as f64;
    let d = ps.dimension() as i32;
    let pts = ps.points();
    let single: f64 = pts
        .iter()
        .map(|p| {
            p.iter()
                .map(|&x| {
                    let c = (x - 0.5).abs();
                    1.0 + 0.5 * c - 0.5 * c * c
                })
                .product::<f64>()
        })
        .sum();
    let mut pair = 0.0;
    for (i, p) in pts.iter().enumerate() {
        // symmetric in (i, j): count off-diagonal terms twice
        for (j, q) in pts.iter().enumerate().skip(i) {
            let term: f64 = p
                .iter()
                .zip(q)
                .map(|(&x, &y)| {
                    1.0 + 0.5 * (x - 0.5).abs() + 0.5 * (y - 0.5).abs() - 0.5 * (x - y).abs()
                })
                .product();
            pair += if i == j { term } else { 2.0 * term };
        }
    }
    let squared = (13.0f64 / 12.0).powi(d) - 2.0 / n * single + pair / (n * n);
    squared.max(0.0).sqrt()
}

/// Exact one-dimensional star discrepancy,
/// `1/(2N) + max_i |x_(i) − (2i − 1)/(2N)|` over the sorted sample.
pub fn star_discrepancy_1d(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let worst = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - (2.0 * i as f64 + 1.0) / (2.0 * n)).abs())
        .fold(0.0, f64::max);
    1.0 / (2.0 * n) + worst
}
