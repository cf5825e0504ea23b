//! Cross-checks of the F-distribution routines against statrs.

use qswarm::stats::{f_cdf, f_critical, f_quantile, regularized_beta};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};
use statrs::function::beta::beta_reg;

#[test]
fn incomplete_beta_matches_statrs() {
    for &a in &[0.5, 1.0, 2.0, 6.5, 32.0] {
        for &b in &[0.5, 1.5, 4.0, 64.0] {
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let ours = regularized_beta(a, b, x);
                let theirs = beta_reg(a, b, x);
                assert!((ours - theirs).abs() < 1e-12, "a={a} b={b} x={x}: {ours} vs {theirs}");
            }
        }
    }
}

#[test]
fn f_quantiles_match_statrs() {
    for &(d1, d2) in &[(1.0, 10.0), (2.0, 12.0), (3.0, 48.0), (4.0, 64.0), (9.0, 9.0)] {
        let dist = FisherSnedecor::new(d1, d2).unwrap();
        for &p in &[0.9, 0.95, 0.99] {
            let ours = f_quantile(p, d1, d2);
            let theirs = dist.inverse_cdf(p);
            assert!((ours - theirs).abs() < 1e-6, "F({d1},{d2}) p={p}: {ours} vs {theirs}");
            assert!((f_cdf(ours, d1, d2) - p).abs() < 1e-8);
        }
    }
}

#[test]
fn critical_value_examples() {
    // df (4, 64)
    let t = f_critical(5, 17, 0.05).unwrap();
    assert!((t - 2.515).abs() < 0.01, "{t}");
    // F(1, n) is the square of a two-sided t quantile
    let t_q = StudentsT::new(0.0, 1.0, 10.0).unwrap().inverse_cdf(0.975);
    let f = f_critical(2, 11, 0.05).unwrap();
    assert!((f - t_q * t_q).abs() < 1e-6);
    assert!((f - 4.965).abs() < 0.01);
}
