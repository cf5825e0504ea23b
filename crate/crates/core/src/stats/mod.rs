//! Friedman rank test (Iman–Davenport form) and Nemenyi post-hoc analysis.

mod special;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use special::{f_cdf, f_quantile, ln_gamma, regularized_beta};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least 2 functions, got {0}")]
    TooFewRows(usize),
    #[error("need at least 2 algorithms, got {0}")]
    TooFewColumns(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {col}: value {value} is not finite")]
    NonFinite { row: usize, col: usize, value: f64 },
    #[error("row {row}: ranks sum to {sum}, expected {expected}")]
    RankSum { row: usize, sum: f64, expected: f64 },
    #[error("significance level {0} must lie in (0, 1)")]
    InvalidAlpha(f64),
    #[error("Nemenyi constants are only tabulated for alpha = 0.05, got {0}")]
    UnsupportedAlpha(f64),
    #[error("Nemenyi constants are tabulated for 2 to 10 algorithms, got {0}")]
    OutsideTable(usize),
}

/// A table entry: a measured value, or a failure to reach the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Value(f64),
    Fail,
}

impl Metric {
    pub fn value(self) -> Option<f64> {
        match self {
            Metric::Value(v) => Some(v),
            Metric::Fail => None,
        }
    }

    pub fn is_fail(self) -> bool {
        matches!(self, Metric::Fail)
    }
}

impl From<Option<f64>> for Metric {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Metric::Fail, Metric::Value)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Value(v) => write!(f, "{v}"),
            Metric::Fail => f.write_str("-"),
        }
    }
}

/// Numbers serialize as themselves (whole numbers without a fraction),
/// failures as the string `"FAIL"`.
impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Metric::Value(v) if v.fract() == 0.0 && v.abs() < 9.0e15 => s.serialize_i64(*v as i64),
            Metric::Value(v) => s.serialize_f64(*v),
            Metric::Fail => s.serialize_str("FAIL"),
        }
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Metric::Value(v)),
            Repr::Text(t) if t == "FAIL" || t == "-" => Ok(Metric::Fail),
            Repr::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"FAIL\", found {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LowerIsBetter,
    HigherIsBetter,
}

/// Per-row ranks of an M×k table (functions × algorithms); rank 1 is best.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTable {
    pub ranks: Vec<Vec<f64>>,
    pub avg_ranks: Vec<f64>,
}

impl RankTable {
    /// Wraps ranks that were computed elsewhere, checking shape and row sums.
    pub fn from_ranks(ranks: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        let k = check_shape(&ranks)?;
        let expected = (k * (k + 1)) as f64 / 2.0;
        for (row, r) in ranks.iter().enumerate() {
            let sum: f64 = r.iter().sum();
            if (sum - expected).abs() > 1e-9 {
                return Err(StatsError::RankSum { row, sum, expected });
            }
        }
        let m = ranks.len() as f64;
        let avg_ranks = (0..k)
            .map(|j| ranks.iter().map(|r| r[j]).sum::<f64>() / m)
            .collect();
        Ok(Self { ranks, avg_ranks })
    }

    pub fn functions(&self) -> usize {
        self.ranks.len()
    }

    pub fn algorithms(&self) -> usize {
        self.avg_ranks.len()
    }
}

fn check_shape<T>(rows: &[Vec<T>]) -> Result<usize, StatsError> {
    if rows.len() < 2 {
        return Err(StatsError::TooFewRows(rows.len()));
    }
    let k = rows[0].len();
    if k < 2 {
        return Err(StatsError::TooFewColumns(k));
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != k {
            return Err(StatsError::Ragged {
                row,
                expected: k,
                found: r.len(),
            });
        }
    }
    Ok(k)
}

/// Ranks one row; ties share the mean of the ranks they span, and failures
/// tie for the worst ranks.
pub fn rank_row(row: &[Metric], direction: Direction) -> Vec<f64> {
    let mut ok: Vec<(usize, f64)> = row
        .iter()
        .enumerate()
        .filter_map(|(j, m)| m.value().map(|v| (j, v)))
        .collect();
    ok.sort_by(|a, b| {
        let ord = a.1.total_cmp(&b.1);
        match direction {
            Direction::LowerIsBetter => ord,
            Direction::HigherIsBetter => ord.reverse(),
        }
    });
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < ok.len() {
        let mut end = start + 1;
        while end < ok.len() && ok[end].1 == ok[start].1 {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let r = (start + 1 + end) as f64 / 2.0;
        for &(j, _) in &ok[start..end] {
            ranks[j] = r;
        }
        start = end;
    }
    let fails = row.len() - ok.len();
    if fails > 0 {
        let r = (ok.len() + 1 + row.len()) as f64 / 2.0;
        for (j, m) in row.iter().enumerate() {
            if m.is_fail() {
                ranks[j] = r;
            }
        }
    }
    ranks
}

pub fn rank_rows(values: &[Vec<Metric>], direction: Direction) -> Result<RankTable, StatsError> {
    check_shape(values)?;
    for (row, r) in values.iter().enumerate() {
        for (col, m) in r.iter().enumerate() {
            if let Metric::Value(v) = m {
                if !v.is_finite() {
                    return Err(StatsError::NonFinite { row, col, value: *v });
                }
            }
        }
    }
    RankTable::from_ranks(values.iter().map(|r| rank_row(r, direction)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Friedman {
    pub chi2: f64,
    /// +∞ when `degenerate`.
    pub tau_f: f64,
    /// `M(k−1) = χ²`: every function ranks the algorithms identically.
    pub degenerate: bool,
}

/// χ²_F = 12M/(k(k+1)) · (Σ R_j² − k(k+1)²/4) and
/// τ_F = (M−1)χ²_F / (M(k−1) − χ²_F).
pub fn friedman_tau(rt: &RankTable) -> Friedman {
    let m = rt.functions() as f64;
    let k = rt.algorithms() as f64;
    let sum_sq: f64 = rt.avg_ranks.iter().map(|r| r * r).sum();
    let chi2 = 12.0 * m / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
    let denom = m * (k - 1.0) - chi2;
    if denom.abs() <= 1e-9 * m * k {
        Friedman {
            chi2,
            tau_f: f64::INFINITY,
            degenerate: true,
        }
    } else {
        Friedman {
            chi2,
            tau_f: (m - 1.0) * chi2 / denom,
            degenerate: false,
        }
    }
}

/// Upper-α critical value of τ_F: the F quantile with k−1 and (k−1)(M−1)
/// degrees of freedom.
pub fn f_critical(k: usize, m: usize, alpha: f64) -> Result<f64, StatsError> {
    if k < 2 {
        return Err(StatsError::TooFewColumns(k));
    }
    if m < 2 {
        return Err(StatsError::TooFewRows(m));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::InvalidAlpha(alpha));
    }
    let d1 = (k - 1) as f64;
    let d2 = ((k - 1) * (m - 1)) as f64;
    Ok(f_quantile(1.0 - alpha, d1, d2))
}

/// Studentized range based constants q_{0.05}/√2 for k = 2..=10.
const Q_05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];

/// Nemenyi critical difference q_α √(k(k+1)/(6M)). Only α = 0.05 is tabulated.
pub fn nemenyi_cd(k: usize, m: usize, alpha: f64) -> Result<f64, StatsError> {
    if (alpha - 0.05).abs() > 1e-12 {
        return Err(StatsError::UnsupportedAlpha(alpha));
    }
    if !(2..=10).contains(&k) {
        return Err(StatsError::OutsideTable(k));
    }
    if m < 2 {
        return Err(StatsError::TooFewRows(m));
    }
    let q = Q_05[k - 2];
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * m as f64)).sqrt())
}

/// `out[i][j]` is true when algorithms i and j differ by at least `cd` in
/// average rank.
pub fn pairwise_significance(avg_ranks: &[f64], cd: f64) -> Vec<Vec<bool>> {
    avg_ranks
        .iter()
        .enumerate()
        .map(|(i, ri)| {
            avg_ranks
                .iter()
                .enumerate()
                .map(|(j, rj)| i != j && (ri - rj).abs() >= cd)
                .collect()
        })
        .collect()
}

/// Everything a comparison produces for one metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub table: RankTable,
    pub friedman: Friedman,
    pub tau_c: f64,
    pub reject_null: bool,
    /// `None` when k lies outside the Nemenyi table.
    pub cd: Option<f64>,
    pub pairwise: Option<Vec<Vec<bool>>>,
}

pub fn analyze(values: &[Vec<Metric>], direction: Direction, alpha: f64) -> Result<Analysis, StatsError> {
    let table = rank_rows(values, direction)?;
    analyze_ranks(table, alpha)
}

pub fn analyze_ranks(table: RankTable, alpha: f64) -> Result<Analysis, StatsError> {
    let (k, m) = (table.algorithms(), table.functions());
    let friedman = friedman_tau(&table);
    let tau_c = f_critical(k, m, alpha)?;
    let reject_null = friedman.degenerate || friedman.tau_f > tau_c;
    let cd = match nemenyi_cd(k, m, alpha) {
        Ok(cd) => Some(cd),
        Err(StatsError::OutsideTable(_)) | Err(StatsError::UnsupportedAlpha(_)) => None,
        Err(e) => return Err(e),
    };
    let pairwise = cd.map(|cd| pairwise_significance(&table.avg_ranks, cd));
    Ok(Analysis {
        table,
        friedman,
        tau_c,
        reject_null,
        cd,
        pairwise,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vals(r: &[f64]) -> Vec<Metric> {
        r.iter().map(|&v| Metric::Value(v)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_row(&vals(&[10.0, 20.0, 30.0]), Direction::LowerIsBetter), vec![1.0, 2.0, 3.0]);
        assert_eq!(rank_row(&vals(&[5.0, 5.0, 9.0]), Direction::LowerIsBetter), vec![1.5, 1.5, 3.0]);
        let row = [Metric::Fail, Metric::Fail, Metric::Fail, Metric::Fail, Metric::Value(7.0)];
        assert_eq!(rank_row(&row, Direction::LowerIsBetter), vec![3.5, 3.5, 3.5, 3.5, 1.0]);
        assert_eq!(rank_row(&[Metric::Fail; 5], Direction::LowerIsBetter), vec![3.0; 5]);
        assert_eq!(rank_row(&vals(&[60.0, 58.0, 60.0]), Direction::HigherIsBetter), vec![1.5, 3.0, 1.5]);
    }

    #[test]
    fn friedman_null_and_degenerate() {
        let t = RankTable::from_ranks(vec![vec![2.0; 3]; 4]).unwrap();
        let f = friedman_tau(&t);
        assert_eq!(f.chi2, 0.0);
        assert_eq!(f.tau_f, 0.0);
        let t = RankTable::from_ranks(vec![vec![1.0, 2.0, 3.0]; 3]).unwrap();
        let f = friedman_tau(&t);
        assert!((f.chi2 - 6.0).abs() < 1e-12);
        assert!(f.degenerate && f.tau_f.is_infinite());
    }

    #[test]
    fn from_ranks_checks_sums() {
        assert!(matches!(
            RankTable::from_ranks(vec![vec![1.0, 1.0], vec![1.0, 2.0]]),
            Err(StatsError::RankSum { row: 0, .. })
        ));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(rank_rows(&[vals(&[1.0, 2.0])], Direction::LowerIsBetter), Err(StatsError::TooFewRows(1)));
        assert_eq!(
            rank_rows(&[vals(&[1.0]), vals(&[1.0])], Direction::LowerIsBetter),
            Err(StatsError::TooFewColumns(1))
        );
        assert!(matches!(
            rank_rows(&[vals(&[1.0, f64::NAN]), vals(&[1.0, 2.0])], Direction::LowerIsBetter),
            Err(StatsError::NonFinite { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn nemenyi_values() {
        assert!((nemenyi_cd(5, 17, 0.05).unwrap() - 1.4795).abs() < 1e-3);
        assert!((nemenyi_cd(4, 17, 0.05).unwrap() - 1.137).abs() < 1e-3);
        assert!(nemenyi_cd(5, 1_000_000, 0.05).unwrap() < 0.01);
        assert_eq!(nemenyi_cd(11, 17, 0.05), Err(StatsError::OutsideTable(11)));
        assert_eq!(nemenyi_cd(5, 17, 0.1), Err(StatsError::UnsupportedAlpha(0.1)));
    }

    #[test]
    fn critical_value_limits() {
        assert!(f_critical(5, 17, 0.999_999).unwrap() < 1e-3);
        assert!(f_critical(5, 17, 0.0).is_err());
    }

    #[test]
    fn pairwise_examples() {
        let p = pairwise_significance(&[2.0, 3.5], 1.0);
        assert_eq!(p, vec![vec![false, true], vec![true, false]]);
        let p = pairwise_significance(&[2.0; 3], 0.5);
        assert!(p.iter().flatten().all(|&b| !b));
        let p = pairwise_significance(&[1.647, 3.412], 1.137);
        assert!(p[0][1]);
    }

    #[test]
    fn metric_json() {
        let m = vec![Metric::Value(1.5), Metric::Fail, Metric::Value(12.0)];
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[1.5,"FAIL",12]"#);
        let back: Vec<Metric> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    fn metric() -> impl Strategy<Value = Metric> {
        prop_oneof![
            1 => Just(Metric::Fail),
            4 => (0u8..6).prop_map(|v| Metric::Value(v as f64)),
        ]
    }

    proptest! {
        #[test]
        fn row_sums_and_relabeling(row in prop::collection::vec(metric(), 2..9)) {
            let k = row.len();
            let r = rank_row(&row, Direction::LowerIsBetter);
            let sum: f64 = r.iter().sum();
            prop_assert!((sum - (k * (k + 1)) as f64 / 2.0).abs() < 1e-12);
            let mapped: Vec<Metric> = row
                .iter()
                .map(|m| match m {
                    Metric::Value(v) => Metric::Value((v * 0.7).exp() + 3.0),
                    Metric::Fail => Metric::Fail,
                })
                .collect();
            prop_assert_eq!(rank_row(&mapped, Direction::LowerIsBetter), r.clone());
            for (j, m) in row.iter().enumerate() {
                if m.is_fail() {
                    prop_assert!(row.iter().enumerate().all(|(i, o)| o.is_fail() || r[i] < r[j]));
                }
            }
        }

        #[test]
        fn tau_nonnegative(rows in prop::collection::vec(prop::collection::vec(0u8..5, 4), 2..12)) {
            let values: Vec<Vec<Metric>> = rows
                .iter()
                .map(|r| r.iter().map(|&v| Metric::Value(v as f64)).collect())
                .collect();
            let f = friedman_tau(&rank_rows(&values, Direction::LowerIsBetter).unwrap());
            prop_assert!(f.chi2 >= -1e-9);
            prop_assert!(f.degenerate || f.tau_f >= -1e-9);
        }
    }
}
