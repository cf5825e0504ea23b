use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{BenchError, Bounds};

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    dim: usize,
    data: Vec<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, BenchError> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(BenchError::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    /// `out = self · v`
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (row, o) in self.data.chunks_exact(self.dim).zip(out.iter_mut()) {
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    /// `max |RᵀR − I|` over all entries.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for c in 0..n {
            let pivot = (c..n)
                .max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs()))
                .unwrap_or(c);
            if a[pivot * n + c] == 0.0 {
                return 0.0;
            }
            if pivot != c {
                for k in 0..n {
                    a.swap(c * n + k, pivot * n + k);
                }
                det = -det;
            }
            let p = a[c * n + c];
            det *= p;
            for r in c + 1..n {
                let factor = a[r * n + c] / p;
                for k in c..n {
                    a[r * n + k] -= factor * a[c * n + k];
                }
            }
        }
        det
    }
}

/// Shift-then-rotate map `z = R (x − o)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub shift: Vec<f64>,
    pub rotation: Rotation,
}

impl Transform {
    pub fn identity(dim: usize) -> Self {
        Self {
            shift: vec![0.0; dim],
            rotation: Rotation::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply(&self, x: &[f64], scratch: &mut [f64], out: &mut [f64]) {
        for ((s, xi), oi) in scratch.iter_mut().zip(x).zip(&self.shift) {
            *s = xi - oi;
        }
        self.rotation.apply(scratch, out);
    }
}

/// Seeded shift and rotation for dimension `bounds.dim()`.
///
/// The shift is uniform over the middle 80% of the box; the rotation is a
/// Gram-Schmidt orthogonalization (two passes) of a standard-normal matrix
/// with its determinant normalized to +1.
pub fn make_transform(seed: u64, bounds: &Bounds) -> Transform {
    let dim = bounds.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = (0..dim)
        .map(|d| {
            let u: f64 = rng.sample(Open01);
            let (a, b) = (bounds.lower()[d], bounds.upper()[d]);
            a + (0.1 + 0.8 * u) * (b - a)
        })
        .collect();
    let rotation = random_rotation(&mut rng, dim);
    Transform { shift, rotation }
}

fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> Rotation {
    loop {
        // columns of a Gaussian matrix
        let mut cols: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut degenerate = false;
        for j in 0..dim {
            for _pass in 0..2 {
                for i in 0..j {
                    let dot: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                    let (done, rest) = cols.split_at_mut(j);
                    for (c, q) in rest[0].iter_mut().zip(&done[i]) {
                        *c -= dot * q;
                    }
                }
            }
            let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-10 {
                degenerate = true;
                break;
            }
            cols[j].iter_mut().for_each(|v| *v /= norm);
        }
        if degenerate {
            continue;
        }
        let rows = (0..dim)
            .map(|r| (0..dim).map(|c| cols[c][r]).collect())
            .collect();
        let mut rot = Rotation::from_rows(rows).expect("square by construction");
        if rot.determinant() < 0.0 {
            // negate the first column
            for r in 0..dim {
                rot.data[r * dim] = -rot.data[r * dim];
            }
        }
        return rot;
    }
}

/// Reads a transform file: a `# shift` line followed by one row of D values,
/// then a `# rotation` line followed by D rows of D values.
pub fn load_transform(path: &Path) -> Result<Transform, BenchError> {
    let text = fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_transform(&text)
}

pub fn parse_transform(text: &str) -> Result<Transform, BenchError> {
    enum Section {
        None,
        Shift,
        Rotation,
    }
    let mut section = Section::None;
    let mut shift: Option<Vec<f64>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(tag) = line.strip_prefix('#') {
            section = match tag.trim().to_ascii_lowercase().as_str() {
                "shift" => Section::Shift,
                "rotation" => Section::Rotation,
                _ => section,
            };
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|e| BenchError::TransformFile {
                    line: i + 1,
                    msg: format!("{t:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        match section {
            Section::Shift if shift.is_none() => shift = Some(values),
            Section::Rotation => rows.push(values),
            _ => {
                return Err(BenchError::TransformFile {
                    line: i + 1,
                    msg: "data outside a '# shift' or '# rotation' block".into(),
                })
            }
        }
    }
    let shift = shift.ok_or(BenchError::TransformFile {
        line: 0,
        msg: "missing '# shift' block".into(),
    })?;
    let rotation = if rows.is_empty() {
        Rotation::identity(shift.len())
    } else {
        Rotation::from_rows(rows)?
    };
    if rotation.dim() != shift.len() {
        return Err(BenchError::DimensionMismatch {
            expected: shift.len(),
            found: rotation.dim(),
        });
    }
    Ok(Transform { shift, rotation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let b = Bounds::uniform(7, -100.0, 100.0).unwrap();
        assert_eq!(make_transform(5, &b), make_transform(5, &b));
        assert_ne!(make_transform(5, &b), make_transform(6, &b));
    }

    #[test]
    fn orthogonal_proper_and_centered() {
        for dim in [2usize, 10, 30] {
            let b = Bounds::uniform(dim, -100.0, 100.0).unwrap();
            for seed in 0..100 {
                let t = make_transform(seed, &b);
                assert!(t.rotation.orthogonality_error() < 1e-10);
                assert!((t.rotation.determinant() - 1.0).abs() < 1e-9);
                assert!(t.shift.iter().all(|&o| o > -80.0 && o < 80.0));
            }
        }
    }

    #[test]
    fn determinant_of_swap_is_negative() {
        let r = Rotation::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(r.determinant(), -1.0);
    }

    #[test]
    fn parses_transform_file() {
        let t = parse_transform("# shift\n1 2\n# rotation\n0 1\n-1 0\n").unwrap();
        assert_eq!(t.shift, vec![1.0, 2.0]);
        let mut out = [0.0; 2];
        let mut scratch = [0.0; 2];
        t.apply(&[2.0, 2.0], &mut scratch, &mut out);
        // R (x - o) = [[0,1],[-1,0]] (1, 0) = (0, -1)
        assert_eq!(out, [0.0, -1.0]);
        assert!(parse_transform("# rotation\n1\n").is_err());
        assert!(parse_transform("# shift\n1 2\n# rotation\n1 0 0\n").is_err());
        assert!(parse_transform("1 2\n").is_err());
    }
}
