//! B-style grey relational degree.
//!
//! For two sequences `a` and `b` of length `N` with difference `e = a - b`,
//! the degree is
//!
//! ```text
//! 1 / (1 + d0/N + d1/(N-1) + d2/(N-2))
//! d0 = sum |e_k|
//! d1 = sum |e_{k+1} - e_k|
//! d2 = sum |e_{k+1} - 2 e_k + e_{k-1}|
//! ```
//!
//! A term whose sum is empty (`d1` when `N = 1`, `d2` when `N <= 2`) is
//! dropped. Only the difference vector matters, so the degree is
//! translation invariant and exactly symmetric.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Grey relational degree of two equal-length finite vectors, in `(0, 1]`.
pub fn grey_degree(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidParams("vectors must be non-empty".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    Ok(degree_unchecked(a, b))
}

/// Same as [`grey_degree`] without validation.
pub(crate) fn degree_unchecked(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    // e_{k-1}, e_k
    let mut prev2 = 0.0;
    let mut prev1 = 0.0;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let e = x - y;
        d0 += e.abs();
        if k >= 1 {
            d1 += (e - prev1).abs();
        }
        if k >= 2 {
            d2 += (e - 2.0 * prev1 + prev2).abs();
        }
        prev2 = prev1;
        prev1 = e;
    }
    let mut denom = 1.0 + d0 / n as f64;
    if n > 1 {
        denom += d1 / (n - 1) as f64;
    }
    if n > 2 {
        denom += d2 / (n - 2) as f64;
    }
    1.0 / denom
}

/// Dense symmetric `n x n` matrix of pairwise grey degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct GreyMatrix {
    n: usize,
    values: Vec<f64>,
}

impl GreyMatrix {
    /// Wraps a row-major `n x n` buffer, checking symmetry, the unit
    /// diagonal and the `(0, 1]` range.
    pub fn from_dense(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: values.len(),
            });
        }
        for i in 0..n {
            if values[i * n + i] != 1.0 {
                return Err(Error::InvalidParams(format!("G({i},{i}) != 1")));
            }
            for j in 0..i {
                let v = values[i * n + j];
                if v != values[j * n + i] {
                    return Err(Error::InvalidParams(format!("G not symmetric at ({i},{j})")));
                }
                if !(v > 0.0 && v <= 1.0) {
                    return Err(Error::InvalidParams(format!("G({i},{j}) = {v} outside (0,1]")));
                }
            }
        }
        Ok(GreyMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Writes the matrix as headerless CSV, one matrix row per line.
    pub fn write_csv(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        use std::io::Write;
        let path = path.as_ref();
        let io = |e| Error::io(path, e);
        let file = std::fs::File::create(path).map_err(io)?;
        let mut out = std::io::BufWriter::new(file);
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "{}", line.join(",")).map_err(io)?;
        }
        out.flush().map_err(io)
    }
}

/// Grey degree between every pair of dataset rows.
///
/// Each unordered pair is evaluated once and mirrored, so the result does not
/// depend on scheduling.
pub fn grey_matrix(dataset: &Dataset) -> GreyMatrix {
    let n = dataset.n();
    let upper = |i: usize| -> Vec<f64> {
        let xi = dataset.row(i);
        (i + 1..n)
            .map(|j| degree_unchecked(xi, dataset.row(j)))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(upper).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<f64>> = (0..n).map(upper).collect();

    let mut values = vec![0.0; n * n];
    for (i, row) in rows.into_iter().enumerate() {
        values[i * n + i] = 1.0;
        for (off, v) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    GreyMatrix { n, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn identical_vectors() {
        assert_eq!(grey_degree(&[1.5, -2.0, 7.0, 0.0], &[1.5, -2.0, 7.0, 0.0]).unwrap(), 1.0);
        assert_eq!(grey_degree(&[3.0], &[3.0]).unwrap(), 1.0);
    }

    #[test]
    fn hand_values() {
        assert!((grey_degree(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap() - 0.5).abs() < TOL);
        assert!((grey_degree(&[0.0, 1.0], &[1.0, 0.0]).unwrap() - 0.25).abs() < TOL);
        assert!((grey_degree(&[5.0], &[7.0]).unwrap() - 1.0 / 3.0).abs() < TOL);
    }

    #[test]
    fn second_difference_term() {
        // e = (0, 1, 0): d0 = 1, d1 = 2, d2 = |0 - 2 + 0| = 2
        let g = grey_degree(&[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]).unwrap();
        let expected = 1.0 / (1.0 + 1.0 / 3.0 + 2.0 / 2.0 + 2.0 / 1.0);
        assert!((g - expected).abs() < TOL);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            grey_degree(&[1.0, 2.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            grey_degree(&[f64::NAN], &[1.0]),
            Err(Error::NonFiniteInput)
        ));
    }

    #[test]
    fn one_by_one() {
        let ds = Dataset::from_rows("t", &[vec![4.0, 2.0]], None).unwrap();
        assert_eq!(grey_matrix(&ds).values(), &[1.0]);
    }

    #[test]
    fn three_points_on_a_line() {
        let ds = Dataset::from_rows("t", &[vec![0.0], vec![1.0], vec![3.0]], None).unwrap();
        let g = grey_matrix(&ds);
        assert!((g.get(0, 1) - 0.5).abs() < TOL);
        assert!((g.get(0, 2) - 0.25).abs() < TOL);
        assert!((g.get(1, 2) - 1.0 / 3.0).abs() < TOL);
    }

    #[test]
    fn from_dense_validates() {
        assert!(GreyMatrix::from_dense(2, vec![1.0, 0.5, 0.5, 1.0]).is_ok());
        assert!(GreyMatrix::from_dense(2, vec![1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(GreyMatrix::from_dense(2, vec![0.9, 0.5, 0.5, 1.0]).is_err());
        assert!(GreyMatrix::from_dense(2, vec![1.0, 0.0, 0.0, 1.0]).is_err());
    }

    fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..8).prop_flat_map(|n| {
            (
                prop::collection::vec(-100.0f64..100.0, n),
                prop::collection::vec(-100.0f64..100.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn symmetric_and_in_range((a, b) in vec_pair()) {
            let g = grey_degree(&a, &b).unwrap();
            prop_assert_eq!(g, grey_degree(&b, &a).unwrap());
            prop_assert!(g > 0.0 && g <= 1.0);
        }

        #[test]
        fn translation_invariant((a, b) in vec_pair(), c in -50.0f64..50.0) {
            let g = grey_degree(&a, &b).unwrap();
            let a2: Vec<f64> = a.iter().map(|v| v + c).collect();
            let b2: Vec<f64> = b.iter().map(|v| v + c).collect();
            prop_assert!((g - grey_degree(&a2, &b2).unwrap()).abs() < 1e-9);
        }

        #[test]
        fn stretching_the_difference_lowers_the_degree((a, b) in vec_pair(), lambda in 1.01f64..5.0) {
            prop_assume!(a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-6));
            let stretched: Vec<f64> = a.iter().zip(&b).map(|(x, y)| y + lambda * (x - y)).collect();
            prop_assert!(grey_degree(&stretched, &b).unwrap() < grey_degree(&a, &b).unwrap());
        }

        #[test]
        fn row_permutation_permutes_matrix(
            rows in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 2..12),
            seed in any::<u64>(),
        ) {
            use rand::{seq::SliceRandom, SeedableRng};
            let n = rows.len();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
            let g = grey_matrix(&Dataset::from_rows("a", &rows, None).unwrap());
            let gp = grey_matrix(&Dataset::from_rows("b", &permuted, None).unwrap());
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(gp.get(i, j), g.get(perm[i], perm[j]));
                }
            }
        }
    }
}
