//! External clustering quality measures.
//!
//! All measures take predicted cluster ids and ground-truth class ids of
//! equal length and depend only on the induced partitions.

use std::collections::BTreeMap;

use pathfinding::prelude::{kuhn_munkres, Matrix};

use crate::error::{Error, Result};

/// Co-occurrence counts of predicted clusters (rows) and classes (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    n: u64,
}

impl ContingencyTable {
    pub fn new<P: Ord + Copy, T: Ord + Copy>(pred: &[P], truth: &[T]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::LengthMismatch {
                left: pred.len(),
                right: truth.len(),
            });
        }
        let rows = dense_ids(pred);
        let cols = dense_ids(truth);
        let t = rows.iter().max().map_or(0, |m| m + 1);
        let c = cols.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![vec![0u64; c]; t];
        for (&r, &k) in rows.iter().zip(&cols) {
            counts[r][k] += 1;
        }
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..c).map(|k| counts.iter().map(|r| r[k]).sum()).collect();
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            n: pred.len() as u64,
        })
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Cluster-to-class pairs of a maximum-weight one-to-one matching.
    /// Returns the matched pairs and the number of objects they cover.
    pub fn best_matching(&self) -> (Vec<(usize, usize)>, u64) {
        let t = self.counts.len();
        let c = self.col_sums.len();
        let size = t.max(c);
        if size == 0 {
            return (Vec::new(), 0);
        }
        let weights = Matrix::from_fn(size, size, |(r, k)| {
            if r < t && k < c {
                self.counts[r][k] as i64
            } else {
                0
            }
        });
        let (total, assignment) = kuhn_munkres(&weights);
        let pairs = assignment
            .into_iter()
            .enumerate()
            .filter(|&(r, k)| r < t && k < c)
            .collect();
        (pairs, total as u64)
    }
}

/// Maps arbitrary ids to `0..count` in sorted order.
fn dense_ids<T: Ord + Copy>(ids: &[T]) -> Vec<usize> {
    let mut map = BTreeMap::new();
    for &id in ids {
        map.entry(id).or_insert(0usize);
    }
    for (i, v) in map.values_mut().enumerate() {
        *v = i;
    }
    ids.iter().map(|id| map[id]).collect()
}

/// Fraction of objects covered by the best one-to-one cluster/class matching.
pub fn accuracy<P: Ord + Copy, T: Ord + Copy>(pred: &[P], truth: &[T]) -> Result<f64> {
    let table = ContingencyTable::new(pred, truth)?;
    if table.n == 0 {
        return Ok(1.0);
    }
    let (_, hits) = table.best_matching();
    Ok(hits as f64 / table.n as f64)
}

/// Class-size weighted F1 over the matching used by [`accuracy`]. Classes
/// left unmatched score 0.
pub fn f_score<P: Ord + Copy, T: Ord + Copy>(pred: &[P], truth: &[T]) -> Result<f64> {
    let table = ContingencyTable::new(pred, truth)?;
    if table.n == 0 {
        return Ok(1.0);
    }
    let (pairs, _) = table.best_matching();
    let total: f64 = pairs
        .iter()
        .map(|&(r, k)| {
            let hit = table.counts[r][k] as f64;
            if hit == 0.0 {
                return 0.0;
            }
            let precision = hit / table.row_sums[r] as f64;
            let recall = hit / table.col_sums[k] as f64;
            let f1 = 2.0 * precision * recall / (precision + recall);
            f1 * table.col_sums[k] as f64
        })
        .sum();
    Ok(total / table.n as f64)
}

fn pairs(x: u64) -> i128 {
    let x = x as i128;
    x * (x - 1) / 2
}

/// Adjusted Rand index.
///
/// Numerator and denominator are formed in exact integer arithmetic and
/// divided once. Identical trivial partitions (both one cluster, or both all
/// singletons) score 1.
pub fn ari<P: Ord + Copy, T: Ord + Copy>(pred: &[P], truth: &[T]) -> Result<f64> {
    let table = ContingencyTable::new(pred, truth)?;
    let total = pairs(table.n);
    let index: i128 = table.counts.iter().flatten().map(|&c| pairs(c)).sum();
    let sum_rows: i128 = table.row_sums.iter().map(|&c| pairs(c)).sum();
    let sum_cols: i128 = table.col_sums.iter().map(|&c| pairs(c)).sum();
    // (index - expected) / (max - expected), scaled by 2 * total
    let num = 2 * (index * total - sum_rows * sum_cols);
    let den = (sum_rows + sum_cols) * total - 2 * sum_rows * sum_cols;
    if den == 0 {
        return Ok(1.0);
    }
    Ok(num as f64 / den as f64)
}

/// Normalized mutual information, `I / sqrt(H_pred * H_truth)`, natural log.
///
/// When an entropy vanishes the result is 1 if both partitions are a single
/// cluster and 0 otherwise.
pub fn nmi<P: Ord + Copy, T: Ord + Copy>(pred: &[P], truth: &[T]) -> Result<f64> {
    let table = ContingencyTable::new(pred, truth)?;
    let n = table.n as f64;
    let entropy = |sums: &[u64]| -> f64 {
        sums.iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let h_pred = entropy(&table.row_sums);
    let h_truth = entropy(&table.col_sums);
    if h_pred == 0.0 || h_truth == 0.0 {
        let trivial = table.row_sums.len() <= 1 && table.col_sums.len() <= 1;
        return Ok(if trivial { 1.0 } else { 0.0 });
    }
    let mut mi = 0.0;
    for (r, row) in table.counts.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = c as f64;
            mi += c / n * (c * n / (table.row_sums[r] as f64 * table.col_sums[k] as f64)).ln();
        }
    }
    Ok((mi / (h_pred * h_truth).sqrt()).clamp(0.0, 1.0))
}

/// Number of distinct ids.
pub fn cluster_count<P: Ord + Copy>(pred: &[P]) -> usize {
    let mut ids = pred.to_vec();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

/// All four measures plus the cluster count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub accuracy: f64,
    pub f_score: f64,
    pub ari: f64,
    pub nmi: f64,
    pub clusters: usize,
}

impl MetricReport {
    pub fn compute<P: Ord + Copy, T: Ord + Copy>(pred: &[P], truth: &[T]) -> Result<Self> {
        Ok(MetricReport {
            accuracy: accuracy(pred, truth)?,
            f_score: f_score(pred, truth)?,
            ari: ari(pred, truth)?,
            nmi: nmi(pred, truth)?,
            clusters: cluster_count(pred),
        })
    }

    /// `(name, value)` rows in report order.
    pub fn rows(&self) -> [(&'static str, f64); 5] {
        [
            ("accuracy", self.accuracy),
            ("f_score", self.f_score),
            ("ari", self.ari),
            ("nmi", self.nmi),
            ("clusters", self.clusters as f64),
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.rows().iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_prediction_is_perfect() {
        let truth = [0, 0, 1, 1, 2, 2];
        let pred = [5, 5, 3, 3, 9, 9];
        let r = MetricReport::compute(&pred, &truth).unwrap();
        assert_eq!((r.accuracy, r.f_score, r.ari, r.nmi, r.clusters), (1.0, 1.0, 1.0, 1.0, 3));
    }

    #[test]
    fn single_cluster_against_two_classes() {
        let truth: Vec<usize> = (0..20).map(|i| i / 10).collect();
        let pred = vec![0; 20];
        assert_eq!(accuracy(&pred, &truth).unwrap(), 0.5);
    }

    #[test]
    fn small_hand_cases() {
        let pred = [0, 0, 1, 1, 2];
        let truth = [0, 0, 1, 1, 1];
        assert!((accuracy(&pred, &truth).unwrap() - 0.8).abs() < 1e-12);
        assert!((f_score(&pred, &truth).unwrap() - 0.88).abs() < 1e-12);
        assert_eq!(ari(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), -0.5);
    }

    #[test]
    fn singletons_against_one_class() {
        let n = 9;
        let pred: Vec<usize> = (0..n).collect();
        let truth = vec![0; n];
        let f = f_score(&pred, &truth).unwrap();
        assert!((f - 2.0 / (n as f64 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn nmi_cases() {
        assert_eq!(nmi(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(), 1.0);
        // product table: every cluster holds each class equally
        assert_eq!(nmi(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert_eq!(nmi(&[0, 0, 0], &[1, 1, 1]).unwrap(), 1.0);
        assert_eq!(nmi(&[0, 0, 0, 0], &[0, 0, 1, 1]).unwrap(), 0.0);

        // pred [0,0,1,1] vs truth [0,0,0,1]: table [[2,0],[1,1]]
        let ln = f64::ln;
        let h_pred = ln(2.0);
        let h_truth = -(0.75 * ln(0.75) + 0.25 * ln(0.25));
        let mi = 0.5 * ln(0.5 / (0.5 * 0.75)) + 0.25 * ln(0.25 / (0.5 * 0.75)) + 0.25 * ln(0.25 / (0.5 * 0.25));
        let expected = mi / (h_pred * h_truth).sqrt();
        assert!((nmi(&[0, 0, 1, 1], &[0, 0, 0, 1]).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn trivial_ari() {
        assert_eq!(ari(&[0, 0, 0], &[4, 4, 4]).unwrap(), 1.0);
        assert_eq!(ari(&[0, 1, 2], &[2, 1, 0]).unwrap(), 1.0);
    }

    #[test]
    fn lengths_must_match() {
        assert!(matches!(accuracy(&[0, 1], &[0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(nmi(&[0], &[0, 1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn counting() {
        assert_eq!(cluster_count(&[0, 0, 0]), 1);
        assert_eq!(cluster_count(&[0, 1, 2, 1]), 3);
    }

    #[test]
    fn contingency_marginals() {
        let t = ContingencyTable::new(&[1, 1, 7, 7, 7], &['a', 'b', 'b', 'b', 'c']).unwrap();
        assert_eq!(t.counts(), &[vec![1, 1, 0], vec![0, 2, 1]]);
        assert_eq!(t.row_sums(), &[2, 3]);
        assert_eq!(t.col_sums(), &[1, 3, 1]);
        assert_eq!(t.n(), 5);
    }
}
