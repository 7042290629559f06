//! DBSCAN with an automatically chosen radius.

use std::collections::VecDeque;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::clustering::{Clustering, UNASSIGNED};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::grey::{degree_unchecked, GreyMatrix};

/// Distance used for neighbor queries and remainder assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    /// `1 - grey degree`.
    GreyDissimilarity,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "grey" => Ok(Metric::GreyDissimilarity),
            other => Err(Error::InvalidParams(format!("unknown metric {other:?}"))),
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Pairwise distances between the rows of a dataset.
///
/// With [`Metric::GreyDissimilarity`] a precomputed [`GreyMatrix`] is used
/// when supplied.
#[derive(Clone, Copy)]
pub struct Distances<'a> {
    data: &'a Dataset,
    metric: Metric,
    grey: Option<&'a GreyMatrix>,
}

impl<'a> Distances<'a> {
    pub fn new(data: &'a Dataset, metric: Metric) -> Self {
        Distances {
            data,
            metric,
            grey: None,
        }
    }

    pub fn with_grey(data: &'a Dataset, metric: Metric, grey: &'a GreyMatrix) -> Self {
        Distances {
            data,
            metric,
            grey: Some(grey),
        }
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.data.n()
    }

    pub fn is_empty(&self) -> bool {
        self.data.n() == 0
    }

    pub fn between(&self, i: usize, j: usize) -> f64 {
        match (self.metric, self.grey) {
            (Metric::Euclidean, _) => euclidean(self.data.row(i), self.data.row(j)),
            (Metric::GreyDissimilarity, Some(g)) => 1.0 - g.get(i, j),
            (Metric::GreyDissimilarity, None) => {
                1.0 - degree_unchecked(self.data.row(i), self.data.row(j))
            }
        }
    }
}

/// DBSCAN radius and neighbor threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanParams {
    /// Minimum number of other points within `eps` for a core point.
    pub min_pts: usize,
    pub eps: f64,
    pub metric: Metric,
}

fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Largest distance from a member of `subset` to its `m`-th nearest other
/// member.
pub fn auto_eps(dist: &Distances<'_>, subset: &[usize], m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be >= 1".into()));
    }
    if subset.len() < m + 1 {
        return Err(Error::SubsetTooSmall {
            size: subset.len(),
            m,
        });
    }
    let kth = map_indices(subset.len(), |a| {
        let mut d: Vec<f64> = subset
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(_, &j)| dist.between(subset[a], j))
            .collect();
        let (_, kth, _) = d.select_nth_unstable_by(m - 1, f64::total_cmp);
        *kth
    });
    Ok(kth.into_iter().fold(0.0, f64::max))
}

/// Neighbors of each subset member within `eps`, as positions in `subset`.
pub fn neighbor_lists(dist: &Distances<'_>, subset: &[usize], eps: f64) -> Vec<Vec<usize>> {
    map_indices(subset.len(), |a| {
        subset
            .iter()
            .enumerate()
            .filter(|&(b, &j)| b != a && dist.between(subset[a], j) <= eps)
            .map(|(b, _)| b)
            .collect()
    })
}

/// Classic DBSCAN over `subset`. The result is indexed by position in
/// `subset`; noise is left at [`UNASSIGNED`].
///
/// A point is core when at least `min_pts` other points lie within `eps`.
/// Clusters are numbered in order of their lowest-index core point, and a
/// border point joins the first cluster that reaches it.
pub fn run_dbscan(dist: &Distances<'_>, subset: &[usize], params: &DbscanParams) -> Result<Clustering> {
    if params.eps == 0.0 {
        return Err(Error::SubsetDegenerate);
    }
    if !(params.eps.is_finite() && params.eps > 0.0) || params.min_pts == 0 {
        return Err(Error::InvalidParams(format!(
            "eps must be > 0 and min_pts >= 1, got eps = {}, min_pts = {}",
            params.eps, params.min_pts
        )));
    }
    if params.metric != dist.metric() {
        return Err(Error::InvalidParams("params metric differs from distance metric".into()));
    }
    let neighbors = neighbor_lists(dist, subset, params.eps);
    let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= params.min_pts).collect();

    let mut labels = vec![UNASSIGNED; subset.len()];
    let mut next_id = 0;
    let mut queue = VecDeque::new();
    for start in 0..subset.len() {
        if labels[start] != UNASSIGNED || !is_core[start] {
            continue;
        }
        labels[start] = next_id;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            if !is_core[p] {
                continue;
            }
            for &q in &neighbors[p] {
                if labels[q] == UNASSIGNED {
                    labels[q] = next_id;
                    queue.push_back(q);
                }
            }
        }
        next_id += 1;
    }
    Clustering::from_assignments(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Dataset {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        Dataset::from_rows("line", &rows, None).unwrap()
    }

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn eps_on_a_line() {
        let ds = line(&[0.0, 1.0, 2.0]);
        let d = Distances::new(&ds, Metric::Euclidean);
        assert_eq!(auto_eps(&d, &all(3), 1).unwrap(), 1.0);
        let ds = line(&[0.0, 1.0, 10.0]);
        let d = Distances::new(&ds, Metric::Euclidean);
        assert_eq!(auto_eps(&d, &all(3), 1).unwrap(), 9.0);
        assert_eq!(auto_eps(&d, &all(3), 2).unwrap(), 10.0);
    }

    #[test]
    fn eps_errors() {
        let ds = line(&[0.0, 1.0, 2.0]);
        let d = Distances::new(&ds, Metric::Euclidean);
        assert!(matches!(auto_eps(&d, &all(3), 3), Err(Error::SubsetTooSmall { .. })));
        assert!(auto_eps(&d, &all(3), 0).is_err());
    }

    #[test]
    fn duplicates_are_degenerate() {
        let ds = line(&[4.0; 5]);
        let d = Distances::new(&ds, Metric::Euclidean);
        let eps = auto_eps(&d, &all(5), 2).unwrap();
        assert_eq!(eps, 0.0);
        let params = DbscanParams {
            min_pts: 2,
            eps,
            metric: Metric::Euclidean,
        };
        assert!(matches!(run_dbscan(&d, &all(5), &params), Err(Error::SubsetDegenerate)));
    }

    #[test]
    fn subset_positions_are_used() {
        let ds = line(&[0.0, 50.0, 1.0, 51.0, 2.0, 52.0]);
        let d = Distances::new(&ds, Metric::Euclidean);
        let subset = [0, 2, 4, 1, 3, 5];
        let params = DbscanParams {
            min_pts: 1,
            eps: 1.5,
            metric: Metric::Euclidean,
        };
        let c = run_dbscan(&d, &subset, &params).unwrap();
        assert_eq!(c.assignments(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn noise_and_border() {
        // 4.5 is a border point of 3.0; 20 is noise
        let ds = line(&[0.0, 1.0, 2.0, 3.0, 4.5, 20.0]);
        let d = Distances::new(&ds, Metric::Euclidean);
        let params = DbscanParams {
            min_pts: 2,
            eps: 1.5,
            metric: Metric::Euclidean,
        };
        let c = run_dbscan(&d, &all(6), &params).unwrap();
        assert_eq!(c.assignments(), &[0, 0, 0, 0, 0, UNASSIGNED]);
    }

    #[test]
    fn grey_metric_uses_matrix_when_given() {
        let ds = Dataset::from_rows("g", &[vec![0.0, 0.0], vec![0.1, 0.0], vec![9.0, 9.0]], None)
            .unwrap();
        let g = crate::grey::grey_matrix(&ds);
        let a = Distances::new(&ds, Metric::GreyDissimilarity);
        let b = Distances::with_grey(&ds, Metric::GreyDissimilarity, &g);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.between(i, j), b.between(i, j));
            }
        }
    }

    #[test]
    fn metric_names() {
        assert_eq!("grey".parse::<Metric>().unwrap(), Metric::GreyDissimilarity);
        assert_eq!("euclidean".parse::<Metric>().unwrap(), Metric::Euclidean);
        assert!("manhattan".parse::<Metric>().is_err());
    }
}
