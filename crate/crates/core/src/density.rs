//! Grey KNN local density.

use std::cmp::Ordering;
use std::path::Path;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grey::GreyMatrix;

/// Local density of every object and the descending order of those values.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    rho: Vec<f64>,
    order: Vec<usize>,
    k: usize,
}

/// Descending by value, ascending by index on ties.
fn desc_then_index(a: (f64, usize), b: (f64, usize)) -> Ordering {
    b.0.total_cmp(&a.0).then(a.1.cmp(&b.1))
}

impl DensityProfile {
    /// Builds a profile from precomputed densities, each in `(0, k]`.
    pub fn from_rho(rho: Vec<f64>, k: usize) -> Result<Self> {
        if let Some(bad) = rho
            .iter()
            .find(|&&r| !(r.is_finite() && r > 0.0 && r <= k as f64))
        {
            return Err(Error::InvalidParams(format!(
                "density {bad} outside (0, {k}]"
            )));
        }
        let mut order: Vec<usize> = (0..rho.len()).collect();
        order.sort_by(|&a, &b| desc_then_index((rho[a], a), (rho[b], b)));
        Ok(DensityProfile { rho, order, k })
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Object indices sorted by density, highest first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Densities in descending order.
    pub fn sorted(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.rho[i]).collect()
    }

    /// Writes `index,rho` rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        use std::io::Write;
        let path = path.as_ref();
        let io = |e| Error::io(path, e);
        let file = std::fs::File::create(path).map_err(io)?;
        let mut out = std::io::BufWriter::new(file);
        writeln!(out, "index,rho").map_err(io)?;
        for (i, r) in self.rho.iter().enumerate() {
            writeln!(out, "{i},{r:?}").map_err(io)?;
        }
        out.flush().map_err(io)
    }
}

/// Sum of the `k` largest off-diagonal grey degrees in one row.
fn row_density(row: &[f64], i: usize, k: usize) -> f64 {
    let mut others: Vec<(f64, usize)> = row
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, &g)| (g, j))
        .collect();
    if k < others.len() {
        others.select_nth_unstable_by(k - 1, |&a, &b| desc_then_index(a, b));
        others.truncate(k);
    }
    others.sort_by(|&a, &b| desc_then_index(a, b));
    others.iter().map(|&(g, _)| g).sum()
}

/// Density of each object: the sum of its `k` strongest grey degrees to
/// other objects. Equal degrees are taken in index order.
pub fn grey_knn_density(g: &GreyMatrix, k: usize) -> Result<DensityProfile> {
    let n = g.n();
    if k < 1 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    let per_row = |i: usize| row_density(g.row(i), i, k);
    #[cfg(feature = "parallel")]
    let rho: Vec<f64> = (0..n).into_par_iter().map(per_row).collect();
    #[cfg(not(feature = "parallel"))]
    let rho: Vec<f64> = (0..n).map(per_row).collect();
    DensityProfile::from_rho(rho, k)
}
