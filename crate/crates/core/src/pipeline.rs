//! End-to-end self-adaptive grey DBSCAN.
//!
//! Stages, in order: grey matrix, grey KNN density, dense-subset split
//! search, automatic DBSCAN radius on the dense subset, DBSCAN, and
//! nearest-cluster assignment of everything outside the dense subset.

use std::time::Duration;

use crate::clustering::{Clustering, Origin, UNASSIGNED};
use crate::dataset::Dataset;
use crate::dbscan::{auto_eps, run_dbscan, DbscanParams, Distances, Metric};
use crate::dense_subset::{find_dense_subset, RegressionMode, SplitSearchResult};
use crate::density::{grey_knn_density, DensityProfile};
use crate::error::{Error, Result};
use crate::grey::{grey_matrix, GreyMatrix};

/// Smallest dataset the pipeline accepts.
pub const MIN_OBJECTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamSource {
    Schedule,
    UserOverride,
}

/// Neighbor count `k` for density and `m` for DBSCAN.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutoParams {
    pub k: usize,
    pub m: usize,
    pub source: ParamSource,
}

/// Size-based default `k` and `m`.
///
/// | n            | m  | k            |
/// |--------------|----|--------------|
/// | < 500        | 3  | ceil(2% n)   |
/// | 500..1000    | 4  | ceil(2% n)   |
/// | 1000..2000   | 5  | ceil(1% n)   |
/// | 2000..5000   | 5  | 20           |
/// | >= 5000      | 10 | 20           |
pub fn compute_auto_params(n: usize) -> Result<AutoParams> {
    if n < MIN_OBJECTS {
        return Err(Error::TooFewObjects {
            required: MIN_OBJECTS,
            actual: n,
        });
    }
    let m = match n {
        _ if n < 500 => 3,
        _ if n < 1000 => 4,
        _ if n < 5000 => 5,
        _ => 10,
    };
    let k = match n {
        _ if n < 1000 => (2 * n).div_ceil(100),
        _ if n < 2000 => n.div_ceil(100),
        _ => 20,
    };
    Ok(AutoParams {
        k,
        m,
        source: ParamSource::Schedule,
    })
}

/// Gives every unlabeled object a cluster, one at a time.
///
/// Each step takes the closest (labeled, unlabeled) pair overall, copies the
/// label across and treats the newly labeled object as a labeled anchor from
/// then on. Distance ties go to the smaller labeled index, then the smaller
/// unlabeled index.
pub fn assign_remainder(dist: &Distances<'_>, partial: &Clustering) -> Result<Clustering> {
    let n = partial.len();
    if dist.len() != n {
        return Err(Error::LengthMismatch {
            left: dist.len(),
            right: n,
        });
    }
    let labels = partial.assignments();
    if labels.iter().all(|&c| c == UNASSIGNED) {
        return Err(Error::NoLabeledSeed);
    }
    let mut result = partial.clone();
    let anchors: Vec<usize> = (0..n).filter(|&i| labels[i] != UNASSIGNED).collect();
    let mut pending: Vec<usize> = (0..n).filter(|&i| labels[i] == UNASSIGNED).collect();

    // best (distance, anchor) for each pending object
    let mut best: Vec<(f64, usize)> = pending
        .iter()
        .map(|&u| {
            anchors
                .iter()
                .map(|&a| (dist.between(a, u), a))
                .fold((f64::INFINITY, usize::MAX), closer)
        })
        .collect();

    while !pending.is_empty() {
        let pos = (0..pending.len())
            .min_by(|&x, &y| {
                let (dx, ax) = best[x];
                let (dy, ay) = best[y];
                dx.total_cmp(&dy)
                    .then(ax.cmp(&ay))
                    .then(pending[x].cmp(&pending[y]))
            })
            .expect("pending is non-empty");
        let u = pending.swap_remove(pos);
        let (_, anchor) = best.swap_remove(pos);
        let cluster = result.assignments()[anchor];
        result.set(u, cluster, Origin::AssignedRemainder);
        for (slot, &w) in best.iter_mut().zip(&pending) {
            *slot = closer(*slot, (dist.between(u, w), u));
        }
    }
    Ok(result)
}

fn closer(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Optional overrides for a pipeline run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PipelineOptions {
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub metric: Metric,
    /// Min-max scale every feature before anything else.
    pub normalize: bool,
    pub regression: RegressionMode,
}

/// Wall time spent in each stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub grey: Duration,
    pub density: Duration,
    pub dense_subset: Duration,
    pub dbscan: Duration,
    pub assignment: Duration,
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub clustering: Clustering,
    pub params: AutoParams,
    pub dbscan: DbscanParams,
    pub dense_size: usize,
    pub cluster_count: usize,
    pub timings: StageTimings,
    pub grey: GreyMatrix,
    pub density: DensityProfile,
    pub split: SplitSearchResult,
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed())
}

// no monotonic clock on wasm32-unknown-unknown
#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    (f(), Duration::ZERO)
}

fn resolve_params(n: usize, options: &PipelineOptions) -> Result<AutoParams> {
    let auto = compute_auto_params(n)?;
    if options.k.is_none() && options.m.is_none() {
        return Ok(auto);
    }
    let params = AutoParams {
        k: options.k.unwrap_or(auto.k),
        m: options.m.unwrap_or(auto.m),
        source: ParamSource::UserOverride,
    };
    if params.k < 1 || params.k >= n {
        return Err(Error::KOutOfRange { k: params.k, n });
    }
    if params.m < 1 {
        return Err(Error::InvalidParams("m must be >= 1".into()));
    }
    Ok(params)
}

/// Runs every stage on `dataset`.
pub fn run_sag_dbscan(dataset: &Dataset, options: &PipelineOptions) -> Result<PipelineReport> {
    let n = dataset.n();
    let params = resolve_params(n, options)?;
    let normalized;
    let data = if options.normalize {
        normalized = dataset.min_max_normalized();
        &normalized
    } else {
        dataset
    };

    let (grey, t_grey) = timed(|| grey_matrix(data));
    let (density, t_density) = timed(|| grey_knn_density(&grey, params.k));
    let density = density?;
    let (split, t_split) = timed(|| find_dense_subset(&density, options.regression));
    let split = split?;
    let members = split.members();
    if members.len() < params.m + 1 {
        return Err(Error::DegenerateDenseSubset {
            size: members.len(),
            needed: params.m + 1,
        });
    }

    let dist = Distances::with_grey(data, options.metric, &grey);
    let (core, t_dbscan) = timed(|| -> Result<_> {
        let eps = auto_eps(&dist, &members, params.m)?;
        let dbscan = DbscanParams {
            min_pts: params.m,
            eps,
            metric: options.metric,
        };
        Ok((run_dbscan(&dist, &members, &dbscan)?, dbscan))
    });
    let (core, dbscan) = core?;

    let mut partial = Clustering::new(vec![UNASSIGNED; n], vec![Origin::AssignedRemainder; n])?;
    for (&obj, &cluster) in members.iter().zip(core.assignments()) {
        partial.set(obj, cluster, Origin::DenseCore);
    }
    let (clustering, t_assign) = timed(|| assign_remainder(&dist, &partial));
    let clustering = clustering?;
    let cluster_count = clustering.cluster_count();

    Ok(PipelineReport {
        clustering,
        params,
        dbscan,
        dense_size: members.len(),
        cluster_count,
        timings: StageTimings {
            grey: t_grey,
            density: t_density,
            dense_subset: t_split,
            dbscan: t_dbscan,
            assignment: t_assign,
        },
        grey,
        density,
        split,
    })
}
