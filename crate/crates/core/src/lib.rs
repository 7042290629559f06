//! Self-adaptive grey DBSCAN.
//!
//! Objects are compared with the B-style grey relational degree, each
//! object's density is the sum of its `k` strongest degrees, and a
//! two-segment regression over the sorted, smoothed density curve picks the
//! dense subset automatically. DBSCAN then runs on that subset with its
//! radius set from the `m`-th neighbor distances, and the remaining objects
//! join their nearest cluster.
//!
//! ```
//! use sag_dbscan::{generate_blobs, run_sag_dbscan, PipelineOptions};
//!
//! let data = generate_blobs(&[vec![0.0, 0.0], vec![40.0, 40.0]], 30, 1.0, 7).unwrap();
//! let report = run_sag_dbscan(&data, &PipelineOptions::default()).unwrap();
//! assert_eq!(report.cluster_count, 2);
//! ```

pub mod clustering;
pub mod dataset;
pub mod dbscan;
pub mod dense_subset;
pub mod density;
pub mod error;
pub mod generate;
pub mod grey;
pub mod metrics;
pub mod pipeline;
pub mod plot;

pub use clustering::{read_result, write_result, Clustering, Origin, UNASSIGNED};
pub use dataset::{load_csv, read_csv, write_csv, Dataset};
pub use dbscan::{auto_eps, run_dbscan, DbscanParams, Distances, Metric};
pub use dense_subset::{
    find_dense_subset, smooth, split_residual, RegressionMode, SmoothedCurve, SplitSearchResult,
};
pub use density::{grey_knn_density, DensityProfile};
pub use error::{Error, Result};
pub use generate::{generate_blobs, generate_shape_t, ring_centers};
pub use grey::{grey_degree, grey_matrix, GreyMatrix};
pub use metrics::{accuracy, ari, cluster_count, f_score, nmi, ContingencyTable, MetricReport};
pub use pipeline::{
    assign_remainder, compute_auto_params, run_sag_dbscan, AutoParams, ParamSource,
    PipelineOptions, PipelineReport, StageTimings,
};
pub use plot::{plot_scatter, render_svg};
