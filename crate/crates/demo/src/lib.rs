//! Browser bindings for the clustering pipeline.
//!
//! The exported functions are thin wrappers over plain Rust functions so the
//! logic can be tested natively.

use sag_dbscan::{
    generate_blobs, generate_shape_t, grey_degree, ring_centers, run_sag_dbscan, smooth, Dataset,
    Error, Metric, Origin, PipelineOptions,
};
use wasm_bindgen::prelude::*;

/// A 2-D point cloud with ground-truth labels.
#[wasm_bindgen]
pub struct Points {
    xs: Vec<f64>,
    ys: Vec<f64>,
    labels: Vec<u32>,
}

#[wasm_bindgen]
impl Points {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn labels(&self) -> Vec<u32> {
        self.labels.clone()
    }
}

/// Everything the page draws after a run.
#[wasm_bindgen]
pub struct Outcome {
    clusters: Vec<i32>,
    dense: Vec<u8>,
    cluster_count: usize,
    eps: f64,
    k: usize,
    m: usize,
    p_star: usize,
    sorted_rho: Vec<f64>,
    smoothed: Vec<f64>,
    residuals: Vec<f64>,
    ari: Option<f64>,
}

#[wasm_bindgen]
impl Outcome {
    #[wasm_bindgen(getter)]
    pub fn clusters(&self) -> Vec<i32> {
        self.clusters.clone()
    }

    /// 1 for members of the dense subset, 0 for assigned objects.
    #[wasm_bindgen(getter)]
    pub fn dense(&self) -> Vec<u8> {
        self.dense.clone()
    }

    #[wasm_bindgen(getter, js_name = clusterCount)]
    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    #[wasm_bindgen(getter)]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    #[wasm_bindgen(getter)]
    pub fn k(&self) -> usize {
        self.k
    }

    #[wasm_bindgen(getter)]
    pub fn m(&self) -> usize {
        self.m
    }

    #[wasm_bindgen(getter, js_name = pStar)]
    pub fn p_star(&self) -> usize {
        self.p_star
    }

    /// Densities in descending order.
    #[wasm_bindgen(getter, js_name = sortedRho)]
    pub fn sorted_rho(&self) -> Vec<f64> {
        self.sorted_rho.clone()
    }

    /// Five-term trailing mean of the sorted densities, positions 5..=n.
    #[wasm_bindgen(getter)]
    pub fn smoothed(&self) -> Vec<f64> {
        self.smoothed.clone()
    }

    /// Split score for positions 10..=n-5.
    #[wasm_bindgen(getter)]
    pub fn residuals(&self) -> Vec<f64> {
        self.residuals.clone()
    }

    /// Adjusted Rand index against the generator's labels, when known.
    #[wasm_bindgen(getter)]
    pub fn ari(&self) -> Option<f64> {
        self.ari
    }
}

pub fn make_points(kind: &str, points: usize, noise: f64, seed: u64) -> Result<Points, Error> {
    let data = match kind {
        "shapet" => generate_shape_t(points, noise, seed)?,
        "blobs" => {
            let centers = ring_centers(5, 12.0);
            generate_blobs(&centers, points.div_ceil(5), 1.5, seed)?
        }
        other => return Err(Error::InvalidParams(format!("unknown dataset {other:?}"))),
    };
    Ok(Points {
        xs: data.rows().map(|r| r[0]).collect(),
        ys: data.rows().map(|r| r[1]).collect(),
        labels: data
            .labels()
            .map(|l| l.iter().map(|&c| c as u32).collect())
            .unwrap_or_default(),
    })
}

pub fn cluster_points(
    xs: &[f64],
    ys: &[f64],
    labels: &[u32],
    k: Option<usize>,
    m: Option<usize>,
    grey_metric: bool,
) -> Result<Outcome, Error> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let values: Vec<f64> = xs.iter().zip(ys).flat_map(|(&x, &y)| [x, y]).collect();
    let data = Dataset::from_flat("canvas", 2, values, None)?;
    let options = PipelineOptions {
        k,
        m,
        metric: if grey_metric { Metric::GreyDissimilarity } else { Metric::Euclidean },
        ..PipelineOptions::default()
    };
    let report = run_sag_dbscan(&data, &options)?;
    let ari = if labels.len() == xs.len() {
        Some(sag_dbscan::ari(report.clustering.assignments(), labels)?)
    } else {
        None
    };
    Ok(Outcome {
        clusters: report.clustering.assignments().to_vec(),
        dense: report
            .clustering
            .origin()
            .iter()
            .map(|&o| u8::from(o == Origin::DenseCore))
            .collect(),
        cluster_count: report.cluster_count,
        eps: report.dbscan.eps,
        k: report.params.k,
        m: report.params.m,
        p_star: report.split.p_star,
        sorted_rho: report.density.sorted(),
        smoothed: smooth(&report.density)?.values().to_vec(),
        residuals: report.split.residuals.iter().map(|&(_, r)| r).collect(),
        ari,
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Generates `"shapet"` or `"blobs"` data.
#[wasm_bindgen]
pub fn generate(kind: &str, points: usize, noise: f64, seed: u32) -> Result<Points, JsError> {
    make_points(kind, points, noise, u64::from(seed)).map_err(js)
}

/// Runs the full pipeline; `k` and `m` fall back to the size-based schedule.
#[wasm_bindgen]
pub fn cluster(
    xs: &[f64],
    ys: &[f64],
    labels: &[u32],
    k: Option<usize>,
    m: Option<usize>,
    grey_metric: bool,
) -> Result<Outcome, JsError> {
    cluster_points(xs, ys, labels, k, m, grey_metric).map_err(js)
}

/// Grey relational degree of two equal-length sequences.
#[wasm_bindgen(js_name = greyDegree)]
pub fn grey_degree_js(a: &[f64], b: &[f64]) -> Result<f64, JsError> {
    grey_degree(a, b).map_err(js)
}
