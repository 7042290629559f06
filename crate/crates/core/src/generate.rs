//! Seeded synthetic datasets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Isotropic Gaussian blobs, `points_per_center` around each center.
/// Labels are the center index.
pub fn generate_blobs(
    centers: &[Vec<f64>],
    points_per_center: usize,
    spread: f64,
    seed: u64,
) -> Result<Dataset> {
    if !(spread.is_finite() && spread > 0.0) {
        return Err(Error::InvalidSpread(spread));
    }
    if centers.is_empty() || points_per_center == 0 {
        return Err(Error::InvalidParams(
            "need at least one center and one point per center".into(),
        ));
    }
    let dim = centers[0].len();
    if let Some(bad) = centers.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: bad.len(),
        });
    }
    let noise = Normal::new(0.0, spread).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(centers.len() * points_per_center * dim);
    let mut labels = Vec::with_capacity(centers.len() * points_per_center);
    for (label, center) in centers.iter().enumerate() {
        for _ in 0..points_per_center {
            values.extend(center.iter().map(|&c| c + noise.sample(&mut rng)));
            labels.push(label);
        }
    }
    Dataset::from_flat("blobs", dim, values, Some(labels))
}

/// `count` centers spaced evenly on a circle of the given radius.
pub fn ring_centers(count: usize, radius: f64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / count as f64;
            vec![radius * a.cos(), radius * a.sin()]
        })
        .collect()
}

/// Geometry of the three ShapeT regions.
///
/// Label 0 is the T: a horizontal bar `[0,6] x [8,10]` on top of a stem
/// `[2,4] x [2,8]`. Labels 1 and 2 are discs of radius 2 centered at
/// `(-4, 5)` and `(10, 5)`. Every disc sits at least 3 units away from the T.
pub mod shape_t {
    pub const BAR: [f64; 4] = [0.0, 6.0, 8.0, 10.0];
    pub const STEM: [f64; 4] = [2.0, 4.0, 2.0, 8.0];
    pub const DISC_CENTERS: [[f64; 2]; 2] = [[-4.0, 5.0], [10.0, 5.0]];
    pub const DISC_RADIUS: f64 = 2.0;
    /// Bounding box `[x0, x1, y0, y1]` used for uniform noise.
    pub const BOUNDS: [f64; 4] = [-7.0, 13.0, 0.0, 11.0];

    fn rect_distance(r: &[f64; 4], x: f64, y: f64) -> f64 {
        let dx = (r[0] - x).max(0.0).max(x - r[1]);
        let dy = (r[2] - y).max(0.0).max(y - r[3]);
        dx.hypot(dy)
    }

    /// Euclidean distance from `(x, y)` to the region of `label`; 0 inside.
    pub fn region_distance(label: usize, x: f64, y: f64) -> f64 {
        match label {
            0 => rect_distance(&BAR, x, y).min(rect_distance(&STEM, x, y)),
            1 | 2 => {
                let c = DISC_CENTERS[label - 1];
                ((x - c[0]).hypot(y - c[1]) - DISC_RADIUS).max(0.0)
            }
            _ => f64::INFINITY,
        }
    }

    /// Label of the region closest to `(x, y)`, ties to the smaller label.
    pub fn nearest_region(x: f64, y: f64) -> usize {
        (0..3)
            .map(|l| (region_distance(l, x, y), l))
            .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
            .1
    }
}

/// Two-dimensional, three-cluster set where cluster 0 is T-shaped.
///
/// Clean points go half to the T and half to the two discs, each sampled
/// uniformly over its region. A `noise_fraction` share is drawn uniformly
/// over the bounding box instead and labeled by the nearest region.
pub fn generate_shape_t(points: usize, noise_fraction: f64, seed: u64) -> Result<Dataset> {
    if points < 30 {
        return Err(Error::TooFewPoints {
            required: 30,
            actual: points,
        });
    }
    if !(0.0..1.0).contains(&noise_fraction) {
        return Err(Error::InvalidParams(format!(
            "noise_fraction must lie in [0, 1), got {noise_fraction}"
        )));
    }
    let noisy = ((points as f64 * noise_fraction).round() as usize).min(points - 3);
    let clean = points - noisy;
    let t_count = clean / 2;
    let disc_a = (clean - t_count) / 2;
    let disc_b = clean - t_count - disc_a;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(points * 2);
    let mut labels = Vec::with_capacity(points);

    let bar_area = (shape_t::BAR[1] - shape_t::BAR[0]) * (shape_t::BAR[3] - shape_t::BAR[2]);
    let stem_area = (shape_t::STEM[1] - shape_t::STEM[0]) * (shape_t::STEM[3] - shape_t::STEM[2]);
    let bar_share = bar_area / (bar_area + stem_area);
    for _ in 0..t_count {
        let r = if rng.random::<f64>() < bar_share {
            &shape_t::BAR
        } else {
            &shape_t::STEM
        };
        values.push(rng.random_range(r[0]..=r[1]));
        values.push(rng.random_range(r[2]..=r[3]));
        labels.push(0);
    }
    for (disc, count) in [disc_a, disc_b].into_iter().enumerate() {
        let [cx, cy] = shape_t::DISC_CENTERS[disc];
        for _ in 0..count {
            let radius = shape_t::DISC_RADIUS * rng.random::<f64>().sqrt();
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            values.push(cx + radius * angle.cos());
            values.push(cy + radius * angle.sin());
            labels.push(disc + 1);
        }
    }
    let b = shape_t::BOUNDS;
    for _ in 0..noisy {
        let x = rng.random_range(b[0]..=b[1]);
        let y = rng.random_range(b[2]..=b[3]);
        values.push(x);
        values.push(y);
        labels.push(shape_t::nearest_region(x, y));
    }
    Dataset::from_flat("shapet", 2, values, Some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn blob_counts_and_labels() {
        let ds = generate_blobs(&[vec![0.0, 0.0], vec![5.0, 5.0]], 10, 1.0, 3).unwrap();
        assert_eq!(ds.n(), 20);
        let labels = ds.labels().unwrap();
        assert!(labels.iter().all(|&l| l < 2));
        assert_eq!(labels.iter().filter(|&&l| l == 1).count(), 10);
    }

    #[test]
    fn blobs_are_deterministic() {
        let c = ring_centers(3, 10.0);
        let a = generate_blobs(&c, 25, 0.7, 42).unwrap();
        let b = generate_blobs(&c, 25, 0.7, 42).unwrap();
        assert_eq!(a, b);
        let other = generate_blobs(&c, 25, 0.7, 43).unwrap();
        assert_ne!(a.values(), other.values());
    }

    #[test]
    fn far_blobs_are_separated() {
        let ds = generate_blobs(&[vec![0.0, 0.0], vec![100.0, 100.0]], 50, 1.0, 9).unwrap();
        let labels = ds.labels().unwrap();
        let (mut max_intra, mut min_inter) = (0.0f64, f64::INFINITY);
        for i in 0..ds.n() {
            for j in i + 1..ds.n() {
                let d = dist(ds.row(i), ds.row(j));
                if labels[i] == labels[j] {
                    max_intra = max_intra.max(d);
                } else {
                    min_inter = min_inter.min(d);
                }
            }
        }
        assert!(min_inter > max_intra, "{min_inter} <= {max_intra}");
    }

    #[test]
    fn blob_errors() {
        assert!(matches!(
            generate_blobs(&[vec![0.0]], 3, 0.0, 1),
            Err(Error::InvalidSpread(_))
        ));
        assert!(matches!(
            generate_blobs(&[vec![0.0]], 3, f64::NAN, 1),
            Err(Error::InvalidSpread(_))
        ));
        assert!(generate_blobs(&[], 3, 1.0, 1).is_err());
    }

    #[test]
    fn shape_t_full_size() {
        let ds = generate_shape_t(10_000, 0.0, 7).unwrap();
        assert_eq!((ds.n(), ds.dim()), (10_000, 2));
        assert_eq!(ds.class_count(), Some(3));
    }

    #[test]
    fn shape_t_minimum_has_every_cluster() {
        let ds = generate_shape_t(30, 0.0, 1).unwrap();
        let labels = ds.labels().unwrap();
        for l in 0..3 {
            assert!(labels.contains(&l));
        }
        assert!(matches!(
            generate_shape_t(29, 0.0, 1),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn noiseless_points_lie_in_their_region() {
        let ds = generate_shape_t(3000, 0.0, 11).unwrap();
        for (row, &l) in ds.rows().zip(ds.labels().unwrap()) {
            assert_eq!(shape_t::region_distance(l, row[0], row[1]), 0.0, "{row:?} / {l}");
        }
    }

    #[test]
    fn noisy_points_take_nearest_region() {
        let ds = generate_shape_t(500, 0.2, 5).unwrap();
        for (row, &l) in ds.rows().zip(ds.labels().unwrap()) {
            assert_eq!(shape_t::nearest_region(row[0], row[1]), l);
        }
        assert!(generate_shape_t(500, 1.0, 5).is_err());
    }

    #[test]
    fn t_is_clear_of_discs() {
        // corners of the bar nearest each disc
        assert_eq!(shape_t::region_distance(1, 0.0, 8.0), 3.0);
        assert_eq!(shape_t::region_distance(2, 6.0, 8.0), 3.0);
        assert_eq!(shape_t::region_distance(0, 3.0, 5.0), 0.0);
        assert_eq!(shape_t::region_distance(0, 1.0, 5.0), 1.0);
    }
}
