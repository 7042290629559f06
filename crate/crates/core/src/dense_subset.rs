//! Self-adaptive dense subset extraction.
//!
//! The descending density sequence is smoothed with a trailing 5-point mean,
//! then every admissible split of the smoothed curve is scored by fitting one
//! straight line to each side and summing the absolute fit errors. The split
//! with the smallest score marks the knee between dense objects and the
//! sparse border/noise tail; objects at least as dense as the knee form the
//! dense subset.
//!
//! Indices in this module are 1-based positions in the descending sequence,
//! so the smoothed curve starts at position 5.

use std::path::Path;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::density::DensityProfile;
use crate::error::{Error, Result};

/// Width of the smoothing window.
pub const SMOOTHING_WINDOW: usize = 5;
/// Minimum number of curve points on either side of a split.
pub const MIN_SEGMENT: usize = 5;

/// How each side of a split is fitted. The score is always the sum of
/// absolute errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegressionMode {
    /// Ordinary least squares.
    #[default]
    Ols,
    /// Least absolute deviations.
    L1,
}

impl std::str::FromStr for RegressionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ols" => Ok(RegressionMode::Ols),
            "l1" => Ok(RegressionMode::L1),
            other => Err(Error::InvalidParams(format!("unknown regression mode {other:?}"))),
        }
    }
}

/// Trailing 5-point mean of a descending sequence, defined at positions
/// `5..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedCurve {
    v: Vec<f64>,
}

impl SmoothedCurve {
    /// Length `n` of the sequence the curve was smoothed from.
    pub fn source_len(&self) -> usize {
        self.v.len() + SMOOTHING_WINDOW - 1
    }

    /// Smoothed values for positions `5, 6, ..., n`.
    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// Value at 1-based position `i` (`5 <= i <= n`).
    pub fn at(&self, i: usize) -> f64 {
        self.v[i - SMOOTHING_WINDOW]
    }

    /// Admissible split positions, `10..=n-5`.
    pub fn split_range(&self) -> std::ops::RangeInclusive<usize> {
        let n = self.source_len();
        (SMOOTHING_WINDOW + MIN_SEGMENT)..=n.saturating_sub(MIN_SEGMENT)
    }
}

/// Smooths the profile's densities taken in descending order.
pub fn smooth(profile: &DensityProfile) -> Result<SmoothedCurve> {
    smooth_sequence(&profile.sorted())
}

/// Smooths an already descending sequence.
pub fn smooth_sequence(sorted: &[f64]) -> Result<SmoothedCurve> {
    if sorted.len() < SMOOTHING_WINDOW {
        return Err(Error::TooFewObjects {
            required: SMOOTHING_WINDOW,
            actual: sorted.len(),
        });
    }
    let v = sorted
        .windows(SMOOTHING_WINDOW)
        .map(|w| {
            // newest term first, then divide once
            let sum = w.iter().rev().fold(0.0, |acc, &x| acc + x);
            sum / SMOOTHING_WINDOW as f64
        })
        .collect();
    Ok(SmoothedCurve { v })
}

/// A fitted line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub intercept: f64,
    pub slope: f64,
}

impl Line {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Least-squares line through the points.
pub fn fit_ols(xs: &[f64], ys: &[f64]) -> Line {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Line {
        intercept: my - slope * mx,
        slope,
    }
}

/// Least-absolute-deviation line through the points.
///
/// Pivots on one data point at a time: the best line through the pivot has
/// the weighted median of the slopes to every other point (weights
/// `|x_i - x_pivot|`), and the point realising that median becomes the next
/// pivot. The objective never increases, and the loop stops once the pivot
/// stops improving it. Requires distinct `xs`.
pub fn fit_l1(xs: &[f64], ys: &[f64]) -> Line {
    let m = xs.len();
    if m < 2 {
        return Line {
            intercept: ys.first().copied().unwrap_or(0.0),
            slope: 0.0,
        };
    }
    let cost = |line: &Line| -> f64 {
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| (line.eval(x) - y).abs())
            .sum()
    };
    let mut pivot = m / 2;
    let mut best: Option<(f64, Line)> = None;
    let mut slopes: Vec<(f64, f64, usize)> = Vec::with_capacity(m);
    for _ in 0..(4 * m).max(64) {
        let (px, py) = (xs[pivot], ys[pivot]);
        slopes.clear();
        slopes.extend(
            (0..m)
                .filter(|&i| xs[i] != px)
                .map(|i| ((ys[i] - py) / (xs[i] - px), (xs[i] - px).abs(), i)),
        );
        slopes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        let half = slopes.iter().map(|s| s.1).sum::<f64>() / 2.0;
        let mut acc = 0.0;
        let &(slope, _, next) = slopes
            .iter()
            .find(|s| {
                acc += s.1;
                acc >= half
            })
            .unwrap_or(&slopes[slopes.len() - 1]);
        let line = Line {
            intercept: py - slope * px,
            slope,
        };
        let c = cost(&line);
        match best {
            Some((bc, _)) if c >= bc => break,
            _ => best = Some((c, line)),
        }
        pivot = next;
    }
    best.map(|(_, l)| l).expect("at least one iteration")
}

fn segment_error(curve: &SmoothedCurve, from: usize, to: usize, mode: RegressionMode) -> f64 {
    let xs: Vec<f64> = (from..=to).map(|i| i as f64).collect();
    let ys = &curve.v[from - SMOOTHING_WINDOW..=to - SMOOTHING_WINDOW];
    let line = match mode {
        RegressionMode::Ols => fit_ols(&xs, ys),
        RegressionMode::L1 => fit_l1(&xs, ys),
    };
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| (line.eval(x) - y).abs())
        .sum()
}

/// Sum of absolute errors of the two lines fitted to positions `5..=p` and
/// `p+1..=n`.
pub fn split_residual(curve: &SmoothedCurve, p: usize, mode: RegressionMode) -> Result<f64> {
    let range = curve.split_range();
    if !range.contains(&p) {
        return Err(Error::SplitOutOfRange {
            p,
            min: *range.start(),
            max: *range.end(),
        });
    }
    let n = curve.source_len();
    Ok(segment_error(curve, SMOOTHING_WINDOW, p, mode) + segment_error(curve, p + 1, n, mode))
}

/// Outcome of the split search.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSearchResult {
    /// Chosen 1-based split position.
    pub p_star: usize,
    /// `(p, R_p)` for every admissible split, ascending in `p`.
    pub residuals: Vec<(usize, f64)>,
    /// Density at position `p_star` of the descending sequence.
    pub threshold: f64,
    /// Dense-subset membership per object.
    pub member_mask: Vec<bool>,
}

impl SplitSearchResult {
    /// Indices of the dense-subset members, ascending.
    pub fn members(&self) -> Vec<usize> {
        self.member_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect()
    }

    pub fn dense_size(&self) -> usize {
        self.member_mask.iter().filter(|&&m| m).count()
    }

    /// Writes `p,R_p` rows.
    pub fn write_residuals_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_rows(path.as_ref(), "p,R_p", self.residuals.iter().map(|(p, r)| format!("{p},{r:?}")))
    }

    /// Writes `index,dense` rows with 1 for members.
    pub fn write_mask_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_rows(
            path.as_ref(),
            "index,dense",
            self.member_mask
                .iter()
                .enumerate()
                .map(|(i, &m)| format!("{i},{}", u8::from(m))),
        )
    }
}

fn write_rows(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    use std::io::Write;
    let io = |e| Error::io(path, e);
    let file = std::fs::File::create(path).map_err(io)?;
    let mut out = std::io::BufWriter::new(file);
    writeln!(out, "{header}").map_err(io)?;
    for row in rows {
        writeln!(out, "{row}").map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Scores every admissible split and keeps objects whose density reaches the
/// knee. Equal scores resolve to the smallest split.
pub fn find_dense_subset(profile: &DensityProfile, mode: RegressionMode) -> Result<SplitSearchResult> {
    let n = profile.len();
    let required = SMOOTHING_WINDOW + 2 * MIN_SEGMENT;
    if n < required {
        return Err(Error::TooFewObjects {
            required,
            actual: n,
        });
    }
    let sorted = profile.sorted();
    let curve = smooth_sequence(&sorted)?;
    let candidates: Vec<usize> = curve.split_range().collect();
    let score = |&p: &usize| -> (usize, f64) {
        let n = curve.source_len();
        let r = segment_error(&curve, SMOOTHING_WINDOW, p, mode) + segment_error(&curve, p + 1, n, mode);
        (p, r)
    };
    #[cfg(feature = "parallel")]
    let residuals: Vec<(usize, f64)> = candidates.par_iter().map(score).collect();
    #[cfg(not(feature = "parallel"))]
    let residuals: Vec<(usize, f64)> = candidates.iter().map(score).collect();

    let (p_star, _) = residuals
        .iter()
        .copied()
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    let threshold = sorted[p_star - 1];
    let member_mask = profile.rho().iter().map(|&r| r >= threshold).collect();
    Ok(SplitSearchResult {
        p_star,
        residuals,
        threshold,
        member_mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn five_term_mean() {
        let c = smooth_sequence(&[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(c.values(), &[3.0]);
        let c = smooth_sequence(&[10.0, 10.0, 10.0, 10.0, 10.0, 0.0]).unwrap();
        assert_eq!(c.values(), &[10.0, 8.0]);
        assert_eq!(c.at(6), 8.0);
        let c = smooth_sequence(&[0.7; 9]).unwrap();
        assert!(c.values().iter().all(|&v| v == 0.7));
        assert!(matches!(
            smooth_sequence(&[1.0; 4]),
            Err(Error::TooFewObjects { .. })
        ));
    }

    fn curve_from(v: Vec<f64>) -> SmoothedCurve {
        SmoothedCurve { v }
    }

    /// Curve on positions 5..=n: slope `s1` through `q`, slope `s2` from
    /// `q + 1`, the two lines crossing halfway between.
    fn knee_curve(n: usize, q: usize, s1: f64, s2: f64) -> SmoothedCurve {
        curve_from(
            (5..=n)
                .map(|i| {
                    let t = i as f64 - q as f64 - 0.5;
                    if i <= q {
                        10.0 + s1 * t
                    } else {
                        10.0 + s2 * t
                    }
                })
                .collect(),
        )
    }

    /// Independent residual: normal-equation OLS over each side.
    fn oracle_residual(curve: &SmoothedCurve, p: usize) -> f64 {
        let n = curve.source_len();
        let side = |a: usize, b: usize| {
            let pts: Vec<(f64, f64)> = (a..=b).map(|i| (i as f64, curve.at(i))).collect();
            let m = pts.len() as f64;
            let sx: f64 = pts.iter().map(|p| p.0).sum();
            let sy: f64 = pts.iter().map(|p| p.1).sum();
            let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
            let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
            let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            let icept = (sy - slope * sx) / m;
            pts.iter().map(|&(x, y)| (icept + slope * x - y).abs()).sum::<f64>()
        };
        side(5, p) + side(p + 1, n)
    }

    #[test]
    fn perfect_knee_scores_zero() {
        let c = knee_curve(40, 18, -0.05, -0.6);
        for mode in [RegressionMode::Ols, RegressionMode::L1] {
            assert!(split_residual(&c, 18, mode).unwrap() < 1e-9);
            assert!(split_residual(&c, 17, mode).unwrap() > 1e-3);
            assert!(split_residual(&c, 25, mode).unwrap() > 1e-3);
        }
    }

    #[test]
    fn residuals_match_normal_equations() {
        let c = knee_curve(60, 31, -0.02, -0.3);
        for p in c.split_range() {
            let got = split_residual(&c, p, RegressionMode::Ols).unwrap();
            assert!((got - oracle_residual(&c, p)).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn straight_line_scores_zero_everywhere() {
        let c = curve_from((5..=50).map(|i| 3.0 - 0.01 * i as f64).collect());
        for p in c.split_range() {
            assert!(split_residual(&c, p, RegressionMode::Ols).unwrap() < 1e-9);
        }
    }

    #[test]
    fn split_bounds() {
        let c = knee_curve(30, 15, -0.1, -1.0);
        assert_eq!(c.split_range(), 10..=25);
        assert!(matches!(
            split_residual(&c, 9, RegressionMode::Ols),
            Err(Error::SplitOutOfRange { .. })
        ));
        assert!(matches!(
            split_residual(&c, 26, RegressionMode::Ols),
            Err(Error::SplitOutOfRange { .. })
        ));
        assert!(split_residual(&c, 10, RegressionMode::Ols).is_ok());
        assert!(split_residual(&c, 25, RegressionMode::Ols).is_ok());
    }

    #[test]
    fn equal_densities_keep_everything() {
        let p = DensityProfile::from_rho(vec![1.5; 30], 3).unwrap();
        let r = find_dense_subset(&p, RegressionMode::Ols).unwrap();
        assert_eq!(r.p_star, 10);
        assert_eq!(r.threshold, 1.5);
        assert!(r.member_mask.iter().all(|&m| m));
    }

    #[test]
    fn too_few_objects() {
        let p = DensityProfile::from_rho(vec![1.0; 14], 2).unwrap();
        assert!(matches!(
            find_dense_subset(&p, RegressionMode::Ols),
            Err(Error::TooFewObjects { required: 15, .. })
        ));
    }

    #[test]
    fn l1_matches_best_line_through_two_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let m = rng.random_range(2..12);
            let xs: Vec<f64> = (0..m).map(|i| i as f64 + 5.0).collect();
            let ys: Vec<f64> = xs
                .iter()
                .map(|x| 2.0 - 0.3 * x + rng.random_range(-1.0..1.0) * if rng.random_bool(0.2) { 5.0 } else { 0.1 })
                .collect();
            let cost = |l: &Line| xs.iter().zip(&ys).map(|(&x, &y)| (l.eval(x) - y).abs()).sum::<f64>();
            let mut oracle = f64::INFINITY;
            for i in 0..m {
                for j in i + 1..m {
                    let slope = (ys[j] - ys[i]) / (xs[j] - xs[i]);
                    oracle = oracle.min(cost(&Line { intercept: ys[i] - slope * xs[i], slope }));
                }
            }
            let got = cost(&fit_l1(&xs, &ys));
            assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
        }
    }

    proptest! {
        #[test]
        fn smoothed_descending_is_non_increasing(mut seq in prop::collection::vec(0.01f64..10.0, 5..60)) {
            seq.sort_by(|a, b| b.total_cmp(a));
            let c = smooth_sequence(&seq).unwrap();
            prop_assert_eq!(c.values().len(), seq.len() - 4);
            prop_assert!(c.values().windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn search_result_invariants(rho in prop::collection::vec(0.01f64..4.0, 15..80)) {
            let p = DensityProfile::from_rho(rho.clone(), 4).unwrap();
            let r = find_dense_subset(&p, RegressionMode::Ols).unwrap();
            let n = rho.len();
            prop_assert!(r.p_star >= 10 && r.p_star <= n - 5);
            let best = r.residuals.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(r.residuals.iter().find(|x| x.0 == r.p_star).unwrap().1, best);
            prop_assert!(r.dense_size() >= r.p_star);
            for a in 0..n {
                for b in 0..n {
                    if rho[a] >= rho[b] && r.member_mask[b] {
                        prop_assert!(r.member_mask[a]);
                    }
                }
            }
            prop_assert_eq!(find_dense_subset(&p, RegressionMode::Ols).unwrap(), r);
        }
    }
}
