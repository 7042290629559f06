//! SVG scatter plots of 2-D clusterings.

use std::fmt::Write as _;
use std::path::Path;

use crate::clustering::{Clustering, Origin};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Fill colors, cycled by cluster id.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
const UNASSIGNED_FILL: &str = "#000000";
const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

pub fn cluster_color(cluster: i32) -> &'static str {
    if cluster < 0 {
        UNASSIGNED_FILL
    } else {
        PALETTE[cluster as usize % PALETTE.len()]
    }
}

/// Renders one circle per object. Remainder-assigned objects get a dark
/// outline.
pub fn render_svg(dataset: &Dataset, clustering: &Clustering) -> Result<String> {
    if dataset.dim() != 2 {
        return Err(Error::NotTwoDimensional(dataset.dim()));
    }
    if dataset.n() != clustering.len() {
        return Err(Error::LengthMismatch {
            left: dataset.n(),
            right: clustering.len(),
        });
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for r in dataset.rows() {
        x0 = x0.min(r[0]);
        x1 = x1.max(r[0]);
        y0 = y0.min(r[1]);
        y1 = y1.max(r[1]);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for ((r, &c), &o) in dataset
        .rows()
        .zip(clustering.assignments())
        .zip(clustering.origin())
    {
        let cx = MARGIN + (r[0] - x0) * scale;
        // y axis points up
        let cy = SIZE - MARGIN - (r[1] - y0) * scale;
        let stroke = match o {
            Origin::DenseCore => "",
            Origin::AssignedRemainder => r##" stroke="#222222" stroke-width="0.8""##,
        };
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="2.2" fill="{}"{stroke}/>"#,
            cluster_color(c)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes [`render_svg`] output to `path`.
pub fn plot_scatter(dataset: &Dataset, clustering: &Clustering, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = render_svg(dataset, clustering)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
