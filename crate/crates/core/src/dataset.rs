//! Numeric datasets and their CSV representation.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// An immutable `n x dim` matrix of finite reals with optional class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    dim: usize,
    values: Vec<f64>,
    labels: Option<Vec<usize>>,
}

impl Dataset {
    /// Builds a dataset from row vectors.
    pub fn from_rows(
        name: impl Into<String>,
        rows: &[Vec<f64>],
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    expected: dim,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(name, dim, values, labels)
    }

    /// Builds a dataset from a row-major buffer.
    pub fn from_flat(
        name: impl Into<String>,
        dim: usize,
        values: Vec<f64>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let name = name.into();
        if dim == 0 || values.is_empty() {
            return Err(Error::EmptyDataset(name));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::RaggedRows {
                row: values.len() / dim + 1,
                expected: dim,
                found: values.len() % dim,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: pos / dim + 1,
                col: pos % dim + 1,
            });
        }
        let n = values.len() / dim;
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: labels.len(),
                });
            }
        }
        Ok(Dataset {
            name,
            dim,
            values,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of objects.
    pub fn n(&self) -> usize {
        self.values.len() / self.dim
    }

    /// Number of features.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Option<Vec<usize>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n() {
                return Err(Error::LengthMismatch {
                    left: self.n(),
                    right: l.len(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Restricts the dataset to `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        Self::from_flat(self.name.clone(), self.dim, values, labels)
    }

    /// Per-feature min-max scaling to `[0, 1]`. Constant features map to 0.
    pub fn min_max_normalized(&self) -> Self {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for row in self.rows() {
            for (k, &v) in row.iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(pos, &v)| {
                let k = pos % self.dim;
                let span = hi[k] - lo[k];
                if span > 0.0 {
                    (v - lo[k]) / span
                } else {
                    0.0
                }
            })
            .collect();
        Dataset {
            name: self.name.clone(),
            dim: self.dim,
            values,
            labels: self.labels.clone(),
        }
    }

    /// Number of distinct ground-truth labels, if labeled.
    pub fn class_count(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| {
            let mut seen: Vec<usize> = l.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
    }
}

/// Loads a comma-separated dataset.
///
/// A single header row is skipped when every cell of the first row is
/// non-numeric. The optional `label_column` (0-based) is pulled out as the
/// ground truth: non-negative integer labels are kept as-is, anything else is
/// mapped to ids in order of first appearance.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<usize>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_csv(file, name, label_column)
}

/// Parses CSV text from any reader; see [`load_csv`].
pub fn read_csv<R: std::io::Read>(
    reader: R,
    name: impl Into<String>,
    label_column: Option<usize>,
) -> Result<Dataset> {
    let name = name.into();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut width = None;
    let mut values = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = idx + 1;
        if idx == 0 && is_header(&record, label_column) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRows {
                row,
                expected,
                found: record.len(),
            });
        }
        if let Some(lc) = label_column {
            if lc >= expected {
                return Err(Error::InvalidParams(format!(
                    "label column {lc} out of range for {expected} columns"
                )));
            }
        }
        for (c, cell) in record.iter().enumerate() {
            if Some(c) == label_column {
                raw_labels.push(cell.to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                col: c + 1,
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { row, col: c + 1 });
            }
            values.push(v);
        }
    }

    let width = width.ok_or_else(|| Error::EmptyDataset(name.clone()))?;
    let dim = width - usize::from(label_column.is_some());
    let labels = label_column.map(|_| encode_labels(&raw_labels));
    Dataset::from_flat(name, dim, values, labels)
}

fn is_header(record: &csv::StringRecord, label_column: Option<usize>) -> bool {
    record
        .iter()
        .enumerate()
        .filter(|(c, _)| Some(*c) != label_column)
        .all(|(_, cell)| cell.parse::<f64>().is_err())
}

fn encode_labels(raw: &[String]) -> Vec<usize> {
    let numeric: Option<Vec<usize>> = raw.iter().map(|s| s.parse().ok()).collect();
    if let Some(ids) = numeric {
        return ids;
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    raw.iter()
        .map(|s| {
            let next = ids.len();
            *ids.entry(s.as_str()).or_insert(next)
        })
        .collect()
}

/// Writes features (and labels as a trailing `label` column) with a header row.
///
/// Values are printed in shortest round-trip form, so reloading reproduces
/// the matrix bit for bit.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let mut header: Vec<String> = (0..dataset.dim()).map(|k| format!("x{k}")).collect();
    if dataset.labels().is_some() {
        header.push("label".into());
    }
    let io = |e| Error::io(path, e);
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for (i, row) in dataset.rows().enumerate() {
        let mut line = row
            .iter()
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>()
            .join(",");
        if let Some(labels) = dataset.labels() {
            line.push(',');
            line.push_str(&labels[i].to_string());
        }
        writeln!(out, "{line}").map_err(io)?;
    }
    out.flush().map_err(io)
}
