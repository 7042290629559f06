//! Cluster assignments and the result file format.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Cluster id of an object that has not been assigned yet.
pub const UNASSIGNED: i32 = -1;

/// How an object obtained its cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Clustered directly by DBSCAN on the dense subset.
    DenseCore,
    /// Attached afterwards by nearest-cluster assignment.
    AssignedRemainder,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::DenseCore => "core",
            Origin::AssignedRemainder => "assigned",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "core" => Some(Origin::DenseCore),
            "assigned" => Some(Origin::AssignedRemainder),
            _ => None,
        }
    }
}

/// Per-object cluster ids plus their provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    assignments: Vec<i32>,
    origin: Vec<Origin>,
}

impl Clustering {
    pub fn new(assignments: Vec<i32>, origin: Vec<Origin>) -> Result<Self> {
        if assignments.len() != origin.len() {
            return Err(Error::LengthMismatch {
                left: assignments.len(),
                right: origin.len(),
            });
        }
        if assignments.iter().any(|&a| a < UNASSIGNED) {
            return Err(Error::InvalidParams("cluster ids must be >= -1".into()));
        }
        Ok(Clustering {
            assignments,
            origin,
        })
    }

    /// All objects marked as dense-core members.
    pub fn from_assignments(assignments: Vec<i32>) -> Result<Self> {
        let origin = vec![Origin::DenseCore; assignments.len()];
        Self::new(assignments, origin)
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[i32] {
        &self.assignments
    }

    pub fn origin(&self) -> &[Origin] {
        &self.origin
    }

    pub fn unassigned_count(&self) -> usize {
        self.assignments.iter().filter(|&&a| a == UNASSIGNED).count()
    }

    pub fn is_finalized(&self) -> bool {
        self.unassigned_count() == 0
    }

    /// Distinct cluster ids, ignoring unassigned objects.
    pub fn cluster_count(&self) -> usize {
        let mut ids: Vec<i32> = self
            .assignments
            .iter()
            .copied()
            .filter(|&a| a != UNASSIGNED)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Renumbers clusters `0..t` in order of first appearance.
    pub fn relabeled(&self) -> Self {
        let mut map = std::collections::HashMap::new();
        let assignments = self
            .assignments
            .iter()
            .map(|&a| {
                if a == UNASSIGNED {
                    return a;
                }
                let next = map.len() as i32;
                *map.entry(a).or_insert(next)
            })
            .collect();
        Clustering {
            assignments,
            origin: self.origin.clone(),
        }
    }

    pub(crate) fn set(&mut self, i: usize, cluster: i32, origin: Origin) {
        self.assignments[i] = cluster;
        self.origin[i] = origin;
    }
}

/// Writes `index,cluster,origin` rows in object order.
pub fn write_result(clustering: &Clustering, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let pending = clustering.unassigned_count();
    if pending > 0 {
        return Err(Error::UnassignedObjects(pending));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(out, "index,cluster,origin").map_err(io)?;
    for (i, (c, o)) in clustering
        .assignments()
        .iter()
        .zip(clustering.origin())
        .enumerate()
    {
        writeln!(out, "{i},{c},{}", o.as_str()).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Reads a file produced by [`write_result`].
pub fn read_result(path: impl AsRef<Path>) -> Result<Clustering> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows: Vec<(usize, i32, Origin)> = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record?;
        let row = idx + 2;
        let field = |c: usize| record.get(c).unwrap_or("");
        if record.len() != 3 {
            return Err(Error::RaggedRows {
                row,
                expected: 3,
                found: record.len(),
            });
        }
        let parse_err = |c: usize| Error::Parse {
            row,
            col: c + 1,
            value: field(c).to_string(),
        };
        let index = field(0).parse().map_err(|_| parse_err(0))?;
        let cluster = field(1).parse().map_err(|_| parse_err(1))?;
        let origin = Origin::parse(field(2)).ok_or_else(|| parse_err(2))?;
        rows.push((index, cluster, origin));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(Error::InvalidParams(
            "result indices must cover 0..n exactly once".into(),
        ));
    }
    let (assignments, origin) = rows.into_iter().map(|(_, c, o)| (c, o)).unzip();
    Clustering::new(assignments, origin)
}
