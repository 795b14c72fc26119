//! Study manifests and CSV matrix ingestion.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Coords;
use crate::matrix::{SquareMatrix, SYMMETRY_TOLERANCE};
use crate::spn::{NodeSignalDataset, StudyDataset};

pub const MANIFEST_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Coords>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManifestOptions {
    pub standardize: bool,
    /// Take absolute values of signed associations instead of rejecting them.
    pub abs: bool,
    pub base_rate: f64,
    pub density_grid: Option<Vec<usize>>,
    pub seed: u64,
}

impl Default for ManifestOptions {
    fn default() -> Self {
        Self {
            standardize: false,
            abs: false,
            base_rate: 0.05,
            density_grid: None,
            seed: 0,
        }
    }
}

/// JSON description of a balanced study: which CSV file holds each
/// subject's correlation matrix under each condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: u32,
    pub subjects: Vec<String>,
    /// Ordered along the experimental gradient.
    pub conditions: Vec<String>,
    pub nodes: Vec<NodeSpec>,
    /// subject -> condition -> matrix path, relative to the manifest.
    #[serde(default)]
    pub files: BTreeMap<String, BTreeMap<String, PathBuf>>,
    /// Optional CSV of node intensities with header `subject,condition,<labels>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signals: Option<PathBuf>,
    #[serde(default)]
    pub options: ManifestOptions,
}

fn check_unique(what: &str, items: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for item in items {
        if !seen.insert(item) {
            return Err(Error::Schema(format!("duplicate {what} `{item}`")));
        }
    }
    Ok(())
}

impl Manifest {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let manifest: Manifest = serde_json::from_str(&text)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != MANIFEST_SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported manifest schema {} (expected {MANIFEST_SCHEMA})",
                self.schema
            )));
        }
        if !(self.options.base_rate > 0.0 && self.options.base_rate < 1.0) {
            return Err(Error::Validation(format!(
                "base_rate must lie in (0, 1), got {}",
                self.options.base_rate
            )));
        }
        check_unique("subject", &self.subjects)?;
        check_unique("condition", &self.conditions)?;
        check_unique("node label", &self.node_labels())?;
        for (subject, row) in &self.files {
            if !self.subjects.contains(subject) {
                return Err(Error::Schema(format!(
                    "files lists unknown subject `{subject}`"
                )));
            }
            if let Some(c) = row.keys().find(|c| !self.conditions.contains(c)) {
                return Err(Error::Schema(format!(
                    "files lists unknown condition `{c}` for subject `{subject}`"
                )));
            }
        }
        Ok(())
    }

    pub fn node_labels(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.label.clone()).collect()
    }

    /// Coordinates when every node has them.
    pub fn node_coords(&self) -> Option<Vec<Coords>> {
        self.nodes.iter().map(|n| n.coords).collect()
    }

    pub fn file_for(&self, subject: &str, condition: &str) -> Result<&Path> {
        self.files
            .get(subject)
            .and_then(|row| row.get(condition))
            .map(PathBuf::as_path)
            .ok_or_else(|| Error::IncompleteDesign {
                subject: subject.to_string(),
                condition: condition.to_string(),
            })
    }
}

/// Parses a headerless comma-separated square matrix.
pub fn read_matrix_csv(path: &Path) -> Result<SquareMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_csv(&text, path)
}

fn parse_matrix_csv(text: &str, path: &Path) -> Result<SquareMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field.parse::<f64>().map_err(|_| Error::Data {
                    file: path.to_path_buf(),
                    row: i,
                    col: j,
                    value: f64::NAN,
                    reason: format!("`{field}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Schema(format!(
            "{}: row {i} has {} entries but the matrix has {n} rows",
            path.display(),
            r.len()
        )));
    }
    SquareMatrix::from_rows(rows)
}

/// Checks a correlation matrix read from `path`: entries in [-1, 1], a
/// diagonal of 0 or 1 (zeroed on return), symmetry within tolerance.
pub fn validate_correlation(m: &SquareMatrix, path: &Path) -> Result<SquareMatrix> {
    let n = m.n();
    let data_err = |i, j, v, reason: &str| Error::Data {
        file: path.to_path_buf(),
        row: i,
        col: j,
        value: v,
        reason: reason.to_string(),
    };
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(data_err(i, j, v, "correlation outside [-1, 1]"));
            }
            if i == j {
                if v != 0.0 && v != 1.0 {
                    return Err(data_err(i, j, v, "diagonal must be 0 or 1"));
                }
                out.set(i, i, 0.0);
            } else if (v - m.get(j, i)).abs() > SYMMETRY_TOLERANCE {
                return Err(data_err(i, j, v, "matrix is not symmetric"));
            }
        }
    }
    out.validated_symmetric_hollow()
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn manifest_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Loads every matrix named by the manifest at `manifest_path`.
pub fn load_dataset(manifest_path: &Path) -> Result<StudyDataset> {
    let manifest = Manifest::from_path(manifest_path)?;
    load_dataset_from(&manifest, &manifest_dir(manifest_path))
}

/// Loads the dataset described by `manifest`, resolving relative paths against `base`.
pub fn load_dataset_from(manifest: &Manifest, base: &Path) -> Result<StudyDataset> {
    let n_v = manifest.nodes.len();
    let cells: Vec<(usize, usize)> = (0..manifest.subjects.len())
        .flat_map(|s| (0..manifest.conditions.len()).map(move |c| (s, c)))
        .collect();
    // resolve every cell first so a gap is reported before any parsing
    let paths = cells
        .iter()
        .map(|&(s, c)| {
            let (subject, condition) = (&manifest.subjects[s], &manifest.conditions[c]);
            let path = resolve(base, manifest.file_for(subject, condition)?);
            if !path.exists() {
                return Err(Error::IncompleteDesign {
                    subject: subject.clone(),
                    condition: condition.clone(),
                });
            }
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    let matrices = paths
        .par_iter()
        .map(|path| {
            let m = read_matrix_csv(path)?;
            if m.n() != n_v {
                return Err(Error::Schema(format!(
                    "{}: matrix is {n}x{n} but the manifest lists {n_v} nodes",
                    path.display(),
                    n = m.n()
                )));
            }
            validate_correlation(&m, path)
        })
        .collect::<Result<Vec<_>>>()?;

    let k = manifest.conditions.len();
    let mut rows: Vec<Vec<SquareMatrix>> = Vec::with_capacity(manifest.subjects.len());
    let mut iter = matrices.into_iter();
    for _ in 0..manifest.subjects.len() {
        rows.push(iter.by_ref().take(k).collect());
    }
    StudyDataset::new(
        rows,
        manifest.node_labels(),
        manifest.conditions.clone(),
        manifest.subjects.clone(),
    )?
    .with_coords(manifest.node_coords())
}

/// Loads the node-signal table referenced by the manifest at `manifest_path`.
pub fn load_node_signals(manifest_path: &Path) -> Result<NodeSignalDataset> {
    let manifest = Manifest::from_path(manifest_path)?;
    load_node_signals_from(&manifest, &manifest_dir(manifest_path))
}

pub fn load_node_signals_from(manifest: &Manifest, base: &Path) -> Result<NodeSignalDataset> {
    let rel = manifest
        .signals
        .as_ref()
        .ok_or_else(|| Error::Schema("manifest has no `signals` table".into()))?;
    let path = resolve(base, rel);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let labels = manifest.node_labels();
    if header.len() != labels.len() + 2
        || header[0] != "subject"
        || header[1] != "condition"
        || header[2..] != labels[..]
    {
        return Err(Error::Schema(format!(
            "{}: header must be `subject,condition` followed by the node labels in manifest order",
            path.display()
        )));
    }
    let mut cells: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        let s = manifest
            .subjects
            .iter()
            .position(|x| x == &record[0])
            .ok_or_else(|| {
                Error::Schema(format!(
                    "{}: unknown subject `{}`",
                    path.display(),
                    &record[0]
                ))
            })?;
        let c = manifest
            .conditions
            .iter()
            .position(|x| x == &record[1])
            .ok_or_else(|| {
                Error::Schema(format!(
                    "{}: unknown condition `{}`",
                    path.display(),
                    &record[1]
                ))
            })?;
        let values = record
            .iter()
            .skip(2)
            .enumerate()
            .map(|(v, field)| {
                field.parse::<f64>().map_err(|_| Error::Data {
                    file: path.clone(),
                    row: line,
                    col: v + 2,
                    value: f64::NAN,
                    reason: format!("`{field}` is not a number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if cells.insert((s, c), values).is_some() {
            return Err(Error::Schema(format!(
                "{}: duplicate row for ({}, {})",
                path.display(),
                manifest.subjects[s],
                manifest.conditions[c]
            )));
        }
    }
    let mut signals = Vec::with_capacity(manifest.subjects.len());
    for (s, subject) in manifest.subjects.iter().enumerate() {
        let mut row = Vec::with_capacity(manifest.conditions.len());
        for (c, condition) in manifest.conditions.iter().enumerate() {
            row.push(
                cells
                    .remove(&(s, c))
                    .ok_or_else(|| Error::IncompleteDesign {
                        subject: subject.clone(),
                        condition: condition.clone(),
                    })?,
            );
        }
        signals.push(row);
    }
    NodeSignalDataset::new(
        signals,
        labels,
        manifest.conditions.clone(),
        manifest.subjects.clone(),
    )
}
