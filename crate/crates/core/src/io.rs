//! CSV ingestion and output, dataset manifests and atomic file writes.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::TabularDataset;
use crate::error::{Error, Result};

/// Column mapping for one dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub target_column: String,
    pub favorable_value: String,
    pub protected_column: String,
    pub privileged_value: String,
}

fn literal_matches(cell: &str, literal: &str) -> bool {
    let cell = cell.trim();
    let literal = literal.trim();
    if cell == literal {
        return true;
    }
    match (cell.parse::<f64>(), literal.parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn is_missing(cell: &str) -> bool {
    matches!(cell.trim(), "" | "NA" | "NaN" | "nan" | "?" | "null")
}

/// Load a comma separated file with a header row.
///
/// The target is mapped so `favorable_value` becomes 1 and the protected
/// attribute so `privileged_value` becomes 1. Every other column must be
/// numeric and becomes a feature.
pub fn load_csv(path: impl AsRef<Path>, columns: &ColumnSpec) -> Result<TabularDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim().is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    parse_csv(text.as_bytes(), columns).map_err(|e| match e {
        Error::InvalidDataset(msg) if msg.starts_with("need at least 2 rows") => {
            Error::EmptyFile(path.to_path_buf())
        }
        other => other,
    })
}

pub fn parse_csv(reader: impl std::io::Read, columns: &ColumnSpec) -> Result<TabularDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let target_idx = find(&columns.target_column)?;
    let protected_idx = find(&columns.protected_column)?;
    let feature_idx: Vec<usize> = (0..headers.len())
        .filter(|&j| j != target_idx && j != protected_idx)
        .collect();

    let mut features = Vec::new();
    let mut target = Vec::new();
    let mut protected = Vec::new();
    let mut target_values = BTreeSet::new();
    let mut protected_values = BTreeSet::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let cell = |j: usize| -> Result<&str> {
            let v = record.get(j).unwrap_or("");
            if is_missing(v) {
                Err(Error::MissingValue {
                    column: headers[j].clone(),
                    row,
                })
            } else {
                Ok(v)
            }
        };
        let t = cell(target_idx)?;
        let a = cell(protected_idx)?;
        target_values.insert(t.trim().to_string());
        protected_values.insert(a.trim().to_string());
        target.push(u8::from(literal_matches(t, &columns.favorable_value)));
        protected.push(u8::from(literal_matches(a, &columns.privileged_value)));
        for &j in &feature_idx {
            let v = cell(j)?;
            let x: f64 = v.trim().parse().map_err(|_| Error::NonNumeric {
                column: headers[j].clone(),
                row,
                value: v.to_string(),
            })?;
            if !x.is_finite() {
                return Err(Error::NonNumeric {
                    column: headers[j].clone(),
                    row,
                    value: v.to_string(),
                });
            }
            features.push(x);
        }
    }
    if target_values.len() > 2 {
        return Err(Error::NonBinary {
            role: "target",
            column: columns.target_column.clone(),
            distinct: target_values.len(),
        });
    }
    if protected_values.len() > 2 {
        return Err(Error::NonBinary {
            role: "protected",
            column: columns.protected_column.clone(),
            distinct: protected_values.len(),
        });
    }
    let names = feature_idx.iter().map(|&j| headers[j].clone()).collect();
    TabularDataset::new(features, names, target, protected)
}

/// Write features, then the protected column, then the target column.
///
/// Reals use the shortest representation that parses back to the same bits.
pub fn dataset_to_csv(ds: &TabularDataset, protected_name: &str, target_name: &str) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = ds.feature_names().iter().map(String::as_str).collect();
    header.push(protected_name);
    header.push(target_name);
    wtr.write_record(&header)?;
    let mut record = Vec::with_capacity(header.len());
    for i in 0..ds.n_rows() {
        record.clear();
        record.extend(ds.row(i).iter().map(|v| v.to_string()));
        record.push(ds.protected()[i].to_string());
        record.push(ds.target()[i].to_string());
        wtr.write_record(&record)?;
    }
    wtr.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

/// Write `bytes` to a temporary sibling and rename it into place.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// A scenario parameter: either a real-valued strength or a boolean switch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Flag(bool),
    Real(f64),
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Flag(b) => write!(f, "{b}"),
            ParamValue::Real(v) => write!(f, "{v}"),
        }
    }
}

/// One dataset listed in a manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path relative to the manifest's directory (or absolute).
    pub file: String,
    pub target_column: String,
    pub favorable_value: String,
    pub protected_column: String,
    pub privileged_value: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter_value: Option<ParamValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ManifestEntry {
    pub fn columns(&self) -> ColumnSpec {
        ColumnSpec {
            target_column: self.target_column.clone(),
            favorable_value: self.favorable_value.clone(),
            protected_column: self.protected_column.clone(),
            privileged_value: self.privileged_value.clone(),
        }
    }

    /// Identifier used in reports: explicit id, else the file stem.
    pub fn id(&self) -> String {
        self.dataset_id.clone().unwrap_or_else(|| {
            Path::new(&self.file)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| self.file.clone())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub datasets: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ManifestRepr {
    Wrapped(Manifest),
    Bare(Vec<ManifestEntry>),
}

impl Manifest {
    /// Accepts either `{"datasets": [...]}` or a bare array of entries.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(match serde_json::from_str::<ManifestRepr>(text)? {
            ManifestRepr::Wrapped(m) => m,
            ManifestRepr::Bare(datasets) => Manifest {
                config_hash: None,
                datasets,
            },
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn resolve(manifest_path: &Path, entry: &ManifestEntry) -> PathBuf {
        let file = Path::new(&entry.file);
        if file.is_absolute() {
            file.to_path_buf()
        } else {
            manifest_path.parent().unwrap_or(Path::new(".")).join(file)
        }
    }
}
