//! Delimited-text ingestion into a [`DataMatrix`].
//!
//! Two layouts are understood. With `samples_as_rows` every record is one
//! sample and one column (or a separate label file) holds the response.
//! With `features_as_rows` (genes × cells) the first column names the
//! feature and every further column is a sample; the response comes from a
//! label file read in sample order, or from a named row.
//!
//! Empty cells and the tokens `NA`, `N/A`, `null`, `NaN` and `inf` count as
//! missing. Any other text that does not parse as a number is an error
//! regardless of the missing-value policy.

use std::collections::HashSet;
use std::fs::File;
use std::path::{Path, PathBuf};

use robscreen_core::DataMatrix;
use serde::{Deserialize, Serialize};

use crate::error::IngestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    SamplesAsRows,
    FeaturesAsRows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum NaPolicy {
    #[default]
    Error,
    DropRow,
}

/// A column (or, for `features_as_rows`, a row) given by name or by 1-based
/// position. A name is matched against the header or the feature-name
/// column first; an unmatched name that is an integer is read as a position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl std::fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "at position {i}"),
            ColumnRef::Name(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub orientation: Orientation,
    pub response: Option<ColumnRef>,
    pub label_path: Option<PathBuf>,
    pub delimiter: char,
    pub has_header: bool,
    pub na_policy: NaPolicy,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        IngestSpec {
            path: path.into(),
            orientation: Orientation::SamplesAsRows,
            response: None,
            label_path: None,
            delimiter: ',',
            has_header: true,
            na_policy: NaPolicy::Error,
        }
    }

    /// Checks the static invariants; the message is meant for the user.
    pub fn validate(&self) -> Result<(), String> {
        if !self.delimiter.is_ascii() {
            return Err(format!("delimiter {:?} is not a single byte", self.delimiter));
        }
        match (&self.response, &self.label_path) {
            (Some(_), Some(_)) => {
                Err("the response must come from either a column or a label file, not both".into())
            }
            (None, None) => Err("no response declared (give a response column or a label file)".into()),
            _ => Ok(()),
        }
    }
}

/// Result of [`ingest`] with the non-fatal diagnostics collected on the way.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub data: DataMatrix,
    pub warnings: Vec<String>,
    pub dropped_samples: usize,
}

enum Cell {
    Value(f64),
    Missing,
}

fn parse_cell(raw: &str) -> Option<Cell> {
    let s = raw.trim();
    if s.is_empty() || ["na", "n/a", "null"].iter().any(|t| s.eq_ignore_ascii_case(t)) {
        return Some(Cell::Missing);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(Cell::Value(v)),
        Ok(_) => Some(Cell::Missing),
        Err(_) => None,
    }
}

struct Table {
    header: Option<Vec<String>>,
    /// `(line, fields)` per data record.
    rows: Vec<(u64, Vec<String>)>,
}

fn read_table(path: &Path, delimiter: u8, has_header: bool) -> Result<Table, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut header = None;
    let mut rows = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|source| IngestError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<String> = record.iter().map(str::to_owned).collect();
        if fields.len() == 1 && fields[0].is_empty() {
            continue;
        }
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(IngestError::Shape {
                    path: path.to_path_buf(),
                    message: format!("line {line}: expected {w} fields, found {}", fields.len()),
                })
            }
            _ => {}
        }
        if has_header && header.is_none() {
            header = Some(fields);
        } else {
            rows.push((line, fields));
        }
    }
    Ok(Table { header, rows })
}

fn cell(path: &Path, line: u64, column: usize, raw: &str, policy: NaPolicy) -> Result<Option<f64>, IngestError> {
    match parse_cell(raw) {
        Some(Cell::Value(v)) => Ok(Some(v)),
        Some(Cell::Missing) if policy == NaPolicy::DropRow => Ok(None),
        Some(Cell::Missing) => Err(IngestError::Missing {
            path: path.to_path_buf(),
            line,
            column: column + 1,
            value: raw.to_owned(),
        }),
        None => Err(IngestError::Parse {
            path: path.to_path_buf(),
            line,
            column: column + 1,
            value: raw.to_owned(),
        }),
    }
}

/// Label file: one sample per record, the last field is the response.
fn read_labels(spec: &IngestSpec, path: &Path) -> Result<Vec<Option<f64>>, IngestError> {
    let table = read_table(path, spec.delimiter as u8, spec.has_header)?;
    table
        .rows
        .iter()
        .map(|(line, fields)| {
            let last = fields.len() - 1;
            cell(path, *line, last, &fields[last], spec.na_policy)
        })
        .collect()
}

fn check_distinct(names: &[String]) -> Result<(), IngestError> {
    let mut seen = HashSet::with_capacity(names.len());
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(IngestError::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

impl ColumnRef {
    /// 0-based index into `len` entries named `names`.
    pub fn resolve(&self, names: Option<&[String]>, len: usize) -> Option<usize> {
        let position = |i: usize| i.checked_sub(1).filter(|&k| k < len);
        match self {
            ColumnRef::Index(i) => position(*i),
            ColumnRef::Name(name) => names
                .and_then(|ns| ns.iter().position(|h| h == name))
                .or_else(|| name.parse::<usize>().ok().and_then(position)),
        }
    }
}

fn resolve(response: &ColumnRef, names: Option<&[String]>, len: usize) -> Result<usize, IngestError> {
    response
        .resolve(names, len)
        .ok_or_else(|| IngestError::ResponseNotFound(response.to_string()))
}

/// Reads the file described by `spec` into a samples-as-rows matrix.
pub fn ingest(spec: &IngestSpec) -> Result<Ingested, IngestError> {
    if let Err(message) = spec.validate() {
        return Err(IngestError::Shape {
            path: spec.path.clone(),
            message,
        });
    }
    match spec.orientation {
        Orientation::SamplesAsRows => ingest_rows(spec),
        Orientation::FeaturesAsRows => ingest_features(spec),
    }
}

struct Assembled {
    columns: Vec<Vec<f64>>,
    y: Vec<f64>,
    names: Option<Vec<String>>,
    warnings: Vec<String>,
    dropped: usize,
}

fn finish(a: Assembled) -> Result<Ingested, IngestError> {
    let mut data = DataMatrix::from_column_vecs(a.columns, a.y)?;
    if let Some(names) = a.names {
        check_distinct(&names)?;
        data = data.with_feature_names(names)?;
    }
    for w in &a.warnings {
        log::warn!("{w}");
    }
    Ok(Ingested {
        data,
        warnings: a.warnings,
        dropped_samples: a.dropped,
    })
}

fn ingest_rows(spec: &IngestSpec) -> Result<Ingested, IngestError> {
    let path = &spec.path;
    let table = read_table(path, spec.delimiter as u8, spec.has_header)?;
    let width = table
        .header
        .as_ref()
        .map(Vec::len)
        .or_else(|| table.rows.first().map(|r| r.1.len()))
        .unwrap_or(0);
    let response_col = match &spec.response {
        Some(r) => Some(resolve(r, table.header.as_deref(), width)?),
        None => None,
    };
    let labels = match &spec.label_path {
        Some(lp) => {
            let labels = read_labels(spec, lp)?;
            if labels.len() != table.rows.len() {
                return Err(IngestError::Shape {
                    path: lp.clone(),
                    message: format!(
                        "{} labels for {} samples in {}",
                        labels.len(),
                        table.rows.len(),
                        path.display()
                    ),
                });
            }
            Some(labels)
        }
        None => None,
    };
    let features: Vec<usize> = (0..width).filter(|&c| Some(c) != response_col).collect();
    if features.is_empty() {
        return Err(IngestError::Shape {
            path: path.clone(),
            message: "no feature columns".into(),
        });
    }
    let mut columns = vec![Vec::with_capacity(table.rows.len()); features.len()];
    let mut y = Vec::with_capacity(table.rows.len());
    let mut warnings = Vec::new();
    let mut dropped = 0;
    for (s, (line, fields)) in table.rows.iter().enumerate() {
        let response = match (response_col, &labels) {
            (Some(c), _) => cell(path, *line, c, &fields[c], spec.na_policy)?,
            (None, Some(l)) => l[s],
            (None, None) => unreachable!("validated above"),
        };
        let mut values = Vec::with_capacity(features.len());
        let mut missing = response.is_none().then_some("response".to_string());
        for &c in &features {
            match cell(path, *line, c, &fields[c], spec.na_policy)? {
                Some(v) => values.push(v),
                None => {
                    missing.get_or_insert_with(|| format!("column {}", c + 1));
                }
            }
        }
        match (missing, response) {
            (None, Some(r)) => {
                for (col, v) in columns.iter_mut().zip(values) {
                    col.push(v);
                }
                y.push(r);
            }
            (what, _) => {
                dropped += 1;
                warnings.push(format!(
                    "{}:{line}: dropped sample with missing value in {}",
                    path.display(),
                    what.unwrap_or_default()
                ));
            }
        }
    }
    let names = table
        .header
        .map(|h| features.iter().map(|&c| h[c].clone()).collect());
    finish(Assembled {
        columns,
        y,
        names,
        warnings,
        dropped,
    })
}

fn ingest_features(spec: &IngestSpec) -> Result<Ingested, IngestError> {
    let path = &spec.path;
    let table = read_table(path, spec.delimiter as u8, spec.has_header)?;
    let width = table.rows.first().map_or(0, |r| r.1.len());
    if width < 2 {
        return Err(IngestError::Shape {
            path: path.clone(),
            message: "features_as_rows needs a name column and at least one sample column".into(),
        });
    }
    let n_samples = width - 1;
    let row_names: Vec<String> = table.rows.iter().map(|r| r.1[0].clone()).collect();
    let response_row = match &spec.response {
        Some(r) => Some(resolve(r, Some(&row_names), row_names.len())?),
        None => None,
    };
    let mut labels = match &spec.label_path {
        Some(lp) => {
            let labels = read_labels(spec, lp)?;
            if labels.len() != n_samples {
                return Err(IngestError::Shape {
                    path: lp.clone(),
                    message: format!("{} labels for {n_samples} sample columns", labels.len()),
                });
            }
            labels
        }
        None => Vec::new(),
    };
    let mut rows: Vec<Vec<Option<f64>>> = Vec::with_capacity(table.rows.len());
    for (line, fields) in &table.rows {
        let mut vals = Vec::with_capacity(n_samples);
        for (c, raw) in fields.iter().enumerate().skip(1) {
            vals.push(cell(path, *line, c, raw, spec.na_policy)?);
        }
        rows.push(vals);
    }
    if let Some(r) = response_row {
        labels = rows.remove(r);
    }
    let mut names: Vec<String> = row_names;
    if let Some(r) = response_row {
        names.remove(r);
    }
    if rows.is_empty() {
        return Err(IngestError::Shape {
            path: path.clone(),
            message: "no feature rows".into(),
        });
    }
    let sample_name = |s: usize| {
        table
            .header
            .as_ref()
            .map(|h| h[s + 1].clone())
            .unwrap_or_else(|| format!("sample {}", s + 1))
    };
    let mut keep = Vec::with_capacity(n_samples);
    let mut warnings = Vec::new();
    for s in 0..n_samples {
        let missing = labels[s].is_none() || rows.iter().any(|r| r[s].is_none());
        if missing {
            warnings.push(format!(
                "{}: dropped {} with a missing value",
                path.display(),
                sample_name(s)
            ));
        } else {
            keep.push(s);
        }
    }
    let columns = rows
        .iter()
        .map(|r| keep.iter().map(|&s| r[s].unwrap_or(f64::NAN)).collect())
        .collect();
    let y = keep.iter().map(|&s| labels[s].unwrap_or(f64::NAN)).collect();
    finish(Assembled {
        columns,
        y,
        names: Some(names),
        warnings,
        dropped: n_samples - keep.len(),
    })
}
