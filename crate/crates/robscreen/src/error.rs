use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Io = 1,
    Config = 2,
    Ingest = 3,
    Degenerate = 4,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Open {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        source: csv::Error,
    },
    #[error("{path}:{line}:{column}: cannot parse {value:?} as a number")]
    Parse {
        path: PathBuf,
        line: u64,
        column: usize,
        value: String,
    },
    #[error("{path}:{line}:{column}: missing value {value:?} (na_policy = error)")]
    Missing {
        path: PathBuf,
        line: u64,
        column: usize,
        value: String,
    },
    #[error("{path}: {message}")]
    Shape { path: PathBuf, message: String },
    #[error("duplicate feature name {0:?}")]
    DuplicateName(String),
    #[error("response column {0} not found")]
    ResponseNotFound(String),
    #[error("{0}")]
    Data(#[from] robscreen_core::Error),
}

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("min_expressed_fraction = {0} is outside [0, 1]")]
    Fraction(f64),
    #[error("cannot parse predicate {0:?}; expected `value <op> <number>` with op in >, >=, !=")]
    Predicate(String),
    #[error("every feature was removed by the expression filter (min_expressed_fraction = {0})")]
    Empty(f64),
}

/// Top-level failure; the variant decides the exit status.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("ingestion: {0}")]
    Ingest(#[from] IngestError),
    #[error("filter: {0}")]
    Filter(#[from] FilterError),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("compute: {0}")]
    Compute(robscreen_core::Error),
    #[error("output: {0}")]
    Output(#[from] anyhow::Error),
}

impl AppError {
    pub fn config(msg: impl std::fmt::Display) -> Self {
        AppError::Config(msg.to_string())
    }

    pub fn exit_status(&self) -> ExitStatus {
        match self {
            AppError::Config(_) => ExitStatus::Config,
            AppError::Ingest(_) | AppError::Filter(_) => ExitStatus::Ingest,
            AppError::Degenerate(_) => ExitStatus::Degenerate,
            AppError::Compute(e) => match e.root() {
                robscreen_core::Error::DegenerateProfile(_) => ExitStatus::Degenerate,
                robscreen_core::Error::Domain { .. } | robscreen_core::Error::Design(_) => {
                    ExitStatus::Config
                }
                _ => ExitStatus::Io,
            },
            AppError::Output(_) => ExitStatus::Io,
        }
    }
}

impl From<robscreen_core::Error> for AppError {
    fn from(e: robscreen_core::Error) -> Self {
        AppError::Compute(e)
    }
}
