//! Data ingestion, reports and the command-line driver around
//! [`robscreen_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod filter;
pub mod ingest;
pub mod report;

pub use error::{AppError, ExitStatus};
