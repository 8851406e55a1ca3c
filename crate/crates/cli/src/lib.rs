//! Library behind the `wlc` binary, so tests can drive commands in-process.

pub mod commands;
pub mod config;
pub mod element;
pub mod report;

use thiserror::Error;

use wlc_core::anomaly::AnomalyError;
use wlc_core::generators::CatalogError;
use wlc_core::phasespace::{LawError, PhaseError};
use wlc_core::solutions::FamilyError;
use wlc_core::worldline::WorldlineError;

pub use commands::run;

/// Everything that ends a run with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] CatalogError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Anomaly(#[from] AnomalyError),
    #[error(transparent)]
    Worldline(#[from] WorldlineError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
}
