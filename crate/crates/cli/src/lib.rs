//! Batch harness for the bound catalog: sample ensembles, evaluate bounds,
//! aggregate slack statistics, and write JSON or CSV reports.

// Range checks are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;
mod trials;

pub use commands::{compare, eval, sharpness, verify, EvalConfig, SharpnessConfig};
pub use config::{DimRange, OutputFormat, RunConfig, THREADS_ENV};
pub use report::{
    BoundSummary, Comparison, SharpnessResult, StartResult, SuiteReport, TrialDifference, Witness, SCHEMA_VERSION,
};

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] radiuslab_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl HarnessError {
    /// I/O problems writing or reading files, as opposed to bad input.
    pub fn is_io(&self) -> bool {
        matches!(self, HarnessError::Io { .. } | HarnessError::Csv(_))
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
