//! Monte-Carlo experiment driver: scenario configs, sweep execution over the
//! benchmark schemes, result persistence, and randomized oracle checks.

use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::GeometryError;

pub mod checks;
pub mod config;
pub mod io;
pub mod sweep;

pub use checks::{run_oracle_checks, CheckOutcome};
pub use config::{dbm_to_watts, watts_to_dbm, OutagePolicy, ScenarioConfig, Scheme};
pub use io::{read_manifest, write_results, RunManifest, WrittenFiles};
pub use sweep::{
    run_realization, sweep_pmax, sweep_rmin, RealizationRecord, SchemePoint, SweepAxis, SweepPoint,
    SweepResult,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("output directory {path} does not exist")]
    MissingOutputDir { path: PathBuf },
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}")]
    Csv {
        path: PathBuf,
        #[source]
        source: Box<csv::Error>,
    },
    #[error("json error")]
    Json(#[from] serde_json::Error),
}
