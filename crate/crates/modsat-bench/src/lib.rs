//! Benchmark harness: timed solver runs over datasets, PAR-2 scoring,
//! desk-scale instance generation, persistent run reports and a random
//! configuration tuner.

pub mod generate;
pub mod manifest;
pub mod par2;
pub mod report;
pub mod runner;
pub mod tune;

use thiserror::Error;

pub use generate::{generate_formula, write_dataset, Family};
pub use manifest::DatasetManifest;
pub use par2::{par2, speedup, Par2Report, RunRecord};
pub use runner::{run_dataset, run_instance, LoadedDataset, TimeModel};
pub use tune::tune_random;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("empty record set")]
    EmptyRecords,
    #[error("speedup undefined: max(v_a, v_b) = 0")]
    ZeroSpeedupBase,
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("tuning budget must be at least 1")]
    ZeroBudget,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("dimacs: {0}")]
    Dimacs(#[from] modsat_core::cnf::DimacsError),
}
