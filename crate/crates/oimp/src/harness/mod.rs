//! Campaign runner, experiment drivers, synthetic generators and the CLI.

pub mod campaign;
pub mod cli;
pub mod config;
pub mod generate;
pub mod records;
pub mod study;
pub mod waiting;

use std::io;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::env::EnvError;
use crate::estimation::EstimationError;
use crate::extraction::ExtractionError;
use crate::graph::GraphError;
use crate::policies::PolicyError;

pub use campaign::{run_campaign, CampaignConfig, CampaignState, PolicyKind, RoundRecord};
pub use generate::{
    calibrated_probability, calibrated_star, synthetic_graph, tiered_cascade_log,
    CalibratedStarParams, TieredLogProfile,
};
pub use records::{parse_records_csv, records_to_csv, write_records_csv, CSV_HEADER};
pub use study::{estimator_study, estimator_study_on, EstimatorStudyRow};
pub use waiting::{
    measure_waiting_time, oracle_waiting_time, reduced_alpha, waiting_time_bound, WaitingTimeRun,
};

/// Reserved stream for instance generation (weight assignment, synthetic
/// environments); replication streams are the run indices themselves.
pub const GENERATOR_STREAM: u64 = u64::MAX;

/// The random stream for one replication: all runs derive from the base seed
/// but occupy distinct ChaCha streams, so runs are independent, parallelise
/// freely, and adding runs never perturbs earlier ones.
pub fn replication_rng(base_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(stream);
    rng
}

/// Top-level harness error.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Extraction(#[from] ExtractionError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("line {line}: malformed csv row `{text}`")]
    Csv { line: usize, text: String },
    #[error("waiting time exceeded the cap of {cap} rounds")]
    WaitingTimeExceeded { cap: u64 },
    #[error("waiting-time bound precondition failed: {0}")]
    BoundPrecondition(String),
}
