//! Online influencer marketing with persistence.
//!
//! A campaign repeatedly seeds influencers into an unknown diffusion medium
//! and is rewarded only for *newly* activated nodes, so the value of every
//! influencer decays as its audience saturates. This crate provides:
//!
//! - bandit policies driven by a Good-Turing estimate of each influencer's
//!   *remaining potential* (the expected number of fresh activations one more
//!   cascade would bring), with and without a known influencer-fatigue model;
//! - diffusion environments to run them against: exact star models,
//!   independent-cascade and linear-threshold simulation on weighted graphs,
//!   and replay of recorded cascades;
//! - influencer-extraction heuristics over a known graph (degree ranking,
//!   greedy cover, DivRank, lazy-greedy Monte-Carlo influence maximisation);
//! - a reproducible experiment harness with a CLI, covering campaign runs,
//!   estimator studies and waiting-time experiments.
//!
//! The narrative guide lives in `book/`; its code snippets are compiled as
//! doc-tests, so the book and the library cannot drift apart.
//!
//! ```
//! use oimp::env::{Environment, StarEnvironment};
//! use oimp::harness::{run_campaign, replication_rng, CampaignConfig, PolicyKind};
//!
//! // two influencers with known audiences and activation probabilities
//! let star = StarEnvironment::new(
//!     vec![vec![0, 1, 2], vec![3, 4]],
//!     vec![vec![0.8, 0.4, 0.2], vec![0.9, 0.9]],
//! )?;
//! let mut env = Environment::star(star);
//!
//! let config = CampaignConfig::new(PolicyKind::GtUcb, 10, 1);
//! let records = run_campaign(&config, &mut env, 0, &mut replication_rng(7, 0))?;
//! assert_eq!(records.len(), 10);
//! # Ok::<(), oimp::harness::HarnessError>(())
//! ```

pub mod env;
pub mod estimation;
pub mod extraction;
pub mod graph;
pub mod harness;
pub mod policies;

pub use env::{
    fatigue_filter, ic_cascade, lt_cascade, CascadeLog, CascadeModel, EnvError, Environment,
    FatigueFunction, GraphEnvironment, InfluencerId, Spread, StarEnvironment,
};
pub use estimation::{
    bias_interval, confidence_radius, BayesianNodeBelief, CampaignStats, EstimationError,
    InfluencerStats,
};
pub use extraction::{DivRankParams, ExtractionError, ExtractionResult};
pub use graph::{load_edge_list, parse_edge_list, Graph, GraphError, NodeId};
pub use harness::{CampaignConfig, HarnessError, PolicyKind, RoundRecord};
pub use policies::{PolicyDecision, PolicyError};

// The guide's code snippets double as doc-tests.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(model, "../../../book/src/model.md");
    chapter!(environments, "../../../book/src/environments.md");
    chapter!(estimation, "../../../book/src/estimation.md");
    chapter!(policies, "../../../book/src/policies.md");
    chapter!(fatigue, "../../../book/src/fatigue.md");
    chapter!(extraction, "../../../book/src/extraction.md");
    chapter!(experiments, "../../../book/src/experiments.md");
}
