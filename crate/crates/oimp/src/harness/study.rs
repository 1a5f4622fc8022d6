//! Estimator convergence study: Good-Turing against the Beta-posterior
//! baseline on a star environment with known ground truth.

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;

use crate::env::{FatigueFunction, StarEnvironment};
use crate::estimation::{BayesianNodeBelief, CampaignStats};
use crate::graph::NodeId;

use super::generate::{calibrated_star, CalibratedStarParams};
use super::{replication_rng, HarnessError};

/// One measurement: both estimates of the remaining potential next to the
/// ground truth, after `pull` pulls of the single influencer.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorStudyRow {
    pub run: u64,
    pub pull: u64,
    pub true_remaining: f64,
    pub good_turing: f64,
    pub bayesian: f64,
}

/// Runs the study on a fixed star environment (single influencer, index 0).
/// The Bayesian baseline starts from a Beta(prior_a, prior_b) on every
/// support node.
pub fn estimator_study_on(
    env: &StarEnvironment,
    pulls: u64,
    run: u64,
    prior: (f64, f64),
    rng: &mut ChaCha8Rng,
) -> Result<Vec<EstimatorStudyRow>, HarnessError> {
    let mut stats = CampaignStats::new(env.influencer_count());
    let mut belief = BayesianNodeBelief::from_star(env, prior.0, prior.1)?;
    let mut activated: HashSet<NodeId> = HashSet::new();
    let mut rows = Vec::with_capacity(pulls as usize);
    for n in 1..=pulls {
        let spread = env.pull(0, rng)?;
        belief.observe_trial(0, &spread);
        stats.record_trial(&[0], &spread);
        activated.extend(spread.nodes());
        rows.push(EstimatorStudyRow {
            run,
            pull: n,
            true_remaining: env.remaining_potential(
                0,
                &activated,
                &FatigueFunction::ConstantOne,
                1,
            )?,
            good_turing: stats.good_turing(0)?,
            bayesian: belief.remaining_estimate(0, &activated),
        });
    }
    Ok(rows)
}

/// Runs the study over independent replications, drawing a fresh calibrated
/// star (one influencer, `support_size` nodes) per run.
pub fn estimator_study(
    support_size: usize,
    pulls: u64,
    runs: u64,
    base_seed: u64,
    params: &CalibratedStarParams,
    prior: (f64, f64),
) -> Result<Vec<EstimatorStudyRow>, HarnessError> {
    let mut rows = Vec::with_capacity((runs * pulls) as usize);
    for run in 0..runs {
        let mut rng = replication_rng(base_seed, run);
        let env = calibrated_star(&[support_size], params, &mut rng);
        rows.extend(estimator_study_on(&env, pulls, run, prior, &mut rng)?);
    }
    Ok(rows)
}
