//! Waiting-time experiments.
//!
//! The waiting time of a policy at level `alpha` is the first round after
//! which every influencer's true remaining potential has dropped to at most
//! `alpha` times its initial expected spread. An omniscient policy wears each
//! influencer down in isolation, so its waiting time decomposes into a sum of
//! per-influencer pull counts; the theorem bound compares the two.

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;

use crate::env::{fatigue_filter, Environment, FatigueFunction, StarEnvironment};
use crate::graph::NodeId;
use crate::policies::initialization_schedule;

use super::campaign::{select_round, CampaignConfig, CampaignState};
use super::HarnessError;

/// One replication of a waiting-time experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct WaitingTimeRun {
    pub run: u64,
    pub policy_time: u64,
    pub oracle_time: u64,
    /// Theorem bound computed from an oracle run at the reduced level; absent
    /// when the bound's preconditions do not hold.
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

fn all_below(
    env: &Environment,
    activated: &HashSet<NodeId>,
    lambdas: &[f64],
    alpha: f64,
) -> Result<bool, HarnessError> {
    for (k, &lambda) in lambdas.iter().enumerate() {
        if env.remaining_potential(k, activated)? > alpha * lambda {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs the configured policy on a star environment until every influencer's
/// remaining potential is at most `alpha` times its first-pull expectation,
/// and returns that round (0 when the condition already holds before any
/// pull, as with `alpha >= 1`). Errors after `max_rounds` rounds.
pub fn measure_waiting_time(
    config: &CampaignConfig,
    env: &mut Environment,
    alpha: f64,
    max_rounds: u64,
    rng: &mut ChaCha8Rng,
) -> Result<u64, HarnessError> {
    let star = env.as_star().ok_or(HarnessError::Config(
        "waiting-time measurement requires a star environment".into(),
    ))?;
    let k = star.influencer_count();
    let lambdas: Vec<f64> = (0..k).map(|i| star.expected_first_spread(i)).collect();
    env.reset();
    let mut state = CampaignState::new(k);
    if all_below(env, &state.activated, &lambdas, alpha)? {
        return Ok(0);
    }
    let schedule = initialization_schedule(k, config.seeds_per_round)?;
    for t in 1..=max_rounds {
        let selected = if (t as usize) <= schedule.len() {
            schedule[t as usize - 1].clone()
        } else {
            select_round(
                config.policy,
                &state,
                env,
                t,
                config.seeds_per_round,
                &config.gamma,
                config.mc_samples,
                config.oracle_fatigue_aware,
                rng,
            )?
        };
        let spread = env.pull_set(&selected, rng)?;
        state.activated.extend(spread.nodes());
        state.stats.record_trial(&selected, &spread);
        state.round = t;
        if all_below(env, &state.activated, &lambdas, alpha)? {
            return Ok(t);
        }
    }
    Err(HarnessError::WaitingTimeExceeded { cap: max_rounds })
}

/// One replication of the omniscient waiting time: every influencer is
/// pulled in isolation until its own remaining potential is at most `alpha`
/// times its first-pull expectation; the result is the total pull count.
pub fn oracle_waiting_time(
    star: &StarEnvironment,
    alpha: f64,
    gamma: &FatigueFunction,
    max_pulls: u64,
    rng: &mut ChaCha8Rng,
) -> Result<u64, HarnessError> {
    let mut total = 0u64;
    for k in 0..star.influencer_count() {
        let lambda = star.expected_first_spread(k);
        let mut activated: HashSet<NodeId> = HashSet::new();
        let mut pulls = 0u64;
        loop {
            let potential = star.remaining_potential(k, &activated, gamma, pulls + 1)?;
            if potential <= alpha * lambda {
                break;
            }
            if pulls >= max_pulls {
                return Err(HarnessError::WaitingTimeExceeded { cap: max_pulls });
            }
            pulls += 1;
            let raw = star.pull(k, rng)?;
            let worn = fatigue_filter(&raw, gamma, pulls, rng);
            activated.extend(worn.nodes());
        }
        total += pulls;
    }
    Ok(total)
}

/// The waiting-time guarantee: with `tau` an oracle waiting time at the
/// reduced level, the policy's waiting time is at most
/// `tau + K * lambda_max * ln(4 tau + 11 K lambda_max) + 2K`
/// with probability at least `1 - 2K / lambda_max`.
pub fn waiting_time_bound(oracle_time: u64, influencer_count: usize, lambda_max: f64) -> f64 {
    let tau = oracle_time as f64;
    let k = influencer_count as f64;
    tau + k * lambda_max * (4.0 * tau + 11.0 * k * lambda_max).ln() + 2.0 * k
}

/// The reduced level `alpha - 13 / lambda_min` the bound's oracle run must
/// use. Errors when the preconditions (`lambda_min >= 13` and
/// `alpha >= 13 / lambda_min`) fail.
pub fn reduced_alpha(star: &StarEnvironment, alpha: f64) -> Result<f64, HarnessError> {
    let lambda_min = (0..star.influencer_count())
        .map(|k| star.expected_first_spread(k))
        .fold(f64::INFINITY, f64::min);
    if !(lambda_min >= 13.0) {
        return Err(HarnessError::BoundPrecondition(format!(
            "smallest expected spread {lambda_min} is below 13"
        )));
    }
    let shift = 13.0 / lambda_min;
    if alpha < shift {
        return Err(HarnessError::BoundPrecondition(format!(
            "alpha {alpha} is below 13 / lambda_min = {shift}"
        )));
    }
    Ok(alpha - shift)
}

pub(crate) fn lambda_max(star: &StarEnvironment) -> f64 {
    (0..star.influencer_count())
        .map(|k| star.expected_first_spread(k))
        .fold(0.0, f64::max)
}
