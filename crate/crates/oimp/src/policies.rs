//! Seed-selection strategies.
//!
//! Every policy implements the same contract: a deterministic initialization
//! schedule that plays each influencer once, then per-round selection of `L`
//! influencers. Ties are always broken towards the lowest influencer index so
//! that runs are reproducible.

use std::collections::HashSet;

use rand::Rng;
use thiserror::Error;

use crate::env::{Environment, FatigueFunction, InfluencerId};
use crate::estimation::{CampaignStats, EstimationError};
use crate::extraction;
use crate::graph::{Graph, NodeId};

/// Errors from policy preconditions.
#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("cannot seed {seeds} influencers per round out of {influencers}")]
    InvalidSeedCount { seeds: usize, influencers: usize },
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error("the {policy} policy requires a {requirement} environment")]
    Unsupported {
        policy: &'static str,
        requirement: &'static str,
    },
}

/// One round's selection: exactly `L` distinct influencers in ascending
/// order, plus the per-influencer scores the choice was based on (when the
/// policy computes any).
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDecision {
    pub selected: Vec<InfluencerId>,
    pub indices: Option<Vec<f64>>,
}

fn check_seed_count(seeds: usize, influencers: usize) -> Result<(), PolicyError> {
    if seeds == 0 || seeds > influencers {
        return Err(PolicyError::InvalidSeedCount { seeds, influencers });
    }
    Ok(())
}

/// The `L` influencers with the largest scores, ties to the lowest index,
/// returned in ascending order.
pub(crate) fn top_by_score(scores: &[f64], l: usize) -> Vec<InfluencerId> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut selected = order[..l].to_vec();
    selected.sort_unstable();
    selected
}

/// Deterministic initialization: every influencer is played exactly once.
/// With `l > 1` this takes `ceil(k / l)` rounds of `l` influencers, the final
/// round padded with the lowest-index already-played influencers when `k` is
/// not a multiple of `l`.
pub fn initialization_schedule(
    k: usize,
    l: usize,
) -> Result<Vec<Vec<InfluencerId>>, PolicyError> {
    check_seed_count(l, k)?;
    let rounds = k.div_ceil(l);
    let mut schedule = Vec::with_capacity(rounds);
    let mut next = 0;
    let mut pad = 0;
    for _ in 0..rounds {
        let mut round = Vec::with_capacity(l);
        for _ in 0..l {
            if next < k {
                round.push(next);
                next += 1;
            } else {
                round.push(pad);
                pad += 1;
            }
        }
        round.sort_unstable();
        schedule.push(round);
    }
    Ok(schedule)
}

/// Optimistic selection: the `L` influencers with the largest upper
/// confidence indices. Every influencer must have been pulled at least once.
pub fn select_top_ucb(
    stats: &CampaignStats,
    t: u64,
    l: usize,
) -> Result<PolicyDecision, PolicyError> {
    select_top_fatigue_ucb(stats, t, l, &FatigueFunction::ConstantOne)
}

/// Optimistic selection with fatigue-aware indices.
pub fn select_top_fatigue_ucb(
    stats: &CampaignStats,
    t: u64,
    l: usize,
    gamma: &FatigueFunction,
) -> Result<PolicyDecision, PolicyError> {
    let k = stats.influencer_count();
    check_seed_count(l, k)?;
    let indices = (0..k)
        .map(|i| stats.fatigue_ucb_index(i, t, gamma))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolicyDecision {
        selected: top_by_score(&indices, l),
        indices: Some(indices),
    })
}

/// Uniform sample of `L` distinct influencers.
pub fn select_random<R: Rng>(
    k: usize,
    l: usize,
    rng: &mut R,
) -> Result<PolicyDecision, PolicyError> {
    check_seed_count(l, k)?;
    // partial Fisher-Yates
    let mut pool: Vec<InfluencerId> = (0..k).collect();
    for i in 0..l {
        let j = rng.gen_range(i..k);
        pool.swap(i, j);
    }
    let mut selected = pool[..l].to_vec();
    selected.sort_unstable();
    Ok(PolicyDecision {
        selected,
        indices: None,
    })
}

/// Degree baseline: ranks influencer seed nodes by their out-degree counted
/// over not-yet-activated targets only.
pub fn select_max_degree(
    graph: &Graph,
    seeds: &[NodeId],
    activated: &HashSet<NodeId>,
    l: usize,
) -> Result<PolicyDecision, PolicyError> {
    check_seed_count(l, seeds.len())?;
    let scores: Vec<f64> = seeds
        .iter()
        .map(|&s| {
            graph
                .out_edges(s)
                .iter()
                .filter(|&&(v, _)| !activated.contains(&v))
                .count() as f64
        })
        .collect();
    Ok(PolicyDecision {
        selected: top_by_score(&scores, l),
        indices: Some(scores),
    })
}

/// Omniscient baseline. On a star environment it maximises the exact
/// remaining potential; on a graph environment it greedily maximises the
/// Monte-Carlo estimated marginal spread over not-yet-activated nodes, with
/// `mc_samples` cascades per evaluation. Replay environments expose no ground
/// truth, so the oracle is unsupported there.
///
/// With `fatigue_aware` set, scores are damped by the environment's weariness
/// factor for each influencer's next pull.
pub fn select_oracle<R: Rng>(
    env: &Environment,
    activated: &HashSet<NodeId>,
    l: usize,
    mc_samples: usize,
    fatigue_aware: bool,
    rng: &mut R,
) -> Result<PolicyDecision, PolicyError> {
    let count = env.influencer_count();
    check_seed_count(l, count)?;
    let one = FatigueFunction::ConstantOne;
    let damping = |k: InfluencerId| -> f64 {
        if fatigue_aware {
            env.fatigue_function()
                .unwrap_or(&one)
                .value(env.next_pull(k))
        } else {
            1.0
        }
    };

    if let Some(star) = env.as_star() {
        let indices: Vec<f64> = (0..count)
            .map(|k| {
                damping(k)
                    * star
                        .remaining_potential(k, activated, &one, 1)
                        .expect("influencer index in range")
            })
            .collect();
        return Ok(PolicyDecision {
            selected: top_by_score(&indices, l),
            indices: Some(indices),
        });
    }

    if let Some((graph, model, seeds)) = env.as_graph() {
        let mut chosen: Vec<InfluencerId> = Vec::new();
        let mut chosen_seeds: Vec<(InfluencerId, NodeId)> = Vec::new();
        let mut base_value = 0.0;
        let mut first_round_gains = vec![0.0; count];
        for pick in 0..l {
            let mut best: Option<(f64, InfluencerId)> = None;
            for k in 0..count {
                if chosen.contains(&k) {
                    continue;
                }
                let mut trial = chosen_seeds.clone();
                trial.push((k, seeds[k]));
                let mean = extraction::mc_mean_new_spread(
                    graph, model, &trial, activated, mc_samples, rng,
                );
                let gain = damping(k) * (mean - base_value);
                if pick == 0 {
                    first_round_gains[k] = gain;
                }
                if best.map_or(true, |(bg, _)| gain > bg) {
                    best = Some((gain, k));
                }
            }
            let (_, k) = best.expect("at least one candidate");
            chosen.push(k);
            chosen_seeds.push((k, seeds[k]));
            if pick + 1 < l {
                base_value = extraction::mc_mean_new_spread(
                    graph,
                    model,
                    &chosen_seeds,
                    activated,
                    mc_samples,
                    rng,
                );
            }
        }
        chosen.sort_unstable();
        return Ok(PolicyDecision {
            selected: chosen,
            indices: Some(first_round_gains),
        });
    }

    Err(PolicyError::Unsupported {
        policy: "oracle",
        requirement: "star or graph",
    })
}
