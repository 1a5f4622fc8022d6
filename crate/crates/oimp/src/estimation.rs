//! Campaign statistics and the estimators built on them.
//!
//! The central quantity is an influencer's *remaining potential*: the
//! expected number of not-yet-activated nodes one more cascade from it would
//! reach. It is estimated by a Good-Turing statistic — the proportion of
//! *hapaxes* among the influencer's pulls, a hapax being a node activated
//! exactly once by that influencer and never by any other. Under fatigue the
//! hapax contributions are reweighted by `gamma(n+1)/gamma(i)`, where `i` is
//! the pull at which the hapax occurred, and spread sizes are rescaled the
//! same way; the constant-one weariness function recovers the plain
//! estimators bit for bit because both share one code path.
//!
//! The UCB index adds to the estimate an exploration bonus of
//! `(1+sqrt(2)) * sqrt(lambda_hat * ln(4t) / n) + ln(4t) / (3n)` with
//! `lambda_hat` the (rescaled) mean spread size. All logarithms are natural.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::env::{FatigueFunction, InfluencerId, Spread, StarEnvironment};
use crate::graph::NodeId;

/// Errors from estimator preconditions.
#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("influencer {influencer} has never been pulled")]
    NeverPulled { influencer: usize },
    #[error("round index must be >= 1")]
    InvalidRound,
    #[error("confidence level {delta} outside the formula domain (0, 4)")]
    InvalidConfidence { delta: f64 },
    #[error("prior parameters must be positive, got ({a}, {b})")]
    InvalidPrior { a: f64, b: f64 },
}

/// Bookkeeping for a single influencer: pull count, per-node activation
/// counts, the pull index of each current hapax, and the spread-size history.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InfluencerStats {
    pulls: u64,
    counts: BTreeMap<NodeId, u32>,
    hapax_round: BTreeMap<NodeId, u64>,
    spread_sizes: Vec<u64>,
}

impl InfluencerStats {
    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn spread_sizes(&self) -> &[u64] {
        &self.spread_sizes
    }

    /// Activation count of `node` by this influencer.
    pub fn count(&self, node: NodeId) -> u32 {
        self.counts.get(&node).copied().unwrap_or(0)
    }

    /// Pull index at which `node` was activated, valid while its count is
    /// exactly one.
    pub fn hapax_round(&self, node: NodeId) -> Option<u64> {
        self.hapax_round.get(&node).copied()
    }
}

/// Statistics for a whole campaign: one [`InfluencerStats`] per influencer
/// plus global activation counts used for the cross-influencer hapax
/// exclusion. Owned by a single run; estimators are pure queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CampaignStats {
    stats: Vec<InfluencerStats>,
    global_counts: BTreeMap<NodeId, u32>,
}

impl CampaignStats {
    pub fn new(influencer_count: usize) -> Self {
        CampaignStats {
            stats: vec![InfluencerStats::default(); influencer_count],
            global_counts: BTreeMap::new(),
        }
    }

    pub fn influencer_count(&self) -> usize {
        self.stats.len()
    }

    pub fn influencer(&self, k: InfluencerId) -> &InfluencerStats {
        &self.stats[k]
    }

    /// Times `node` was activated by anyone.
    pub fn global_count(&self, node: NodeId) -> u32 {
        self.global_counts.get(&node).copied().unwrap_or(0)
    }

    /// Records one trial. Every seeded influencer is charged a pull and gets
    /// the size of its attributed sub-spread appended (zero when it activated
    /// nothing); per-node counts and hapax rounds are updated from the
    /// spread's attribution.
    pub fn record_trial(&mut self, seeded: &[InfluencerId], spread: &Spread) {
        for &k in seeded {
            let st = &mut self.stats[k];
            st.pulls += 1;
            st.spread_sizes
                .push(spread.attributed_count(k) as u64);
        }
        for &(u, k) in spread.entries() {
            let st = &mut self.stats[k];
            let c = st.counts.entry(u).or_insert(0);
            *c += 1;
            if *c == 1 {
                st.hapax_round.insert(u, st.pulls);
            } else {
                st.hapax_round.remove(&u);
            }
            *self.global_counts.entry(u).or_insert(0) += 1;
        }
    }

    fn checked(&self, k: InfluencerId) -> Result<&InfluencerStats, EstimationError> {
        let st = &self.stats[k];
        if st.pulls == 0 {
            return Err(EstimationError::NeverPulled { influencer: k });
        }
        Ok(st)
    }

    /// Good-Turing estimate of `k`'s remaining potential: the proportion of
    /// its pulls that produced a hapax (nodes activated exactly once by `k`
    /// and never by any other influencer).
    pub fn good_turing(&self, k: InfluencerId) -> Result<f64, EstimationError> {
        self.fatigue_good_turing(k, &FatigueFunction::ConstantOne)
    }

    /// Fatigue-aware Good-Turing estimate: each hapax observed at pull `i`
    /// contributes `gamma(n+1) / gamma(i)`.
    pub fn fatigue_good_turing(
        &self,
        k: InfluencerId,
        gamma: &FatigueFunction,
    ) -> Result<f64, EstimationError> {
        let st = self.checked(k)?;
        let next = gamma.value(st.pulls + 1);
        let mut sum = 0.0;
        for (&u, &i) in &st.hapax_round {
            if self.global_counts[&u] == 1 {
                sum += next / gamma.value(i);
            }
        }
        Ok(sum / st.pulls as f64)
    }

    /// Mean observed spread size of `k`.
    pub fn mean_spread(&self, k: InfluencerId) -> Result<f64, EstimationError> {
        self.fatigue_mean_spread(k, &FatigueFunction::ConstantOne)
    }

    /// Fatigue-corrected expected-spread estimate:
    /// `gamma(n+1)/n * sum over pulls s of |S_s| / gamma(s)`.
    pub fn fatigue_mean_spread(
        &self,
        k: InfluencerId,
        gamma: &FatigueFunction,
    ) -> Result<f64, EstimationError> {
        let st = self.checked(k)?;
        let mut sum = 0.0;
        for (idx, &size) in st.spread_sizes.iter().enumerate() {
            sum += size as f64 / gamma.value(idx as u64 + 1);
        }
        Ok(gamma.value(st.pulls + 1) / st.pulls as f64 * sum)
    }

    /// Upper confidence index of `k` at round `t`.
    pub fn ucb_index(&self, k: InfluencerId, t: u64) -> Result<f64, EstimationError> {
        self.fatigue_ucb_index(k, t, &FatigueFunction::ConstantOne)
    }

    /// Fatigue-aware upper confidence index of `k` at round `t`.
    pub fn fatigue_ucb_index(
        &self,
        k: InfluencerId,
        t: u64,
        gamma: &FatigueFunction,
    ) -> Result<f64, EstimationError> {
        if t == 0 {
            return Err(EstimationError::InvalidRound);
        }
        let r_hat = self.fatigue_good_turing(k, gamma)?;
        let lam = self.fatigue_mean_spread(k, gamma)?;
        let n = self.stats[k].pulls;
        Ok(ucb_formula(r_hat, lam, n, t))
    }
}

pub(crate) fn ucb_formula(r_hat: f64, lambda_hat: f64, pulls: u64, t: u64) -> f64 {
    let n = pulls as f64;
    let log4t = (4.0 * t as f64).ln();
    r_hat + (1.0 + std::f64::consts::SQRT_2) * (lambda_hat * log4t / n).sqrt()
        + log4t / (3.0 * n)
}

/// Confidence radius `beta_n` for the remaining-potential estimate after `n`
/// pulls: with probability at least `1 - delta` the true potential lies in
/// `[estimate - beta_n - lambda/n, estimate + beta_n]`, where `lambda` is the
/// expected first-spread size (under fatigue, substitute
/// `gamma(n+1) * lambda`).
///
/// The formula is defined for any `delta` in `(0, 4)` even though only values
/// below 1 are meaningful confidence levels.
pub fn confidence_radius(n: u64, expected_spread: f64, delta: f64) -> Result<f64, EstimationError> {
    if n == 0 {
        return Err(EstimationError::NeverPulled { influencer: 0 });
    }
    if !(delta > 0.0 && delta < 4.0) {
        return Err(EstimationError::InvalidConfidence { delta });
    }
    let nf = n as f64;
    let log_term = (4.0 / delta).ln();
    Ok((1.0 + std::f64::consts::SQRT_2) * (expected_spread * log_term / nf).sqrt()
        + log_term / (3.0 * nf))
}

/// Interval known to contain the estimator bias `E[R_n] - E[estimate]`:
/// `[-gamma(n+1) * lambda / n, 0]`. The estimate never undershoots in
/// expectation and overshoots by at most a vanishing amount.
pub fn bias_interval(expected_spread: f64, n: u64, gamma: &FatigueFunction) -> (f64, f64) {
    (-gamma.value(n + 1) * expected_spread / n as f64, 0.0)
}

/// Beta-posterior baseline for the remaining potential. Requires knowing each
/// influencer's support, so it only applies to star environments; it exists
/// as the comparison point for the Good-Turing estimator.
#[derive(Debug, Clone)]
pub struct BayesianNodeBelief {
    supports: Vec<Vec<NodeId>>,
    params: Vec<Vec<(f64, f64)>>,
}

impl BayesianNodeBelief {
    pub fn new(
        supports: Vec<Vec<NodeId>>,
        prior_a: f64,
        prior_b: f64,
    ) -> Result<Self, EstimationError> {
        if !(prior_a > 0.0 && prior_b > 0.0) {
            return Err(EstimationError::InvalidPrior {
                a: prior_a,
                b: prior_b,
            });
        }
        let params = supports
            .iter()
            .map(|s| vec![(prior_a, prior_b); s.len()])
            .collect();
        Ok(BayesianNodeBelief { supports, params })
    }

    pub fn from_star(
        env: &StarEnvironment,
        prior_a: f64,
        prior_b: f64,
    ) -> Result<Self, EstimationError> {
        let supports = (0..env.influencer_count())
            .map(|k| env.support(k).to_vec())
            .collect();
        Self::new(supports, prior_a, prior_b)
    }

    /// Posterior update after a trial in which `k` was seeded: every support
    /// node of `k` counts one success if it appears in the spread, otherwise
    /// one failure.
    pub fn observe_trial(&mut self, k: InfluencerId, spread: &Spread) {
        for (idx, &u) in self.supports[k].iter().enumerate() {
            let (a, b) = &mut self.params[k][idx];
            if spread.contains(u) {
                *a += 1.0;
            } else {
                *b += 1.0;
            }
        }
    }

    /// Posterior-mean estimate of `k`'s remaining potential: the sum of
    /// `a/(a+b)` over support nodes not yet activated.
    pub fn remaining_estimate(&self, k: InfluencerId, activated: &HashSet<NodeId>) -> f64 {
        self.supports[k]
            .iter()
            .zip(&self.params[k])
            .filter(|(u, _)| !activated.contains(u))
            .map(|(_, &(a, b))| a / (a + b))
            .sum()
    }
}
