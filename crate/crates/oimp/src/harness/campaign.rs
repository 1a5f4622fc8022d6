//! Running a campaign: initialization, per-round selection, persistence
//! accounting.

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;

use crate::env::{Environment, FatigueFunction, InfluencerId};
use crate::estimation::CampaignStats;
use crate::graph::NodeId;
use crate::policies::{
    initialization_schedule, select_max_degree, select_oracle, select_random,
    select_top_fatigue_ucb, select_top_ucb,
};

use super::HarnessError;

/// Seed-selection strategy, by CLI name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    GtUcb,
    FatGtUcb,
    Random,
    MaxDegree,
    Oracle,
}

impl PolicyKind {
    pub const NAMES: [&'static str; 5] = ["gt-ucb", "fat-gt-ucb", "random", "max-degree", "oracle"];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::GtUcb => "gt-ucb",
            PolicyKind::FatGtUcb => "fat-gt-ucb",
            PolicyKind::Random => "random",
            PolicyKind::MaxDegree => "max-degree",
            PolicyKind::Oracle => "oracle",
        }
    }

    pub fn parse(name: &str) -> Result<Self, HarnessError> {
        match name {
            "gt-ucb" => Ok(PolicyKind::GtUcb),
            "fat-gt-ucb" => Ok(PolicyKind::FatGtUcb),
            "random" => Ok(PolicyKind::Random),
            "max-degree" => Ok(PolicyKind::MaxDegree),
            "oracle" => Ok(PolicyKind::Oracle),
            other => Err(HarnessError::Config(format!(
                "unknown policy `{other}`; valid policies: {}",
                Self::NAMES.join(", ")
            ))),
        }
    }
}

/// Knobs of one campaign. The influencer count comes from the environment.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    /// Trial budget N.
    pub budget: u64,
    /// Influencers seeded per round (L).
    pub seeds_per_round: usize,
    pub policy: PolicyKind,
    /// Weariness function used by the fatigue-aware policy index.
    pub gamma: FatigueFunction,
    /// Cascades per marginal-gain evaluation of the graph oracle.
    pub mc_samples: usize,
    /// Whether the oracle damps scores by the environment's fatigue factor.
    pub oracle_fatigue_aware: bool,
}

impl CampaignConfig {
    pub fn new(policy: PolicyKind, budget: u64, seeds_per_round: usize) -> Self {
        CampaignConfig {
            budget,
            seeds_per_round,
            policy,
            gamma: FatigueFunction::ConstantOne,
            mc_samples: 200,
            oracle_fatigue_aware: true,
        }
    }

    /// Checks the config against an environment. Returns advisory warnings
    /// (an initialization longer than the budget is legal but leaves no room
    /// for adaptive selection).
    pub fn validate(&self, env: &Environment) -> Result<Vec<String>, HarnessError> {
        let k = env.influencer_count();
        if k == 0 {
            return Err(HarnessError::Config("environment has no influencers".into()));
        }
        if self.seeds_per_round == 0 || self.seeds_per_round > k {
            return Err(HarnessError::Config(format!(
                "cannot seed {} influencers per round out of {k}",
                self.seeds_per_round
            )));
        }
        match self.policy {
            PolicyKind::MaxDegree if env.as_graph().is_none() => {
                return Err(HarnessError::Config(
                    "the max-degree policy requires a graph environment".into(),
                ));
            }
            PolicyKind::Oracle if env.as_star().is_none() && env.as_graph().is_none() => {
                return Err(HarnessError::Config(
                    "the oracle policy requires a star or graph environment".into(),
                ));
            }
            _ => {}
        }
        let mut warnings = Vec::new();
        let init_rounds = k.div_ceil(self.seeds_per_round) as u64;
        if self.budget < init_rounds {
            warnings.push(format!(
                "initialization needs {init_rounds} rounds but the budget is only {}; \
                 every round will be an initialization round",
                self.budget
            ));
        }
        Ok(warnings)
    }
}

/// Mutable state of a campaign: round counter, the persistent activated set
/// W, and all influencer statistics. The cumulative reward is `W.len()`.
#[derive(Debug, Clone)]
pub struct CampaignState {
    pub round: u64,
    pub activated: HashSet<NodeId>,
    pub stats: CampaignStats,
}

impl CampaignState {
    pub fn new(influencer_count: usize) -> Self {
        CampaignState {
            round: 0,
            activated: HashSet::new(),
            stats: CampaignStats::new(influencer_count),
        }
    }
}

/// One row of campaign output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub run: u64,
    pub round: u64,
    pub policy: String,
    pub selected: Vec<InfluencerId>,
    pub spread_size: u64,
    pub new_activations: u64,
    pub cumulative: u64,
}

pub(crate) fn select_round(
    policy: PolicyKind,
    state: &CampaignState,
    env: &Environment,
    t: u64,
    l: usize,
    gamma: &FatigueFunction,
    mc_samples: usize,
    oracle_fatigue_aware: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<InfluencerId>, HarnessError> {
    let k = env.influencer_count();
    let decision = match policy {
        PolicyKind::GtUcb => select_top_ucb(&state.stats, t, l)?,
        PolicyKind::FatGtUcb => select_top_fatigue_ucb(&state.stats, t, l, gamma)?,
        PolicyKind::Random => select_random(k, l, rng)?,
        PolicyKind::MaxDegree => {
            let (graph, _, seeds) = env.as_graph().ok_or_else(|| {
                HarnessError::Config("max-degree policy without a graph".into())
            })?;
            select_max_degree(graph, seeds, &state.activated, l)?
        }
        PolicyKind::Oracle => select_oracle(
            env,
            &state.activated,
            l,
            mc_samples,
            oracle_fatigue_aware,
            rng,
        )?,
    };
    Ok(decision.selected)
}

/// Runs one campaign replication: the deterministic initialization schedule
/// first, then policy-selected rounds up to the budget. After every trial the
/// spread is recorded, W grows by union, and the statistics are updated.
/// Output is fully determined by `(config, environment, run, rng)`.
pub fn run_campaign(
    config: &CampaignConfig,
    env: &mut Environment,
    run: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<RoundRecord>, HarnessError> {
    config.validate(env)?;
    env.reset();
    let k = env.influencer_count();
    let schedule = initialization_schedule(k, config.seeds_per_round)?;
    let mut state = CampaignState::new(k);
    let mut records = Vec::with_capacity(config.budget as usize);
    for t in 1..=config.budget {
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
        let new_activations = spread
            .nodes()
            .filter(|u| !state.activated.contains(u))
            .count() as u64;
        state.activated.extend(spread.nodes());
        state.stats.record_trial(&selected, &spread);
        state.round = t;
        records.push(RoundRecord {
            run,
            round: t,
            policy: config.policy.name().to_string(),
            selected,
            spread_size: spread.len() as u64,
            new_activations,
            cumulative: state.activated.len() as u64,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::StarEnvironment;
    use crate::harness::replication_rng;

    fn deterministic_star() -> Environment {
        // two influencers with disjoint certain supports of size 3
        let env = StarEnvironment::new(
            vec![vec![0, 1, 2], vec![3, 4, 5]],
            vec![vec![1.0; 3], vec![1.0; 3]],
        )
        .unwrap();
        Environment::star(env)
    }

    #[test]
    fn budget_equal_to_k_runs_only_initialization() {
        let mut env = deterministic_star();
        let config = CampaignConfig::new(PolicyKind::GtUcb, 2, 1);
        let mut rng = replication_rng(7, 0);
        let records = run_campaign(&config, &mut env, 0, &mut rng).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].selected, vec![0]);
        assert_eq!(records[1].selected, vec![1]);
    }

    #[test]
    fn identical_seeds_give_identical_records() {
        let env = StarEnvironment::new(
            vec![vec![0, 1, 2], vec![2, 3, 4], vec![5]],
            vec![vec![0.4; 3], vec![0.7; 3], vec![0.2]],
        )
        .unwrap();
        let config = CampaignConfig::new(PolicyKind::GtUcb, 30, 1);
        let mut a = Environment::star(env.clone());
        let mut b = Environment::star(env);
        let ra = run_campaign(&config, &mut a, 3, &mut replication_rng(11, 3)).unwrap();
        let rb = run_campaign(&config, &mut b, 3, &mut replication_rng(11, 3)).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn certain_disjoint_supports_exhaust_after_initialization() {
        let mut env = deterministic_star();
        let config = CampaignConfig::new(PolicyKind::GtUcb, 4, 1);
        let mut rng = replication_rng(1, 0);
        let records = run_campaign(&config, &mut env, 0, &mut rng).unwrap();
        assert_eq!(records[1].cumulative, 6);
        assert_eq!(records[2].cumulative, 6);
        assert_eq!(records[3].cumulative, 6);
        assert_eq!(records[2].new_activations, 0);
    }

    #[test]
    fn new_activation_totals_match_the_final_cumulative() {
        let env = StarEnvironment::new(
            vec![vec![0, 1, 2, 3], vec![2, 3, 4, 5]],
            vec![vec![0.5; 4], vec![0.5; 4]],
        )
        .unwrap();
        let mut env = Environment::star(env);
        let config = CampaignConfig::new(PolicyKind::GtUcb, 25, 1);
        let mut rng = replication_rng(5, 0);
        let records = run_campaign(&config, &mut env, 0, &mut rng).unwrap();
        let total: u64 = records.iter().map(|r| r.new_activations).sum();
        assert_eq!(total, records.last().unwrap().cumulative);
        // cumulative reward is non-decreasing
        assert!(records.windows(2).all(|w| w[0].cumulative <= w[1].cumulative));
    }

    #[test]
    fn policy_environment_mismatch_is_a_config_error() {
        let mut env = deterministic_star();
        let config = CampaignConfig::new(PolicyKind::MaxDegree, 10, 1);
        let mut rng = replication_rng(0, 0);
        assert!(matches!(
            run_campaign(&config, &mut env, 0, &mut rng),
            Err(HarnessError::Config(_))
        ));
    }

    #[test]
    fn oversized_initialization_is_a_warning_not_an_error() {
        let env = deterministic_star();
        let config = CampaignConfig::new(PolicyKind::GtUcb, 1, 1);
        let warnings = config.validate(&env).unwrap();
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn fatigue_free_fat_policy_matches_plain_policy_exactly() {
        let star = StarEnvironment::new(
            vec![vec![0, 1, 2, 3, 4], vec![4, 5, 6], vec![7, 8]],
            vec![vec![0.6; 5], vec![0.3; 3], vec![0.9; 2]],
        )
        .unwrap();
        let budget = 40;
        let mut plain_env = Environment::star(star.clone());
        let mut fat_env =
            Environment::star(star).with_fatigue(FatigueFunction::ConstantOne);
        let plain_cfg = CampaignConfig::new(PolicyKind::GtUcb, budget, 1);
        let fat_cfg = CampaignConfig::new(PolicyKind::FatGtUcb, budget, 1);
        let plain =
            run_campaign(&plain_cfg, &mut plain_env, 0, &mut replication_rng(9, 0)).unwrap();
        let fat = run_campaign(&fat_cfg, &mut fat_env, 0, &mut replication_rng(9, 0)).unwrap();
        for (p, f) in plain.iter().zip(&fat) {
            assert_eq!(p.selected, f.selected);
            assert_eq!(p.cumulative, f.cumulative);
        }
    }
}
