//! Synthetic instances: calibrated star environments, tiered cascade logs
//! and scale-free-ish graphs. These are the test fixtures standing in for
//! the crawled datasets the experiments were designed around.

use std::collections::HashSet;

use rand::Rng;

use crate::env::{CascadeLog, StarEnvironment};
use crate::graph::{Graph, NodeId};

use super::HarnessError;

/// Family of activation probabilities calibrated against empirically observed
/// retweet rates: log-uniform on `[p_min, 1]` with `p_min` chosen so the 90th
/// percentile lands on `percentile90`. Empirical distributions of per-user
/// conversion rates are heavily right-skewed; a log-uniform tail reproduces
/// that while staying two-parameter simple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibratedStarParams {
    /// Target 90th percentile of the probability distribution.
    pub percentile90: f64,
}

impl Default for CalibratedStarParams {
    fn default() -> Self {
        CalibratedStarParams { percentile90: 0.045 }
    }
}

impl CalibratedStarParams {
    /// Lower endpoint of the log-uniform support. The q-th quantile of a
    /// log-uniform on `[p_min, 1]` is `p_min^(1-q)`, so hitting `percentile90`
    /// at q = 0.9 needs `p_min = percentile90^10`.
    pub fn min_probability(&self) -> f64 {
        self.percentile90.powi(10)
    }
}

/// One draw from the calibrated probability family; always in (0, 1].
pub fn calibrated_probability<R: Rng>(params: &CalibratedStarParams, rng: &mut R) -> f64 {
    (rng.gen::<f64>() * params.min_probability().ln()).exp()
}

/// A star environment with disjoint consecutive supports of the given sizes
/// and i.i.d. calibrated activation probabilities.
pub fn calibrated_star<R: Rng>(
    support_sizes: &[usize],
    params: &CalibratedStarParams,
    rng: &mut R,
) -> StarEnvironment {
    let mut offset = 0;
    let mut supports = Vec::with_capacity(support_sizes.len());
    let mut probs = Vec::with_capacity(support_sizes.len());
    for &size in support_sizes {
        supports.push((offset..offset + size).collect::<Vec<NodeId>>());
        probs.push(
            (0..size)
                .map(|_| calibrated_probability(params, rng))
                .collect::<Vec<f64>>(),
        );
        offset += size;
    }
    StarEnvironment::new(supports, probs).expect("generated probabilities are valid")
}

/// Profile of a synthetic cascade log: a few strong influencers, a mid tier,
/// a long tail and a handful of duds.
#[derive(Debug, Clone, PartialEq)]
pub struct TieredLogProfile {
    /// Support size of each tier, best tier first.
    pub tier_supports: Vec<usize>,
    /// Influencers per tier.
    pub per_tier: usize,
    /// Logged cascades per influencer.
    pub cascades_each: usize,
    /// Within-support activation probability of each logged cascade.
    pub activation: f64,
}

impl Default for TieredLogProfile {
    fn default() -> Self {
        TieredLogProfile {
            tier_supports: vec![6000, 2400, 900, 300],
            per_tier: 5,
            cascades_each: 30,
            activation: 0.6,
        }
    }
}

/// Generates a cascade log with `per_tier` influencers per tier and cascade
/// sizes proportional to the tier support.
///
/// Each influencer's support is partitioned across its logged cascades and a
/// cascade activates each node of its own block independently, mirroring how
/// recorded conversions behave: a follower converts in one specific campaign,
/// so distinct cascades of the same influencer share almost no nodes.
pub fn tiered_cascade_log<R: Rng>(
    profile: &TieredLogProfile,
    rng: &mut R,
) -> Result<CascadeLog, HarnessError> {
    if profile.tier_supports.is_empty() || profile.per_tier == 0 || profile.cascades_each == 0 {
        return Err(HarnessError::Config(
            "tiered log profile must have at least one tier, influencer and cascade".into(),
        ));
    }
    if !(0.0..=1.0).contains(&profile.activation) {
        return Err(HarnessError::Config(format!(
            "activation probability {} outside [0, 1]",
            profile.activation
        )));
    }
    let mut offset: NodeId = 0;
    let mut cascades = Vec::new();
    for &support in &profile.tier_supports {
        for _ in 0..profile.per_tier {
            let block = (support / profile.cascades_each).max(1);
            let logged: Vec<Vec<NodeId>> = (0..profile.cascades_each)
                .map(|j| {
                    let start = offset + (j * block).min(support);
                    let end = offset + ((j + 1) * block).min(support);
                    (start..end)
                        .filter(|_| rng.gen_bool(profile.activation))
                        .collect()
                })
                .collect();
            cascades.push(logged);
            offset += support;
        }
    }
    Ok(CascadeLog::new(cascades))
}

/// Directed hub-and-audience graph with external sources.
///
/// The first `core` nodes form a sparse preferential-attachment digraph
/// (each receives `attachments` in-edges from earlier cores, sources skewed
/// towards existing broadcast hubs). The next block are audience leaves,
/// each following one to three cores chosen with rich-get-richer preference.
/// The last ~third are external sources: they point into cores and leaves
/// but have no incoming edges, standing in for the surrounding network a
/// small graph is embedded in. Under weighted-cascade weights the sources
/// soak up incoming probability mass without ever activating, which keeps
/// diffusion subcritical — cumulative coverage stays well below the node
/// count even over long campaigns, as it would on a much larger graph.
/// Weights are left at zero for a scheme to assign afterwards.
pub fn synthetic_graph<R: Rng>(
    nodes: usize,
    core: usize,
    attachments: usize,
    rng: &mut R,
) -> Graph {
    let core = core.min(nodes);
    let external = (nodes - core) / 3;
    let first_external = nodes - external;
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::new();
    // one entry per existing core out-edge; sampling from it is sampling
    // proportionally to out-degree
    let mut source_pool: Vec<NodeId> = Vec::new();
    for v in 1..core {
        let mut chosen: HashSet<NodeId> = HashSet::new();
        for _ in 0..attachments.min(v) {
            let src = if source_pool.is_empty() || rng.gen_bool(0.3) {
                rng.gen_range(0..v)
            } else {
                source_pool[rng.gen_range(0..source_pool.len())]
            };
            if src < v && chosen.insert(src) {
                edges.push((src, v, 0.0));
                source_pool.push(src);
            }
        }
    }
    for leaf in core..first_external {
        let follows = rng.gen_range(1..=3usize);
        let mut chosen: HashSet<NodeId> = HashSet::new();
        for _ in 0..follows {
            let hub = if source_pool.is_empty() || rng.gen_bool(0.2) {
                rng.gen_range(0..core.max(1))
            } else {
                source_pool[rng.gen_range(0..source_pool.len())]
            };
            if chosen.insert(hub) {
                edges.push((hub, leaf, 0.0));
                source_pool.push(hub);
            }
        }
    }
    // external sources dilute every core and leaf in-neighbourhood
    if external > 0 {
        for v in 0..first_external {
            if v == 0 && core > 0 {
                continue; // keep the root a pure source
            }
            for _ in 0..attachments {
                let src = first_external + rng.gen_range(0..external);
                edges.push((src, v, 0.0));
            }
        }
    }
    Graph::from_edges(nodes, &edges).expect("generated edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::replication_rng;

    #[test]
    fn calibrated_percentile_hits_the_anchor() {
        let params = CalibratedStarParams::default();
        let mut rng = replication_rng(1, 0);
        let mut samples: Vec<f64> = (0..1_000_000)
            .map(|_| calibrated_probability(&params, &mut rng))
            .collect();
        samples.sort_by(f64::total_cmp);
        let p90 = samples[900_000];
        assert!((p90 - 0.045).abs() < 0.005, "90th percentile {p90}");
        assert!(samples.iter().all(|&p| p > 0.0 && p <= 1.0));
        // right skew: median well below mean
        let median = samples[500_000];
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        assert!(median < mean, "median {median} mean {mean}");
    }

    #[test]
    fn calibrated_star_lays_out_disjoint_supports() {
        let params = CalibratedStarParams::default();
        let mut rng = replication_rng(2, 0);
        let env = calibrated_star(&[3, 5, 2], &params, &mut rng);
        assert_eq!(env.influencer_count(), 3);
        assert_eq!(env.support(0), &[0, 1, 2]);
        assert_eq!(env.support(1), &[3, 4, 5, 6, 7]);
        assert_eq!(env.support(2), &[8, 9]);
    }

    #[test]
    fn tiered_log_sizes_follow_the_tiers() {
        let profile = TieredLogProfile {
            tier_supports: vec![1000, 100, 10, 1],
            per_tier: 1,
            cascades_each: 50,
            activation: 0.3,
        };
        let mut rng = replication_rng(3, 0);
        let log = tiered_cascade_log(&profile, &mut rng).unwrap();
        assert_eq!(log.influencer_count(), 4);
        let mean_size = |k: usize| {
            log.cascades(k).iter().map(Vec::len).sum::<usize>() as f64
                / log.cascades(k).len() as f64
        };
        let means: Vec<f64> = (0..4).map(mean_size).collect();
        assert!(means[0] > means[1] && means[1] > means[2] && means[2] > means[3]);
        // mean cascade size tracks support / cascades * activation
        assert!((means[0] - 6.0).abs() < 1.0, "mean {}", means[0]);
    }

    #[test]
    fn tiered_log_cascades_are_disjoint_within_an_influencer() {
        let profile = TieredLogProfile::default();
        let mut rng = replication_rng(8, 0);
        let log = tiered_cascade_log(&profile, &mut rng).unwrap();
        for k in 0..log.influencer_count() {
            let mut seen = std::collections::HashSet::new();
            for cascade in log.cascades(k) {
                for &u in cascade {
                    assert!(seen.insert(u), "node {u} appears in two cascades of {k}");
                }
            }
        }
    }

    #[test]
    fn empty_profile_is_rejected() {
        let mut rng = replication_rng(4, 0);
        let profile = TieredLogProfile {
            tier_supports: vec![],
            ..TieredLogProfile::default()
        };
        assert!(tiered_cascade_log(&profile, &mut rng).is_err());
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let profile = TieredLogProfile::default();
        let a = tiered_cascade_log(&profile, &mut replication_rng(5, 7)).unwrap();
        let b = tiered_cascade_log(&profile, &mut replication_rng(5, 7)).unwrap();
        assert_eq!(a, b);

        let ga = synthetic_graph(500, 100, 3, &mut replication_rng(6, 7));
        let gb = synthetic_graph(500, 100, 3, &mut replication_rng(6, 7));
        assert_eq!(ga, gb);
    }

    #[test]
    fn synthetic_graph_has_hub_structure() {
        let g = synthetic_graph(2000, 400, 3, &mut replication_rng(7, 0));
        assert_eq!(g.node_count(), 2000);
        let max_out = (0..400).map(|u| g.out_degree(u)).max().unwrap();
        let mean_out = g.edge_count() as f64 / 2000.0;
        assert!(
            max_out as f64 > 10.0 * mean_out,
            "max {max_out} mean {mean_out}"
        );
        // audience leaves never spread further; external sources are never
        // reached
        let external = (2000 - 400) / 3;
        let first_external = 2000 - external;
        for leaf in 400..first_external {
            assert_eq!(g.out_degree(leaf), 0);
        }
        for src in first_external..2000 {
            assert_eq!(g.in_degree(src), 0);
        }
    }
}
