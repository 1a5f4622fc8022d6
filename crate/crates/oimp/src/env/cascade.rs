//! Independent-cascade and linear-threshold diffusion over a graph.

use rand::Rng;

use crate::graph::{Graph, NodeId};

use super::{EnvError, InfluencerId, Spread};

/// Diffusion model for graph-backed environments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CascadeModel {
    IndependentCascade,
    LinearThreshold,
}

impl CascadeModel {
    pub fn name(&self) -> &'static str {
        match self {
            CascadeModel::IndependentCascade => "ic",
            CascadeModel::LinearThreshold => "lt",
        }
    }
}

/// Runs one independent cascade from the given `(influencer, seed node)`
/// pairs. Diffusion advances breadth-first in lockstep across all seeds; each
/// newly activated node gets one chance per out-edge to activate the target
/// with the edge weight. A node reached in the same layer by several seeds is
/// attributed to the lowest influencer index.
///
/// Seed node ids must be valid for the graph and edge weights assigned.
pub fn ic_cascade<R: Rng>(g: &Graph, seeds: &[(InfluencerId, NodeId)], rng: &mut R) -> Spread {
    let mut active = vec![false; g.node_count()];
    let (mut claims, mut frontier) = claim_seeds(seeds, &mut active);
    while !frontier.is_empty() {
        let mut next: Vec<(InfluencerId, NodeId)> = Vec::new();
        for &(k, u) in &frontier {
            for &(v, w) in g.out_edges(u) {
                if !active[v] && rng.gen_bool(w) {
                    active[v] = true;
                    claims.push((v, k));
                    next.push((k, v));
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    Spread::from_claims(claims)
}

/// Runs one linear-threshold cascade. Every node draws a fresh uniform
/// threshold; it activates once the summed weights of its activated
/// in-neighbours reach the threshold. Requires incoming weights to sum to at
/// most 1 at every node (the weighted-cascade assignment guarantees this).
pub fn lt_cascade<R: Rng>(
    g: &Graph,
    seeds: &[(InfluencerId, NodeId)],
    rng: &mut R,
) -> Result<Spread, EnvError> {
    validate_lt_weights(g)?;
    Ok(lt_cascade_unchecked(g, seeds, rng))
}

pub(crate) fn validate_lt_weights(g: &Graph) -> Result<(), EnvError> {
    let mut incoming = vec![0.0f64; g.node_count()];
    for u in 0..g.node_count() {
        for &(v, w) in g.out_edges(u) {
            incoming[v] += w;
        }
    }
    const TOL: f64 = 1e-9;
    for (v, &sum) in incoming.iter().enumerate() {
        if sum > 1.0 + TOL {
            return Err(EnvError::WeightSumExceedsOne { node: v, sum });
        }
    }
    Ok(())
}

pub(crate) fn lt_cascade_unchecked<R: Rng>(
    g: &Graph,
    seeds: &[(InfluencerId, NodeId)],
    rng: &mut R,
) -> Spread {
    let n = g.node_count();
    let mut active = vec![false; n];
    let mut accumulated = vec![0.0f64; n];
    // thresholds are drawn lazily on first touch; NaN marks "not drawn yet"
    let mut threshold = vec![f64::NAN; n];
    let (mut claims, mut frontier) = claim_seeds(seeds, &mut active);
    while !frontier.is_empty() {
        let mut next: Vec<(InfluencerId, NodeId)> = Vec::new();
        for &(k, u) in &frontier {
            for &(v, w) in g.out_edges(u) {
                if active[v] {
                    continue;
                }
                if threshold[v].is_nan() {
                    threshold[v] = rng.gen::<f64>();
                }
                accumulated[v] += w;
                if accumulated[v] >= threshold[v] {
                    active[v] = true;
                    claims.push((v, k));
                    next.push((k, v));
                }
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    Spread::from_claims(claims)
}

/// Activates the seeds as layer zero. Seeds are processed in ascending
/// `(influencer, node)` order so that a node seeded on behalf of several
/// influencers goes to the lowest index.
fn claim_seeds(
    seeds: &[(InfluencerId, NodeId)],
    active: &mut [bool],
) -> (Vec<(NodeId, InfluencerId)>, Vec<(InfluencerId, NodeId)>) {
    let mut ordered: Vec<(InfluencerId, NodeId)> = seeds.to_vec();
    ordered.sort_unstable();
    let mut claims = Vec::new();
    let mut frontier = Vec::new();
    for (k, s) in ordered {
        if !active[s] {
            active[s] = true;
            claims.push((s, k));
            frontier.push((k, s));
        }
    }
    (claims, frontier)
}

/// Graph-backed environment: influencer `k` seeds node `seeds[k]`.
pub struct GraphEnvironment {
    graph: Graph,
    model: CascadeModel,
    seeds: Vec<NodeId>,
}

impl GraphEnvironment {
    pub fn new(graph: Graph, model: CascadeModel, seeds: Vec<NodeId>) -> Result<Self, EnvError> {
        for &s in &seeds {
            if s >= graph.node_count() {
                return Err(EnvError::SeedOutOfRange {
                    node: s,
                    node_count: graph.node_count(),
                });
            }
        }
        if model == CascadeModel::LinearThreshold {
            validate_lt_weights(&graph)?;
        }
        Ok(GraphEnvironment {
            graph,
            model,
            seeds,
        })
    }

    pub fn influencer_count(&self) -> usize {
        self.seeds.len()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn model(&self) -> CascadeModel {
        self.model
    }

    pub fn seeds(&self) -> &[NodeId] {
        &self.seeds
    }

    pub(super) fn cascade<R: Rng>(&self, seeded: &[InfluencerId], rng: &mut R) -> Spread {
        let pairs: Vec<(InfluencerId, NodeId)> =
            seeded.iter().map(|&k| (k, self.seeds[k])).collect();
        match self.model {
            CascadeModel::IndependentCascade => ic_cascade(&self.graph, &pairs, rng),
            CascadeModel::LinearThreshold => lt_cascade_unchecked(&self.graph, &pairs, rng),
        }
    }
}
