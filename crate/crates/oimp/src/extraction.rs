//! Influencer extraction: choosing K seed-candidate nodes from a known graph.
//!
//! Four heuristics are provided, from cheapest to dearest: plain out-degree
//! ranking, a greedy set-cover pass, DivRank (a reinforced random walk run on
//! the edge-reversed graph so that mass accumulates at influential rather
//! than prestigious nodes), and lazy-greedy Monte-Carlo influence
//! maximisation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use rand::Rng;
use thiserror::Error;

use crate::env::{ic_cascade, lt_cascade_unchecked, validate_lt_weights, CascadeModel, EnvError};
use crate::graph::{Graph, NodeId};

/// Errors from extraction preconditions.
#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("requested {requested} influencers from a graph with {node_count} nodes")]
    TooManyInfluencers { requested: usize, node_count: usize },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("neighbourhood removal supports 1 or 2 hops, got {hops}")]
    InvalidHops { hops: u32 },
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// An ordered influencer set: node ids sorted by selection score (best
/// first), with the score each was selected at. `exhausted` flags a greedy
/// cover that ran out of uncovered nodes and padded the tail by residual
/// degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    pub influencers: Vec<NodeId>,
    pub scores: Vec<f64>,
    pub exhausted: bool,
}

fn check_count(requested: usize, node_count: usize) -> Result<(), ExtractionError> {
    if requested > node_count {
        return Err(ExtractionError::TooManyInfluencers {
            requested,
            node_count,
        });
    }
    Ok(())
}

/// The `count` nodes of largest out-degree, ties broken by lowest id.
pub fn max_degree(g: &Graph, count: usize) -> Result<ExtractionResult, ExtractionError> {
    check_count(count, g.node_count())?;
    let mut order: Vec<NodeId> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| g.out_degree(b).cmp(&g.out_degree(a)).then(a.cmp(&b)));
    let influencers: Vec<NodeId> = order[..count].to_vec();
    let scores = influencers.iter().map(|&u| g.out_degree(u) as f64).collect();
    Ok(ExtractionResult {
        influencers,
        scores,
        exhausted: false,
    })
}

/// Greedy cover: repeatedly pick the remaining node with the most
/// still-uncovered out-neighbours, then drop it and its out-neighbourhood
/// within `hops` hops (1 or 2) from further counting. If the pool empties
/// before `count` picks, the tail is padded with the highest-degree leftover
/// nodes and `exhausted` is set.
pub fn greedy_max_cover(
    g: &Graph,
    count: usize,
    hops: u32,
) -> Result<ExtractionResult, ExtractionError> {
    if !(hops == 1 || hops == 2) {
        return Err(ExtractionError::InvalidHops { hops });
    }
    let n = g.node_count();
    check_count(count, n)?;
    let mut removed = vec![false; n];
    let mut selected: Vec<NodeId> = Vec::with_capacity(count);
    let mut scores: Vec<f64> = Vec::with_capacity(count);
    let mut exhausted = false;
    while selected.len() < count {
        let mut best: Option<(usize, NodeId)> = None;
        for u in 0..n {
            if removed[u] {
                continue;
            }
            let mut seen: HashSet<NodeId> = HashSet::new();
            let eff = g
                .out_edges(u)
                .iter()
                .filter(|&&(v, _)| !removed[v] && v != u && seen.insert(v))
                .count();
            if best.map_or(true, |(be, _)| eff > be) {
                best = Some((eff, u));
            }
        }
        match best {
            Some((eff, u)) => {
                selected.push(u);
                scores.push(eff as f64);
                removed[u] = true;
                let mut layer: Vec<NodeId> =
                    g.out_edges(u).iter().map(|&(v, _)| v).collect();
                for _ in 1..hops {
                    let mut next = Vec::new();
                    for &v in &layer {
                        next.extend(g.out_edges(v).iter().map(|&(w, _)| w));
                    }
                    for &v in &layer {
                        removed[v] = true;
                    }
                    layer = next;
                }
                for v in layer {
                    removed[v] = true;
                }
            }
            None => {
                // pool exhausted: pad with the highest-degree unselected nodes
                exhausted = true;
                let chosen: HashSet<NodeId> = selected.iter().copied().collect();
                let mut leftovers: Vec<NodeId> =
                    (0..n).filter(|u| !chosen.contains(u)).collect();
                leftovers.sort_by(|&a, &b| {
                    g.out_degree(b).cmp(&g.out_degree(a)).then(a.cmp(&b))
                });
                for u in leftovers.into_iter().take(count - selected.len()) {
                    scores.push(g.out_degree(u) as f64);
                    selected.push(u);
                }
                break;
            }
        }
    }
    Ok(ExtractionResult {
        influencers: selected,
        scores,
        exhausted,
    })
}

/// Parameters of the cumulative DivRank walk.
#[derive(Debug, Clone, PartialEq)]
pub struct DivRankParams {
    /// Share of transition mass that follows edges; the remaining `1 - damping`
    /// teleports uniformly.
    pub damping: f64,
    /// Iteration cap.
    pub iterations: usize,
    /// Convergence threshold on the max per-node score change.
    pub tolerance: f64,
}

impl Default for DivRankParams {
    fn default() -> Self {
        DivRankParams {
            damping: 0.85,
            iterations: 200,
            tolerance: 1e-9,
        }
    }
}

/// Stationary scores of the cumulative DivRank walk on the edge-reversed
/// graph. Transition mass from `u` to `v` is proportional to the base
/// (uniform per out-edge) transition times `v`'s accumulated score, which
/// reinforces already-visited nodes and spreads the top ranks apart. Dangling
/// nodes distribute uniformly. The returned vector sums to 1 for non-empty
/// graphs.
pub fn divrank_scores(g: &Graph, params: &DivRankParams) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let r = g.reversed();
    let uniform = 1.0 / n as f64;
    let mut score = vec![uniform; n];
    let mut cumulative = score.clone();
    for _ in 0..params.iterations {
        let mut next = vec![(1.0 - params.damping) * uniform; n];
        let mut dangling = 0.0;
        for u in 0..n {
            let mass = params.damping * score[u];
            let edges = r.out_edges(u);
            if edges.is_empty() {
                dangling += mass;
                continue;
            }
            let norm: f64 = edges.iter().map(|&(v, _)| cumulative[v]).sum();
            for &(v, _) in edges {
                next[v] += mass * cumulative[v] / norm;
            }
        }
        if dangling > 0.0 {
            let share = dangling * uniform;
            for x in &mut next {
                *x += share;
            }
        }
        let delta = next
            .iter()
            .zip(&score)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        for (c, &s) in cumulative.iter_mut().zip(&next) {
            *c += s;
        }
        score = next;
        if delta < params.tolerance {
            break;
        }
    }
    score
}

/// Top-`count` nodes by DivRank score, ties broken by lowest id.
pub fn divrank(
    g: &Graph,
    count: usize,
    params: &DivRankParams,
) -> Result<ExtractionResult, ExtractionError> {
    if g.node_count() == 0 {
        return Err(ExtractionError::EmptyGraph);
    }
    check_count(count, g.node_count())?;
    let scores = divrank_scores(g, params);
    let mut order: Vec<NodeId> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let influencers: Vec<NodeId> = order[..count].to_vec();
    let picked_scores = influencers.iter().map(|&u| scores[u]).collect();
    Ok(ExtractionResult {
        influencers,
        scores: picked_scores,
        exhausted: false,
    })
}

/// Mean number of activations outside `discount` when seeding the given
/// `(influencer, node)` pairs, over `samples` simulated cascades.
///
/// Linear-threshold graphs must have been validated (incoming weights summing
/// to at most 1) before calling.
pub(crate) fn mc_mean_new_spread<R: Rng>(
    g: &Graph,
    model: CascadeModel,
    seeds: &[(usize, NodeId)],
    discount: &HashSet<NodeId>,
    samples: usize,
    rng: &mut R,
) -> f64 {
    let mut total = 0usize;
    for _ in 0..samples {
        let spread = match model {
            CascadeModel::IndependentCascade => ic_cascade(g, seeds, rng),
            CascadeModel::LinearThreshold => lt_cascade_unchecked(g, seeds, rng),
        };
        total += spread.nodes().filter(|u| !discount.contains(u)).count();
    }
    total as f64 / samples as f64
}

#[derive(Clone, Copy, Debug)]
struct HeapEntry {
    gain: f64,
    node: NodeId,
    evaluated_at: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap: larger gain first, then lower node id
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Lazy-greedy (priority-queue) influence maximisation: picks `count` seeds
/// maximising the Monte-Carlo estimated marginal spread, where nodes in
/// `discount` contribute nothing. Stale heap entries are re-evaluated only
/// when they surface, which is sound because marginal gains shrink as the
/// seed set grows.
pub fn greedy_influence_max<R: Rng>(
    g: &Graph,
    count: usize,
    model: CascadeModel,
    mc_samples: usize,
    discount: &HashSet<NodeId>,
    rng: &mut R,
) -> Result<ExtractionResult, ExtractionError> {
    let n = g.node_count();
    check_count(count, n)?;
    if model == CascadeModel::LinearThreshold {
        validate_lt_weights(g)?;
    }
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::with_capacity(n);
    for u in 0..n {
        let gain = mc_mean_new_spread(g, model, &[(0, u)], discount, mc_samples, rng);
        heap.push(HeapEntry {
            gain,
            node: u,
            evaluated_at: 0,
        });
    }
    let mut seeds: Vec<(usize, NodeId)> = Vec::with_capacity(count);
    let mut influencers = Vec::with_capacity(count);
    let mut scores = Vec::with_capacity(count);
    let mut base_value = 0.0;
    for round in 1..=count {
        loop {
            let top = heap.pop().expect("candidates remain");
            if top.evaluated_at == round {
                influencers.push(top.node);
                scores.push(top.gain);
                seeds.push((seeds.len(), top.node));
                if round < count {
                    base_value =
                        mc_mean_new_spread(g, model, &seeds, discount, mc_samples, rng);
                }
                break;
            }
            let mut trial = seeds.clone();
            trial.push((trial.len(), top.node));
            let mean = mc_mean_new_spread(g, model, &trial, discount, mc_samples, rng);
            heap.push(HeapEntry {
                gain: mean - base_value,
                node: top.node,
                evaluated_at: round,
            });
        }
    }
    Ok(ExtractionResult {
        influencers,
        scores,
        exhausted: false,
    })
}
