//! Diffusion environments.
//!
//! Every environment answers a single query: *these influencers were seeded —
//! which basic nodes activated, and which influencer gets the credit?* The
//! answer is a [`Spread`]. Four flavours are provided:
//!
//! - [`StarEnvironment`]: each influencer owns a support of basic nodes with
//!   known activation probabilities (the abstraction the estimators are
//!   analysed under);
//! - [`GraphEnvironment`]: independent-cascade or linear-threshold diffusion
//!   over a weighted directed graph;
//! - [`CascadeLog`] replay: spreads sampled uniformly from recorded history;
//! - a fatigue decorator that thins every spread according to a non-increasing
//!   weariness function of the influencer's own pull count.
//!
//! Environments are immutable apart from the fatigue pull counters, so a
//! campaign run owns its environment and random stream outright.

mod cascade;
mod fatigue;
mod replay;
mod star;

use std::collections::HashSet;
use std::io;

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, NodeId};

pub use cascade::{ic_cascade, lt_cascade, CascadeModel, GraphEnvironment};
pub(crate) use cascade::{lt_cascade_unchecked, validate_lt_weights};
pub use fatigue::{fatigue_filter, FatigueFunction};
pub use replay::CascadeLog;
pub use star::StarEnvironment;

/// Index of an influencer in `0..K`.
pub type InfluencerId = usize;

/// Errors raised by environments and their file formats.
#[derive(Debug, Error)]
pub enum EnvError {
    #[error("unknown influencer {influencer} (environment has {count})")]
    UnknownInfluencer { influencer: usize, count: usize },
    #[error("no logged cascade for influencer {influencer}")]
    EmptyLog { influencer: usize },
    #[error("{operation} is not supported on a {environment} environment")]
    Unsupported {
        operation: &'static str,
        environment: &'static str,
    },
    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },
    #[error("influencer {influencer}: supports and probabilities differ in length")]
    ShapeMismatch { influencer: usize },
    #[error("node {node}: incoming weights sum to {sum}, exceeding 1")]
    WeightSumExceedsOne { node: NodeId, sum: f64 },
    #[error("seed node {node} outside graph with {node_count} nodes")]
    SeedOutOfRange { node: NodeId, node_count: usize },
    #[error("line {line}: malformed entry `{text}`")]
    Parse { line: usize, text: String },
    #[error("invalid fatigue function: {reason}")]
    InvalidFatigue { reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// The set of nodes activated by one trial, with per-node attribution to the
/// influencer responsible. Entries are kept sorted by node id, and the
/// attributed influencer is always one of the trial's seeded influencers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    entries: Vec<(NodeId, InfluencerId)>,
}

impl Spread {
    pub fn empty() -> Self {
        Spread {
            entries: Vec::new(),
        }
    }

    /// Builds a spread from `(node, influencer)` claims. A node claimed more
    /// than once keeps the lowest influencer index.
    pub fn from_claims(mut claims: Vec<(NodeId, InfluencerId)>) -> Self {
        claims.sort_unstable();
        claims.dedup_by_key(|&mut (u, _)| u);
        Spread { entries: claims }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Activated nodes in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.iter().map(|&(u, _)| u)
    }

    /// `(node, influencer)` pairs sorted by node id.
    pub fn entries(&self) -> &[(NodeId, InfluencerId)] {
        &self.entries
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.entries.binary_search_by_key(&node, |&(u, _)| u).is_ok()
    }

    /// Number of activations attributed to `influencer`.
    pub fn attributed_count(&self, influencer: InfluencerId) -> usize {
        self.entries.iter().filter(|&&(_, k)| k == influencer).count()
    }
}

enum EnvironmentKind {
    Star(StarEnvironment),
    Graph(GraphEnvironment),
    Replay(CascadeLog),
}

impl EnvironmentKind {
    fn name(&self) -> &'static str {
        match self {
            EnvironmentKind::Star(_) => "star",
            EnvironmentKind::Graph(_) => "graph",
            EnvironmentKind::Replay(_) => "replay",
        }
    }
}

struct FatigueState {
    gamma: FatigueFunction,
    pulls: Vec<u64>,
}

impl FatigueState {
    /// Thins a trial's spread. Each seeded influencer's counter advances by
    /// one pull; a node attributed to influencer `k` survives with probability
    /// `gamma(s_k)` where `s_k` is that influencer's new pull count. When the
    /// factor is exactly 1 no randomness is consumed, so a constant-one
    /// decorator is bit-for-bit the identity on the random stream.
    fn filter_trial<R: Rng>(
        &mut self,
        seeded: &[InfluencerId],
        spread: &Spread,
        rng: &mut R,
    ) -> Spread {
        for &k in seeded {
            self.pulls[k] += 1;
        }
        let kept = spread
            .entries()
            .iter()
            .filter(|&&(_, k)| {
                let g = self.gamma.value(self.pulls[k]);
                g >= 1.0 || rng.gen_bool(g)
            })
            .copied()
            .collect();
        Spread::from_claims(kept)
    }
}

/// A diffusion environment: one of the concrete kinds, optionally wrapped in
/// a fatigue decorator that owns its per-influencer pull counters.
pub struct Environment {
    kind: EnvironmentKind,
    fatigue: Option<FatigueState>,
}

impl Environment {
    pub fn star(env: StarEnvironment) -> Self {
        Environment {
            kind: EnvironmentKind::Star(env),
            fatigue: None,
        }
    }

    pub fn graph(env: GraphEnvironment) -> Self {
        Environment {
            kind: EnvironmentKind::Graph(env),
            fatigue: None,
        }
    }

    pub fn replay(log: CascadeLog) -> Self {
        Environment {
            kind: EnvironmentKind::Replay(log),
            fatigue: None,
        }
    }

    /// Wraps the environment in a fatigue decorator with fresh pull counters.
    pub fn with_fatigue(mut self, gamma: FatigueFunction) -> Self {
        let pulls = vec![0; self.influencer_count()];
        self.fatigue = Some(FatigueState { gamma, pulls });
        self
    }

    pub fn influencer_count(&self) -> usize {
        match &self.kind {
            EnvironmentKind::Star(env) => env.influencer_count(),
            EnvironmentKind::Graph(env) => env.influencer_count(),
            EnvironmentKind::Replay(log) => log.influencer_count(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        self.kind.name()
    }

    /// The star environment behind this wrapper, if any. Ground-truth
    /// operations (oracle selection, waiting times, estimator studies) need
    /// the exact activation probabilities and are only defined here.
    pub fn as_star(&self) -> Option<&StarEnvironment> {
        match &self.kind {
            EnvironmentKind::Star(env) => Some(env),
            _ => None,
        }
    }

    /// Graph, cascade model and influencer seed nodes for graph-backed
    /// environments.
    pub fn as_graph(&self) -> Option<(&Graph, CascadeModel, &[NodeId])> {
        match &self.kind {
            EnvironmentKind::Graph(env) => Some((env.graph(), env.model(), env.seeds())),
            _ => None,
        }
    }

    /// The fatigue function, when the environment is wearing out.
    pub fn fatigue_function(&self) -> Option<&FatigueFunction> {
        self.fatigue.as_ref().map(|f| &f.gamma)
    }

    /// Pull index the decorator would apply to influencer `k`'s next pull
    /// (1 when unworn or when there is no decorator).
    pub fn next_pull(&self, k: InfluencerId) -> u64 {
        self.fatigue.as_ref().map_or(1, |f| f.pulls[k] + 1)
    }

    /// Resets the fatigue pull counters for a fresh campaign run.
    pub fn reset(&mut self) {
        if let Some(f) = &mut self.fatigue {
            f.pulls.iter_mut().for_each(|p| *p = 0);
        }
    }

    fn check(&self, k: InfluencerId) -> Result<(), EnvError> {
        let count = self.influencer_count();
        if k >= count {
            return Err(EnvError::UnknownInfluencer {
                influencer: k,
                count,
            });
        }
        Ok(())
    }

    /// Seeds the given influencers for one trial and returns the resulting
    /// spread. Influencers are processed in ascending order, so a node
    /// reachable from several seeds is attributed to the lowest index.
    pub fn pull_set<R: Rng>(
        &mut self,
        seeded: &[InfluencerId],
        rng: &mut R,
    ) -> Result<Spread, EnvError> {
        for &k in seeded {
            self.check(k)?;
        }
        let mut order: Vec<InfluencerId> = seeded.to_vec();
        order.sort_unstable();
        order.dedup();
        let raw = match &self.kind {
            EnvironmentKind::Star(env) => env.pull_many(&order, rng)?,
            EnvironmentKind::Graph(env) => env.cascade(&order, rng),
            EnvironmentKind::Replay(log) => log.sample_many(&order, rng)?,
        };
        match &mut self.fatigue {
            None => Ok(raw),
            Some(state) => Ok(state.filter_trial(&order, &raw, rng)),
        }
    }

    /// Convenience wrapper for the single-influencer trial.
    pub fn pull<R: Rng>(&mut self, k: InfluencerId, rng: &mut R) -> Result<Spread, EnvError> {
        self.pull_set(&[k], rng)
    }

    /// Expected number of new activations a fresh cascade from `k` would
    /// produce, given the globally activated set. Exact probabilities are
    /// required, so this is a star-only operation; the fatigue factor of the
    /// environment's own decorator is applied automatically.
    pub fn remaining_potential(
        &self,
        k: InfluencerId,
        activated: &HashSet<NodeId>,
    ) -> Result<f64, EnvError> {
        let star = self.as_star().ok_or(EnvError::Unsupported {
            operation: "remaining potential",
            environment: self.kind.name(),
        })?;
        let gamma = self
            .fatigue
            .as_ref()
            .map_or(&FatigueFunction::ConstantOne, |f| &f.gamma);
        star.remaining_potential(k, activated, gamma, self.next_pull(k))
    }
}
