//! The star abstraction: influencers wired directly to their supports.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;

use crate::graph::NodeId;

use super::{EnvError, FatigueFunction, InfluencerId, Spread};

/// Influencers with known per-node activation probabilities.
///
/// Influencer `k` is connected to the basic nodes in `supports[k]`; seeding
/// `k` samples each support node independently with its probability. Supports
/// may overlap across influencers.
#[derive(Debug, Clone, PartialEq)]
pub struct StarEnvironment {
    supports: Vec<Vec<NodeId>>,
    probs: Vec<Vec<f64>>,
}

impl StarEnvironment {
    pub fn new(supports: Vec<Vec<NodeId>>, probs: Vec<Vec<f64>>) -> Result<Self, EnvError> {
        if supports.len() != probs.len() {
            return Err(EnvError::ShapeMismatch {
                influencer: supports.len().min(probs.len()),
            });
        }
        for (k, (sup, ps)) in supports.iter().zip(&probs).enumerate() {
            if sup.len() != ps.len() {
                return Err(EnvError::ShapeMismatch { influencer: k });
            }
            for &p in ps {
                if !(0.0..=1.0).contains(&p) {
                    return Err(EnvError::InvalidProbability { value: p });
                }
            }
        }
        Ok(StarEnvironment { supports, probs })
    }

    pub fn influencer_count(&self) -> usize {
        self.supports.len()
    }

    pub fn support(&self, k: InfluencerId) -> &[NodeId] {
        &self.supports[k]
    }

    pub fn probabilities(&self, k: InfluencerId) -> &[f64] {
        &self.probs[k]
    }

    /// Expected size of influencer `k`'s first spread (the sum of its
    /// activation probabilities).
    pub fn expected_first_spread(&self, k: InfluencerId) -> f64 {
        self.probs[k].iter().sum()
    }

    fn check(&self, k: InfluencerId) -> Result<(), EnvError> {
        if k >= self.influencer_count() {
            return Err(EnvError::UnknownInfluencer {
                influencer: k,
                count: self.influencer_count(),
            });
        }
        Ok(())
    }

    /// Seeds influencer `k` once: every support node is sampled independently
    /// with its activation probability and attributed to `k`.
    pub fn pull<R: Rng>(&self, k: InfluencerId, rng: &mut R) -> Result<Spread, EnvError> {
        self.pull_many(&[k], rng)
    }

    /// One trial seeding several influencers. Influencers sample in ascending
    /// order; a node activated by more than one is attributed to the lowest
    /// index that activated it.
    pub(super) fn pull_many<R: Rng>(
        &self,
        seeded: &[InfluencerId],
        rng: &mut R,
    ) -> Result<Spread, EnvError> {
        for &k in seeded {
            self.check(k)?;
        }
        let mut claimed: HashSet<NodeId> = HashSet::new();
        let mut claims = Vec::new();
        for &k in seeded {
            for (&u, &p) in self.supports[k].iter().zip(&self.probs[k]) {
                if rng.gen_bool(p) && claimed.insert(u) {
                    claims.push((u, k));
                }
            }
        }
        Ok(Spread::from_claims(claims))
    }

    /// Expected number of *new* nodes the next cascade from `k` would
    /// activate: `gamma(next_pull) * sum of p(u) over unactivated support`.
    pub fn remaining_potential(
        &self,
        k: InfluencerId,
        activated: &HashSet<NodeId>,
        gamma: &FatigueFunction,
        next_pull: u64,
    ) -> Result<f64, EnvError> {
        self.check(k)?;
        let fresh: f64 = self.supports[k]
            .iter()
            .zip(&self.probs[k])
            .filter(|(u, _)| !activated.contains(u))
            .map(|(_, &p)| p)
            .sum();
        Ok(gamma.value(next_pull) * fresh)
    }

    /// Parses the star-environment text format: one influencer per line,
    /// `influencer_id;node:probability,node:probability,...`, `#` comments
    /// allowed. Influencer ids must form a dense `0..K` range.
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let mut rows: Vec<(usize, Vec<NodeId>, Vec<f64>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = || EnvError::Parse {
                line: line_no,
                text: line.to_string(),
            };
            let (id_part, rest) = line.split_once(';').ok_or_else(parse_err)?;
            let k: usize = id_part.trim().parse().map_err(|_| parse_err())?;
            let mut support = Vec::new();
            let mut probs = Vec::new();
            for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
                let (node, prob) = pair.split_once(':').ok_or_else(parse_err)?;
                let u: NodeId = node.trim().parse().map_err(|_| parse_err())?;
                let p: f64 = prob.trim().parse().map_err(|_| parse_err())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(EnvError::InvalidProbability { value: p });
                }
                support.push(u);
                probs.push(p);
            }
            rows.push((k, support, probs));
        }
        rows.sort_by_key(|&(k, _, _)| k);
        for (expected, &(k, _, _)) in rows.iter().enumerate() {
            if k != expected {
                return Err(EnvError::Parse {
                    line: 0,
                    text: format!("influencer ids must be dense 0..K, found {k}"),
                });
            }
        }
        let (supports, probs): (Vec<_>, Vec<_>) =
            rows.into_iter().map(|(_, s, p)| (s, p)).unzip();
        StarEnvironment::new(supports, probs)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in 0..self.influencer_count() {
            write!(out, "{k};").expect("string write");
            let pairs: Vec<String> = self.supports[k]
                .iter()
                .zip(&self.probs[k])
                .map(|(u, p)| format!("{u}:{p}"))
                .collect();
            writeln!(out, "{}", pairs.join(",")).expect("string write");
        }
        out
    }
}
