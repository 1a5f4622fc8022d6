//! Replay of recorded cascades.

use std::fmt::Write as _;

use rand::Rng;

use crate::graph::NodeId;

use super::{EnvError, InfluencerId, Spread};

/// Historical spreads, one list per influencer. Seeding an influencer picks
/// one of its logged cascades uniformly at random and returns it verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeLog {
    cascades: Vec<Vec<Vec<NodeId>>>,
}

impl CascadeLog {
    /// Builds a log from per-influencer cascade lists. Each cascade is a set
    /// of node ids; duplicates are removed and entries sorted.
    pub fn new(cascades: Vec<Vec<Vec<NodeId>>>) -> Self {
        let cascades = cascades
            .into_iter()
            .map(|per_influencer| {
                per_influencer
                    .into_iter()
                    .map(|mut c| {
                        c.sort_unstable();
                        c.dedup();
                        c
                    })
                    .collect()
            })
            .collect();
        CascadeLog { cascades }
    }

    pub fn influencer_count(&self) -> usize {
        self.cascades.len()
    }

    pub fn cascades(&self, k: InfluencerId) -> &[Vec<NodeId>] {
        &self.cascades[k]
    }

    /// Picks one of `k`'s logged cascades uniformly at random, attributing
    /// every node to `k`.
    pub fn sample<R: Rng>(&self, k: InfluencerId, rng: &mut R) -> Result<Spread, EnvError> {
        self.sample_many(&[k], rng)
    }

    pub(super) fn sample_many<R: Rng>(
        &self,
        seeded: &[InfluencerId],
        rng: &mut R,
    ) -> Result<Spread, EnvError> {
        for &k in seeded {
            if k >= self.influencer_count() {
                return Err(EnvError::UnknownInfluencer {
                    influencer: k,
                    count: self.influencer_count(),
                });
            }
            if self.cascades[k].is_empty() {
                return Err(EnvError::EmptyLog { influencer: k });
            }
        }
        let mut claims: Vec<(NodeId, InfluencerId)> = Vec::new();
        for &k in seeded {
            let pick = rng.gen_range(0..self.cascades[k].len());
            for &u in &self.cascades[k][pick] {
                claims.push((u, k));
            }
        }
        // a node appearing in several influencers' cascades goes to the
        // lowest index, which from_claims resolves after sorting
        Ok(Spread::from_claims(claims))
    }

    /// Parses the cascade-log text format: one cascade per line,
    /// `influencer_id;node,node,node`, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, EnvError> {
        let mut rows: Vec<(usize, Vec<NodeId>)> = Vec::new();
        let mut max_id: Option<usize> = None;
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
            let mut nodes = Vec::new();
            for tok in rest.split(',').filter(|t| !t.trim().is_empty()) {
                nodes.push(tok.trim().parse::<NodeId>().map_err(|_| parse_err())?);
            }
            max_id = Some(max_id.map_or(k, |m| m.max(k)));
            rows.push((k, nodes));
        }
        let count = max_id.map_or(0, |m| m + 1);
        let mut cascades = vec![Vec::new(); count];
        for (k, nodes) in rows {
            cascades[k].push(nodes);
        }
        Ok(CascadeLog::new(cascades))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, per) in self.cascades.iter().enumerate() {
            for cascade in per {
                let nodes: Vec<String> = cascade.iter().map(|u| u.to_string()).collect();
                writeln!(out, "{k};{}", nodes.join(",")).expect("string write");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn singleton_log_always_returns_the_cascade() {
        let log = CascadeLog::new(vec![vec![vec![1, 2]]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let s = log.sample(0, &mut rng).unwrap();
            assert_eq!(s.nodes().collect::<Vec<_>>(), vec![1, 2]);
        }
    }

    #[test]
    fn two_cascades_are_picked_uniformly() {
        let log = CascadeLog::new(vec![vec![vec![1], vec![2]]]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut first = 0usize;
        for _ in 0..10_000 {
            if log.sample(0, &mut rng).unwrap().contains(1) {
                first += 1;
            }
        }
        assert!((first as f64 - 5000.0).abs() < 150.0, "count {first}");
    }

    #[test]
    fn unknown_influencer_and_empty_log_are_errors() {
        let log = CascadeLog::new(vec![vec![vec![1]], vec![]]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(matches!(
            log.sample(5, &mut rng),
            Err(EnvError::UnknownInfluencer { .. })
        ));
        assert!(matches!(
            log.sample(1, &mut rng),
            Err(EnvError::EmptyLog { influencer: 1 })
        ));
    }

    #[test]
    fn sampled_spread_is_one_of_the_logged_cascades() {
        let log = CascadeLog::new(vec![vec![vec![1, 2], vec![3], vec![4, 5, 6]]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = log.sample(0, &mut rng).unwrap();
            let nodes: Vec<NodeId> = s.nodes().collect();
            assert!(log.cascades(0).iter().any(|c| c == &nodes));
        }
    }

    #[test]
    fn text_format_round_trips() {
        let log = CascadeLog::new(vec![vec![vec![1, 2]], vec![vec![9], vec![]]]);
        let parsed = CascadeLog::parse(&log.to_text()).unwrap();
        assert_eq!(parsed, log);
    }
}
