//! Directed weighted graphs used as diffusion substrates.
//!
//! Graphs are loaded from plain edge-list text files ("src dst" or
//! "src dst weight", `#` comments allowed) and are immutable once built:
//! weight-assignment helpers consume no state besides the adjacency itself,
//! and everything downstream (cascades, extraction) takes `&Graph`.
//!
//! Two standard weighting schemes are provided:
//! - weighted cascade: every edge into `v` gets weight `1 / in_degree(v)`;
//! - tri-valency: every edge gets a weight drawn uniformly from
//!   `{0.1, 0.01, 0.001}`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rand::Rng;
use thiserror::Error;

/// Dense node identifier. External ids must be remapped to `0..node_count`
/// before ingestion; the loader sizes the graph as `1 + max id`.
pub type NodeId = usize;

/// Errors raised while loading or validating a graph.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: malformed edge `{text}`")]
    Parse { line: usize, text: String },
    #[error("line {line}: weight {weight} outside [0, 1]")]
    WeightOutOfRange { line: usize, weight: f64 },
    #[error("edge ({src}, {dst}) outside node range 0..{node_count}")]
    NodeOutOfRange {
        src: NodeId,
        dst: NodeId,
        node_count: usize,
    },
    #[error("edge weight {weight} outside [0, 1]")]
    InvalidWeight { weight: f64 },
}

/// Directed weighted graph with array-indexed out-adjacency.
///
/// Parallel edges are kept and count toward in-degrees. Self-loops are
/// dropped at construction and tallied in [`Graph::dropped_self_loops`].
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    out_edges: Vec<Vec<(NodeId, f64)>>,
    in_degree: Vec<usize>,
    dropped_self_loops: usize,
}

impl Graph {
    /// Builds a graph from an explicit edge list. Weights must lie in [0, 1]
    /// and targets in `0..node_count`; self-loops are silently dropped.
    pub fn from_edges(
        node_count: usize,
        edges: &[(NodeId, NodeId, f64)],
    ) -> Result<Self, GraphError> {
        let mut g = Graph {
            out_edges: vec![Vec::new(); node_count],
            in_degree: vec![0; node_count],
            dropped_self_loops: 0,
        };
        for &(src, dst, w) in edges {
            g.push_edge(src, dst, w)?;
        }
        Ok(g)
    }

    fn push_edge(&mut self, src: NodeId, dst: NodeId, weight: f64) -> Result<(), GraphError> {
        let n = self.node_count();
        if src >= n || dst >= n {
            return Err(GraphError::NodeOutOfRange {
                src,
                dst,
                node_count: n,
            });
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(GraphError::InvalidWeight { weight });
        }
        if src == dst {
            self.dropped_self_loops += 1;
            return Ok(());
        }
        self.out_edges[src].push((dst, weight));
        self.in_degree[dst] += 1;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.out_edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    /// Outgoing `(target, weight)` pairs of `u`, in insertion order.
    pub fn out_edges(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.out_edges[u]
    }

    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_edges[u].len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_degree[v]
    }

    /// Number of self-loop lines dropped at construction.
    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    /// Weighted-cascade assignment: every edge `(u, v)` gets weight
    /// `1 / in_degree(v)`. Nodes without incoming edges are untouched.
    pub fn assign_wc_weights(&mut self) {
        for edges in &mut self.out_edges {
            for (dst, w) in edges {
                *w = 1.0 / self.in_degree[*dst] as f64;
            }
        }
    }

    /// Tri-valency assignment: every edge weight is drawn uniformly and
    /// independently from `{0.1, 0.01, 0.001}`.
    pub fn assign_tv_weights<R: Rng>(&mut self, rng: &mut R) {
        const LEVELS: [f64; 3] = [0.1, 0.01, 0.001];
        for edges in &mut self.out_edges {
            for (_, w) in edges {
                *w = LEVELS[rng.gen_range(0..3)];
            }
        }
    }

    /// The graph with every edge direction flipped (weights preserved).
    pub fn reversed(&self) -> Graph {
        let n = self.node_count();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_degree = vec![0usize; n];
        for u in 0..n {
            for &(v, w) in &self.out_edges[u] {
                out_edges[v].push((u, w));
                in_degree[u] += 1;
            }
        }
        Graph {
            out_edges,
            in_degree,
            dropped_self_loops: 0,
        }
    }

    /// Serializes to the edge-list text format, one `src dst weight` line per
    /// edge, grouped by source.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in 0..self.node_count() {
            for &(v, w) in &self.out_edges[u] {
                writeln!(out, "{u} {v} {w}").expect("string write");
            }
        }
        out
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<(), GraphError> {
        fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

/// Parses an edge list from text. `undirected` emits both directions for
/// every line. Missing weights default to 0 so a scheme can be assigned
/// afterwards.
pub fn parse_edge_list(text: &str, undirected: bool) -> Result<Graph, GraphError> {
    let mut edges: Vec<(NodeId, NodeId, f64)> = Vec::new();
    let mut max_id: Option<NodeId> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let src = parse_id(fields.next(), line_no, line)?;
        let dst = parse_id(fields.next(), line_no, line)?;
        let weight = match fields.next() {
            Some(tok) => {
                let w: f64 = tok.parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    text: line.to_string(),
                })?;
                if !(0.0..=1.0).contains(&w) {
                    return Err(GraphError::WeightOutOfRange {
                        line: line_no,
                        weight: w,
                    });
                }
                w
            }
            None => 0.0,
        };
        if fields.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                text: line.to_string(),
            });
        }
        max_id = Some(max_id.map_or(src.max(dst), |m| m.max(src).max(dst)));
        edges.push((src, dst, weight));
        if undirected && src != dst {
            edges.push((dst, src, weight));
        }
    }
    let node_count = max_id.map_or(0, |m| m + 1);
    Graph::from_edges(node_count, &edges)
}

fn parse_id(tok: Option<&str>, line: usize, text: &str) -> Result<NodeId, GraphError> {
    tok.and_then(|t| t.parse::<NodeId>().ok())
        .ok_or_else(|| GraphError::Parse {
            line,
            text: text.to_string(),
        })
}

/// Loads an edge list from a file. See [`parse_edge_list`].
pub fn load_edge_list(path: &Path, undirected: bool) -> Result<Graph, GraphError> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text, undirected)
}
