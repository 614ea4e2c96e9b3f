//! Directed graph storage shared by every generator and metric.
//!
//! Nodes are identified by their quality rank: node 1 is the highest-quality
//! node, node `n` the lowest. Quality magnitudes are never stored because the
//! formation rules only ever compare ranks.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based node identifier, equal to the node's quality rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(u32);

impl NodeId {
    /// Panics if `id` is zero.
    pub fn new(id: u32) -> Self {
        assert!(id >= 1, "node ids are 1-based");
        NodeId(id)
    }

    pub fn from_index(index: usize) -> Self {
        NodeId(index as u32 + 1)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position in per-node vectors.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least 2 nodes, got {0}")]
    InvalidSize(usize),
    #[error("node {id} is outside 1..={n}")]
    NodeOutOfRange { id: u32, n: usize },
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("edge {0} -> {1} already exists")]
    DuplicateEdge(NodeId, NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected \"source,target\", found {0:?}")]
    Malformed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Append-only directed graph without self-loops or parallel edges.
///
/// `out_adj` keeps followees in insertion order, which the meritocracy
/// invariants and the edge-list round trip both depend on.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<u32>>,
    in_degree: Vec<u32>,
    edge_count: usize,
    edges: HashSet<(u32, u32)>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        // the membership set is derived from out_adj
        self.out_adj == other.out_adj
            && self.in_degree == other.in_degree
            && self.edge_count == other.edge_count
    }
}

impl Eq for DirectedGraph {}

impl DirectedGraph {
    pub fn new_empty(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidSize(n));
        }
        if n > u32::MAX as usize {
            return Err(GraphError::InvalidSize(n));
        }
        Ok(DirectedGraph {
            out_adj: vec![Vec::new(); n],
            in_degree: vec![0; n],
            edge_count: 0,
            edges: HashSet::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    fn check(&self, id: NodeId) -> Result<(), GraphError> {
        if id.index() < self.n() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { id: id.get(), n: self.n() })
        }
    }

    pub fn add_edge(&mut self, source: NodeId, target: NodeId) -> Result<(), GraphError> {
        self.check(source)?;
        self.check(target)?;
        if source == target {
            return Err(GraphError::SelfLoop(source));
        }
        if !self.edges.insert((source.get(), target.get())) {
            return Err(GraphError::DuplicateEdge(source, target));
        }
        self.out_adj[source.index()].push(target.index() as u32);
        self.in_degree[target.index()] += 1;
        self.edge_count += 1;
        Ok(())
    }

    /// Index-based insertion for generators that already guarantee legality.
    pub(crate) fn push_edge_unchecked(&mut self, source: usize, target: usize) {
        debug_assert!(source != target);
        let fresh = self.edges.insert((source as u32 + 1, target as u32 + 1));
        debug_assert!(fresh, "duplicate edge {source} -> {target}");
        self.out_adj[source].push(target as u32);
        self.in_degree[target] += 1;
        self.edge_count += 1;
    }

    pub fn has_edge(&self, source: NodeId, target: NodeId) -> bool {
        self.edges.contains(&(source.get(), target.get()))
    }

    pub(crate) fn has_edge_idx(&self, source: usize, target: usize) -> bool {
        self.edges.contains(&(source as u32 + 1, target as u32 + 1))
    }

    /// Followees of `source` in link-creation order.
    pub fn followees(&self, source: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out_adj[source.index()].iter().map(|&t| NodeId::from_index(t as usize))
    }

    /// Zero-based adjacency, one list per node in node order.
    pub fn out_adjacency(&self) -> &[Vec<u32>] {
        &self.out_adj
    }

    pub fn out_degree(&self, node: NodeId) -> usize {
        self.out_adj[node.index()].len()
    }

    pub fn in_degree(&self, node: NodeId) -> u32 {
        self.in_degree[node.index()]
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_degree
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        self.out_adj.iter().map(|a| a.len() as u32).collect()
    }

    pub fn degrees_snapshot(&self) -> (Vec<u32>, Vec<u32>) {
        (self.in_degree.clone(), self.out_degrees())
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(s, targets)| {
            targets
                .iter()
                .map(move |&t| (NodeId::from_index(s), NodeId::from_index(t as usize)))
        })
    }

    /// Recounts in-degrees from the adjacency lists and checks every
    /// structural invariant. Returns a description of the first violation.
    pub fn verify_invariants(&self) -> Result<(), String> {
        let n = self.n();
        let mut recount = vec![0u32; n];
        let mut seen = HashSet::with_capacity(self.edge_count);
        let mut total = 0usize;
        for (s, targets) in self.out_adj.iter().enumerate() {
            for &t in targets {
                let t = t as usize;
                if t >= n {
                    return Err(format!("edge {} -> {} leaves the node range", s + 1, t + 1));
                }
                if t == s {
                    return Err(format!("self-loop on {}", s + 1));
                }
                if !seen.insert((s, t)) {
                    return Err(format!("duplicate edge {} -> {}", s + 1, t + 1));
                }
                recount[t] += 1;
                total += 1;
            }
        }
        if total != self.edge_count {
            return Err(format!("edge_count {} but {} stored edges", self.edge_count, total));
        }
        if seen.len() != self.edges.len() {
            return Err("membership set out of sync".into());
        }
        if recount != self.in_degree {
            return Err("maintained in-degrees differ from a full recount".into());
        }
        Ok(())
    }

    /// Serializes as `source,target` lines, in node order and insertion order
    /// within a node.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count * 12);
        for (s, t) in self.edges() {
            let _ = writeln!(out, "{s},{t}");
        }
        out
    }

    /// Parses an edge list for a graph with `n` nodes. Blank lines are skipped.
    pub fn from_edge_list(text: &str, n: usize) -> Result<Self, ParseError> {
        let mut g = DirectedGraph::new_empty(n)
            .map_err(|e| ParseError { line: 0, kind: e.into() })?;
        for (line_no, (s, t)) in parse_pairs(text)? {
            g.add_edge(s, t).map_err(|e| ParseError { line: line_no, kind: e.into() })?;
        }
        Ok(g)
    }

    /// Parses an edge list, taking the node count from the largest id seen
    /// (at least 2).
    pub fn from_edge_list_inferred(text: &str) -> Result<Self, ParseError> {
        let pairs = parse_pairs(text)?;
        let n = pairs
            .iter()
            .map(|(_, (s, t))| s.get().max(t.get()) as usize)
            .max()
            .unwrap_or(0)
            .max(2);
        let mut g = DirectedGraph::new_empty(n)
            .map_err(|e| ParseError { line: 0, kind: e.into() })?;
        for (line_no, (s, t)) in pairs {
            g.add_edge(s, t).map_err(|e| ParseError { line: line_no, kind: e.into() })?;
        }
        Ok(g)
    }
}

/// An edge with the 1-based line it came from.
type NumberedEdge = (usize, (NodeId, NodeId));

fn parse_pairs(text: &str) -> Result<Vec<NumberedEdge>, ParseError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let malformed = || ParseError { line: line_no, kind: ParseErrorKind::Malformed(raw.to_string()) };
        let (a, b) = line.split_once(',').ok_or_else(malformed)?;
        let parse_id = |s: &str| -> Result<NodeId, ParseError> {
            let v: u32 = s.trim().parse().map_err(|_| malformed())?;
            if v == 0 {
                return Err(ParseError {
                    line: line_no,
                    kind: GraphError::NodeOutOfRange { id: 0, n: 0 }.into(),
                });
            }
            Ok(NodeId::new(v))
        };
        pairs.push((line_no, (parse_id(a)?, parse_id(b)?)));
    }
    Ok(pairs)
}

/// Seeded deterministic random stream used by all generators.
///
/// Identical seeds and call sequences give identical draws within this
/// implementation.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
