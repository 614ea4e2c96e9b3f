//! Network formation generators: meritocracy, Matthew effect, their
//! hybrid, and the directed Erdős–Rényi baseline.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedGraph, RandomSource};
use crate::sampling::CumulativeWeights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Meritocracy,
    Matthew,
    Hybrid,
    ErDirected,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Meritocracy => "meritocracy",
            ModelKind::Matthew => "matthew",
            ModelKind::Hybrid => "hybrid",
            ModelKind::ErDirected => "er_directed",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "meritocracy" | "merit" => Ok(ModelKind::Meritocracy),
            "matthew" => Ok(ModelKind::Matthew),
            "hybrid" => Ok(ModelKind::Hybrid),
            "er_directed" | "er" => Ok(ModelKind::ErDirected),
            other => Err(ConfigError::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("node count must be at least 2, got {0}")]
    NodeCount(usize),
    #[error("out-degree cap must be in 1..={max}, got {m_cap}")]
    OutDegreeCap { m_cap: usize, max: usize },
    #[error("mixing probability must be in [0, 1], got {0}")]
    MixingProbability(f64),
    #[error("edge density must be in [0, 1], got {0}")]
    Density(f64),
    #[error("unknown model {0:?}")]
    UnknownModel(String),
}

/// How the hybrid model mixes the two mechanisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HybridMixing {
    /// Each node adopts the meritocracy rule with probability `p` and the
    /// Matthew rule otherwise, for its whole lifetime.
    #[default]
    PerNode,
    /// Every event independently uses the meritocracy rule with probability
    /// `p`; nodes keep drawing until they hold `M` links.
    PerEvent,
}

/// Parameters for a single generator run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormationConfig {
    pub model: ModelKind,
    pub n: usize,
    /// Out-degree bound `M` (limited attention).
    pub m_cap: usize,
    /// Probability of a meritocracy event in the hybrid model.
    pub p: f64,
    /// Edge probability for the ER baseline.
    pub density: f64,
    pub seed: u64,
    #[serde(default)]
    pub mixing: HybridMixing,
}

impl FormationConfig {
    pub fn new(model: ModelKind, n: usize, m_cap: usize, seed: u64) -> Self {
        FormationConfig { model, n, m_cap, p: 0.0, density: 0.0, seed, mixing: HybridMixing::PerNode }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mixing(mut self, mixing: HybridMixing) -> Self {
        self.mixing = mixing;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 || self.n > u32::MAX as usize {
            return Err(ConfigError::NodeCount(self.n));
        }
        if self.m_cap < 1 || self.m_cap > self.n - 1 {
            return Err(ConfigError::OutDegreeCap { m_cap: self.m_cap, max: self.n - 1 });
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ConfigError::MixingProbability(self.p));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(ConfigError::Density(self.density));
        }
        Ok(())
    }

    /// ER edge probability matching the `M·n` edges of a Matthew graph.
    pub fn matched_density(n: usize, m_cap: usize) -> f64 {
        (m_cap * n) as f64 / (n as f64 * (n as f64 - 1.0))
    }
}

/// How the meritocracy equilibrium is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeritStrategy {
    /// Each node's followees are the quality records of its own random
    /// candidate order, sampled one record at a time.
    #[default]
    PerNode,
    /// Literal event loop over non-terminated nodes with rejected candidates
    /// redrawn. Slow; kept for validating `PerNode`.
    EventLoop,
}

/// Builds a graph for `config`, seeding a fresh [`RandomSource`] from
/// `config.seed`.
pub fn generate(config: &FormationConfig) -> Result<DirectedGraph, ConfigError> {
    let mut rng = RandomSource::new(config.seed);
    generate_with(config, &mut rng)
}

pub fn generate_with(config: &FormationConfig, rng: &mut RandomSource) -> Result<DirectedGraph, ConfigError> {
    config.validate()?;
    Ok(match config.model {
        ModelKind::Meritocracy => meritocracy(config.n, config.m_cap, MeritStrategy::PerNode, rng),
        ModelKind::Matthew => matthew(config.n, config.m_cap, rng),
        ModelKind::Hybrid => hybrid(config, rng),
        ModelKind::ErDirected => er_directed(config.n, config.density, rng),
    })
}

pub fn generate_meritocracy(
    config: &FormationConfig,
    strategy: MeritStrategy,
    rng: &mut RandomSource,
) -> Result<DirectedGraph, ConfigError> {
    config.validate()?;
    Ok(meritocracy(config.n, config.m_cap, strategy, rng))
}

pub fn generate_matthew(config: &FormationConfig, rng: &mut RandomSource) -> Result<DirectedGraph, ConfigError> {
    config.validate()?;
    Ok(matthew(config.n, config.m_cap, rng))
}

pub fn generate_hybrid(config: &FormationConfig, rng: &mut RandomSource) -> Result<DirectedGraph, ConfigError> {
    config.validate()?;
    Ok(hybrid(config, rng))
}

pub fn generate_er_directed(config: &FormationConfig, rng: &mut RandomSource) -> Result<DirectedGraph, ConfigError> {
    config.validate()?;
    Ok(er_directed(config.n, config.density, rng))
}

/// Draws a node uniformly from `0..bound` excluding `source`. Returns `None`
/// when that set is empty.
fn uniform_below_excluding<R: Rng + ?Sized>(bound: usize, source: usize, rng: &mut R) -> Option<usize> {
    let count = if source < bound { bound - 1 } else { bound };
    if count == 0 {
        return None;
    }
    let r = rng.random_range(0..count);
    Some(if source < bound && r >= source { r + 1 } else { r })
}

fn meritocracy(n: usize, m_cap: usize, strategy: MeritStrategy, rng: &mut RandomSource) -> DirectedGraph {
    let mut g = DirectedGraph::new_empty(n).expect("validated size");
    match strategy {
        MeritStrategy::PerNode => {
            // The next record of a uniform random order is uniform over the
            // candidates that beat the current best, so each accepted link can
            // be drawn directly. A node stops once nothing better exists
            // (it follows its best candidate) or it holds M links.
            for source in 0..n {
                let mut best = n;
                for _ in 0..m_cap {
                    match uniform_below_excluding(best, source, rng) {
                        Some(target) => {
                            g.push_edge_unchecked(source, target);
                            best = target;
                        }
                        None => break,
                    }
                }
            }
        }
        MeritStrategy::EventLoop => {
            let mut best = vec![n; n];
            let mut active: Vec<usize> = (0..n).collect();
            let terminated = |node: usize, best: usize, out: usize| {
                out >= m_cap || best == 0 || (node == 0 && best == 1)
            };
            while !active.is_empty() {
                let slot = rng.random_range(0..active.len());
                let source = active[slot];
                let target = uniform_below_excluding(n, source, rng).expect("n >= 2");
                if target < best[source] {
                    g.push_edge_unchecked(source, target);
                    best[source] = target;
                    if terminated(source, target, g.out_adjacency()[source].len()) {
                        active.swap_remove(slot);
                    }
                }
            }
        }
    }
    g
}

/// Preferential-attachment urn: every node holds one virtual ticket plus one
/// ticket per in-link, so a uniform ticket draw picks node `j` with
/// probability `(in_degree_j + 1) / (n + edges)`.
#[derive(Debug, Clone)]
pub struct AttachmentUrn {
    tickets: Vec<u32>,
}

impl AttachmentUrn {
    pub fn new(n: usize) -> Self {
        AttachmentUrn { tickets: (0..n as u32).collect() }
    }

    pub fn total_weight(&self) -> usize {
        self.tickets.len()
    }

    pub fn record_link(&mut self, target: usize) {
        self.tickets.push(target as u32);
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.tickets[rng.random_range(0..self.tickets.len())] as usize
    }
}

/// One preferential draw for `source`, redrawing self and already-followed
/// targets.
fn matthew_step(g: &mut DirectedGraph, urn: &mut AttachmentUrn, source: usize, rng: &mut RandomSource) -> usize {
    loop {
        let target = urn.draw(rng);
        if target != source && !g.has_edge_idx(source, target) {
            g.push_edge_unchecked(source, target);
            urn.record_link(target);
            return target;
        }
    }
}

fn matthew(n: usize, m_cap: usize, rng: &mut RandomSource) -> DirectedGraph {
    let mut g = DirectedGraph::new_empty(n).expect("validated size");
    let mut urn = AttachmentUrn::new(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let slot = rng.random_range(0..active.len());
        let source = active[slot];
        matthew_step(&mut g, &mut urn, source, rng);
        if g.out_adjacency()[source].len() == m_cap {
            active.swap_remove(slot);
        }
    }
    debug_assert_eq!(urn.total_weight(), n + m_cap * n);
    g
}

fn hybrid(config: &FormationConfig, rng: &mut RandomSource) -> DirectedGraph {
    match config.mixing {
        HybridMixing::PerNode => hybrid_per_node(config.n, config.m_cap, config.p, rng),
        HybridMixing::PerEvent => hybrid_per_event(config.n, config.m_cap, config.p, rng),
    }
}

/// Number of candidates a meritocratic node would still accept.
fn better_candidates(best: usize, source: usize) -> u64 {
    (if source < best { best - 1 } else { best }) as u64
}

/// Per-node mixing, simulated on the jump chain of the uniform event loop.
///
/// In the literal loop an active node is picked uniformly and a meritocratic
/// node's event succeeds with probability `c_i / (n - 1)`, where `c_i` counts
/// the candidates beating its best followee. Failed events change nothing, so
/// picking nodes with weight `c_i` (meritocratic) or `n - 1` (preferential)
/// and always performing a successful event yields the same sequence of
/// graph states.
fn hybrid_per_node(n: usize, m_cap: usize, p: f64, rng: &mut RandomSource) -> DirectedGraph {
    let meritocratic: Vec<bool> = (0..n)
        .map(|_| match p {
            p if p <= 0.0 => false,
            p if p >= 1.0 => true,
            p => rng.random_bool(p),
        })
        .collect();
    let mut g = DirectedGraph::new_empty(n).expect("validated size");
    let mut urn = AttachmentUrn::new(n);
    let mut best = vec![n; n];
    let full_rate = n as u64 - 1;
    let mut rates = CumulativeWeights::new(n);
    for (i, &merit) in meritocratic.iter().enumerate() {
        rates.set(i, if merit { better_candidates(n, i) } else { full_rate });
    }
    while let Some(source) = rates.sample(rng) {
        if meritocratic[source] {
            let target = uniform_below_excluding(best[source], source, rng).expect("positive rate");
            g.push_edge_unchecked(source, target);
            urn.record_link(target);
            best[source] = target;
        } else {
            matthew_step(&mut g, &mut urn, source, rng);
        }
        let rate = if g.out_adjacency()[source].len() == m_cap {
            0
        } else if meritocratic[source] {
            better_candidates(best[source], source)
        } else {
            full_rate
        };
        rates.set(source, rate);
    }
    g
}

fn hybrid_per_event(n: usize, m_cap: usize, p: f64, rng: &mut RandomSource) -> DirectedGraph {
    if p >= 1.0 {
        // With no preferential events a node that follows its best candidate
        // never fills its M slots, so the pure meritocracy termination applies.
        return meritocracy(n, m_cap, MeritStrategy::PerNode, rng);
    }
    let mut g = DirectedGraph::new_empty(n).expect("validated size");
    let mut urn = AttachmentUrn::new(n);
    // best[i]: highest-quality followee so far, n when none
    let mut best = vec![n; n];
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let slot = rng.random_range(0..active.len());
        let source = active[slot];
        let added = if p > 0.0 && rng.random_bool(p) {
            let target = uniform_below_excluding(n, source, rng).expect("n >= 2");
            if target < best[source] {
                g.push_edge_unchecked(source, target);
                urn.record_link(target);
                Some(target)
            } else {
                None
            }
        } else {
            Some(matthew_step(&mut g, &mut urn, source, rng))
        };
        if let Some(target) = added {
            best[source] = best[source].min(target);
            if g.out_adjacency()[source].len() == m_cap {
                active.swap_remove(slot);
            }
        }
    }
    g
}

fn er_directed(n: usize, density: f64, rng: &mut RandomSource) -> DirectedGraph {
    let mut g = DirectedGraph::new_empty(n).expect("validated size");
    if density <= 0.0 {
        return g;
    }
    let pairs = (n as u64) * (n as u64 - 1);
    let per_source = n as u64 - 1;
    let mut push = |k: u64| {
        let source = (k / per_source) as usize;
        let r = (k % per_source) as usize;
        let target = if r >= source { r + 1 } else { r };
        g.push_edge_unchecked(source, target);
    };
    if density >= 1.0 {
        (0..pairs).for_each(&mut push);
    } else {
        // skip lengths between successive edges are geometric
        let gaps = Geometric::new(density).expect("density in (0, 1)");
        let mut k = gaps.sample(rng);
        while k < pairs {
            push(k);
            k = k.saturating_add(1).saturating_add(gaps.sample(rng));
        }
    }
    g
}

/// Checks the meritocracy equilibrium and record properties.
pub fn check_meritocracy_equilibrium(g: &DirectedGraph, m_cap: usize) -> Result<(), String> {
    for (source, followees) in g.out_adjacency().iter().enumerate() {
        let best_other = if source == 0 { 1 } else { 0 };
        let linked_best = followees.contains(&(best_other as u32));
        if !linked_best && followees.len() != m_cap {
            return Err(format!("node {} is not at equilibrium", source + 1));
        }
        if followees.is_empty() || followees.len() > m_cap {
            return Err(format!("node {} has out-degree {}", source + 1, followees.len()));
        }
        if followees.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("node {} followees are not successive records", source + 1));
        }
    }
    Ok(())
}
