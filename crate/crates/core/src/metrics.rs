//! Structural statistics over a finished graph.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedGraph, NodeId, RandomSource};

/// Minimum tail size accepted by [`fit_power_law`].
pub const MIN_TAIL: usize = 50;
pub const DEFAULT_XMIN: u32 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("need at least {needed} observations >= xmin, found {found}")]
    InsufficientData { found: usize, needed: usize },
    #[error("tail observations are all equal; the exponent is unbounded")]
    NoVariation,
    #[error("xmin must be at least 1")]
    InvalidXmin,
    #[error("gini needs at least one value")]
    Empty,
    #[error("gini is undefined when every value is zero")]
    AllZero,
    #[error("value {0} is negative or not finite")]
    InvalidValue(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub histogram: BTreeMap<u32, u64>,
    /// `(d, P[D >= d])` for every observed in-degree, ascending in `d`.
    pub ccdf: Vec<(u32, f64)>,
}

pub fn degree_distribution(g: &DirectedGraph) -> DegreeDistribution {
    distribution_of(g.in_degrees())
}

pub fn distribution_of(values: &[u32]) -> DegreeDistribution {
    let mut histogram = BTreeMap::new();
    for &d in values {
        *histogram.entry(d).or_insert(0u64) += 1;
    }
    let total = values.len() as f64;
    let mut remaining = values.len() as u64;
    let ccdf = histogram
        .iter()
        .map(|(&d, &count)| {
            let point = (d, remaining as f64 / total);
            remaining -= count;
            point
        })
        .collect();
    DegreeDistribution { histogram, ccdf }
}

/// Maximum-likelihood power-law exponent over the tail `d >= xmin`, using the
/// continuous approximation with the `xmin - 1/2` shift for discrete data.
pub fn fit_power_law(values: &[u32], xmin: u32) -> Result<f64, MetricsError> {
    if xmin < 1 {
        return Err(MetricsError::InvalidXmin);
    }
    let shifted = xmin as f64 - 0.5;
    let tail: Vec<u32> = values.iter().copied().filter(|&d| d >= xmin).collect();
    if tail.len() < MIN_TAIL {
        return Err(MetricsError::InsufficientData { found: tail.len(), needed: MIN_TAIL });
    }
    if tail.iter().all(|&d| d == tail[0]) {
        return Err(MetricsError::NoVariation);
    }
    let log_sum: f64 = tail.iter().map(|&d| (d as f64 / shifted).ln()).sum();
    Ok(1.0 + tail.len() as f64 / log_sum)
}

/// Gini coefficient via the sorted form
/// `sum_k (2k - n - 1) x_(k) / (n sum x)`.
pub fn gini(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(MetricsError::InvalidValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let total: f64 = sorted.iter().sum();
    if total == 0.0 {
        return Err(MetricsError::AllZero);
    }
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, x)| (2.0 * (k as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok((weighted / (n * total)).clamp(0.0, 1.0))
}

pub fn gini_of_counts(values: &[u32]) -> Result<f64, MetricsError> {
    gini(&values.iter().map(|&v| v as f64).collect::<Vec<_>>())
}

/// Shortest-path summary over ordered pairs `(i, j)`, `i != j`, with `j`
/// reachable from `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub diameter: u32,
    pub avg_path_length: f64,
    pub reachable_pairs: u64,
    /// Set when only a sample of sources was searched.
    pub approximate: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct PathTotals {
    max: u32,
    sum: u64,
    pairs: u64,
}

impl PathTotals {
    fn merge(self, other: PathTotals) -> PathTotals {
        PathTotals { max: self.max.max(other.max), sum: self.sum + other.sum, pairs: self.pairs + other.pairs }
    }
}

struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    fn from_graph(g: &DirectedGraph) -> Csr {
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut targets = Vec::with_capacity(g.edge_count());
        offsets.push(0);
        for adj in g.out_adjacency() {
            targets.extend_from_slice(adj);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Breadth-first search from up to 64 sources at once, one bit per source.
    fn bfs_batch(&self, sources: &[usize]) -> PathTotals {
        let n = self.offsets.len() - 1;
        let mut seen = vec![0u64; n];
        let mut frontier = vec![0u64; n];
        let mut next = vec![0u64; n];
        let mut active: Vec<usize> = Vec::new();
        for (bit, &s) in sources.iter().enumerate() {
            seen[s] |= 1 << bit;
            frontier[s] |= 1 << bit;
            active.push(s);
        }
        active.sort_unstable();
        active.dedup();
        let mut totals = PathTotals::default();
        let mut depth = 0u32;
        let mut touched: Vec<usize> = Vec::new();
        while !active.is_empty() {
            depth += 1;
            touched.clear();
            for &u in &active {
                let bits = frontier[u];
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if next[v] == 0 {
                        touched.push(v);
                    }
                    next[v] |= bits;
                }
                frontier[u] = 0;
            }
            active.clear();
            let mut found = 0u64;
            for &v in &touched {
                let fresh = next[v] & !seen[v];
                next[v] = 0;
                if fresh != 0 {
                    seen[v] |= fresh;
                    frontier[v] = fresh;
                    found += fresh.count_ones() as u64;
                    active.push(v);
                }
            }
            if found > 0 {
                totals.max = depth;
                totals.sum += found * depth as u64;
                totals.pairs += found;
            }
        }
        totals
    }
}

fn path_totals(g: &DirectedGraph, sources: &[usize]) -> PathTotals {
    let csr = Csr::from_graph(g);
    let batches: Vec<&[usize]> = sources.chunks(64).collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        batches
            .par_iter()
            .map(|b| csr.bfs_batch(b))
            .reduce(PathTotals::default, PathTotals::merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        batches.iter().map(|b| csr.bfs_batch(b)).fold(PathTotals::default(), PathTotals::merge)
    }
}

fn finish(totals: PathTotals, approximate: bool) -> Option<PathStats> {
    (totals.pairs > 0).then(|| PathStats {
        diameter: totals.max,
        avg_path_length: totals.sum as f64 / totals.pairs as f64,
        reachable_pairs: totals.pairs,
        approximate,
    })
}

/// Exact diameter and average path length from an all-source search.
/// `None` when no ordered pair is connected.
pub fn path_stats(g: &DirectedGraph) -> Option<PathStats> {
    let sources: Vec<usize> = (0..g.n()).collect();
    finish(path_totals(g, &sources), false)
}

/// Estimate from `k` distinct random sources; marked approximate.
pub fn path_stats_sampled(g: &DirectedGraph, k: usize, rng: &mut RandomSource) -> Option<PathStats> {
    if k >= g.n() {
        return path_stats(g);
    }
    let mut sources = sample(rng, g.n(), k).into_vec();
    sources.sort_unstable();
    finish(path_totals(g, &sources), true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub per_node: Vec<f64>,
    pub average: f64,
}

/// Directed clustering with `b_ij = a_ij + a_ji`:
/// `C_i = (1/2) sum_{j != i} sum_{k != i,j} b_ij b_jk b_ki / (s_i (s_i - 1))`
/// where `s_i = sum_j b_ij`. Nodes with `s_i <= 1` get `C_i = 0`.
pub fn clustering(g: &DirectedGraph) -> Clustering {
    let n = g.n();
    // symmetric neighbour lists carrying b_ij in {1, 2}
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(2 * g.edge_count());
    for (s, targets) in g.out_adjacency().iter().enumerate() {
        for &t in targets {
            pairs.push((s as u32, t));
            pairs.push((t, s as u32));
        }
    }
    pairs.sort_unstable();
    let mut neighbors: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
    for (a, b) in pairs {
        let list = &mut neighbors[a as usize];
        match list.last_mut() {
            Some((last, w)) if *last == b => *w += 1,
            _ => list.push((b, 1)),
        }
    }

    let mut weight_to_i = vec![0u64; n];
    let per_node: Vec<f64> = (0..n)
        .map(|i| {
            let nbrs = &neighbors[i];
            let strength: u64 = nbrs.iter().map(|&(_, w)| w).sum();
            if strength <= 1 {
                return 0.0;
            }
            for &(j, w) in nbrs {
                weight_to_i[j as usize] = w;
            }
            let mut closed = 0u64;
            for &(j, b_ij) in nbrs {
                for &(k, b_jk) in &neighbors[j as usize] {
                    if k as usize != i {
                        closed += b_ij * b_jk * weight_to_i[k as usize];
                    }
                }
            }
            for &(j, _) in nbrs {
                weight_to_i[j as usize] = 0;
            }
            (closed as f64 / 2.0) / (strength as f64 * (strength as f64 - 1.0))
        })
        .collect();
    let average = per_node.iter().sum::<f64>() / n as f64;
    Clustering { per_node, average }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankPoint {
    pub rank: usize,
    pub node: NodeId,
    pub value: u32,
}

/// Descending in-degree order; ties go to the smaller node id first.
pub fn rank_curve(indegrees: &[u32]) -> Vec<RankPoint> {
    let mut order: Vec<usize> = (0..indegrees.len()).collect();
    order.sort_by(|&a, &b| indegrees[b].cmp(&indegrees[a]));
    order
        .into_iter()
        .enumerate()
        .map(|(r, idx)| RankPoint { rank: r + 1, node: NodeId::from_index(idx), value: indegrees[idx] })
        .collect()
}

/// Values sorted in descending order.
pub fn sorted_descending(indegrees: &[u32]) -> Vec<u32> {
    let mut v = indegrees.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Logarithmically binned density of positive values, for display only.
/// Returns `(bin geometric centre, density)` pairs.
pub fn log_binned_density(values: &[u32], bins_per_decade: usize) -> Vec<(f64, f64)> {
    let positive: Vec<f64> = values.iter().filter(|&&v| v > 0).map(|&v| v as f64).collect();
    let Some(max) = positive.iter().copied().reduce(f64::max) else {
        return Vec::new();
    };
    let step = 10f64.powf(1.0 / bins_per_decade as f64);
    let mut edges = vec![1.0];
    while *edges.last().unwrap() <= max {
        let next = edges.last().unwrap() * step;
        edges.push(next);
    }
    let mut counts = vec![0u64; edges.len() - 1];
    let last = counts.len() - 1;
    for v in &positive {
        let bin = (v.ln() / step.ln()).floor() as usize;
        counts[bin.min(last)] += 1;
    }
    let total = values.len() as f64;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(b, &c)| ((edges[b] * edges[b + 1]).sqrt(), c as f64 / total / (edges[b + 1] - edges[b])))
        .collect()
}

/// How `MetricsReport::compute` handles shortest paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    #[default]
    Exact,
    /// Search from this many random sources.
    Sampled(usize),
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricsOptions {
    pub xmin: u32,
    pub paths: PathMode,
    pub sample_seed: u64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions { xmin: DEFAULT_XMIN, paths: PathMode::Exact, sample_seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub degree_histogram: BTreeMap<u32, u64>,
    pub ccdf: Vec<(u32, f64)>,
    pub alpha_hat: Option<f64>,
    pub xmin_used: u32,
    pub gini: Option<f64>,
    pub diameter: Option<u32>,
    pub avg_path_length: Option<f64>,
    pub avg_clustering: f64,
    pub rank_curve: Vec<u32>,
}

impl MetricsReport {
    pub fn compute(g: &DirectedGraph, options: &MetricsOptions) -> MetricsReport {
        let indegrees = g.in_degrees();
        let DegreeDistribution { histogram, ccdf } = degree_distribution(g);
        let paths = match options.paths {
            PathMode::Exact => path_stats(g),
            PathMode::Sampled(k) => path_stats_sampled(g, k, &mut RandomSource::new(options.sample_seed)),
            PathMode::Skip => None,
        };
        MetricsReport {
            degree_histogram: histogram,
            ccdf,
            alpha_hat: fit_power_law(indegrees, options.xmin).ok(),
            xmin_used: options.xmin,
            gini: gini_of_counts(indegrees).ok(),
            diameter: paths.map(|p| p.diameter),
            avg_path_length: paths.map(|p| p.avg_path_length),
            avg_clustering: clustering(g).average,
            rank_curve: sorted_descending(indegrees),
        }
    }
}
