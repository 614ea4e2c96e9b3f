//! Batch runs, parameter sweeps, empirical follower data, and exports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formation::{generate, ConfigError, FormationConfig, HybridMixing, ModelKind};
use crate::metrics::{self, gini, MetricsError, MetricsOptions, MetricsReport, PathMode, DEFAULT_XMIN};
use crate::svg::{log_log_chart, Series};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl ExperimentError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        ExperimentError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    P(Vec<f64>),
    N(Vec<usize>),
}

fn default_runs() -> usize {
    1
}

fn default_xmin() -> u32 {
    DEFAULT_XMIN
}

/// Batch definition. Run `r` uses seed `seed_base + r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub model: ModelKind,
    pub n: usize,
    pub m_cap: usize,
    #[serde(default)]
    pub p: f64,
    /// ER edge probability; when absent the density matching `M·n` edges is used.
    #[serde(default)]
    pub density: Option<f64>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub outputs: Option<PathBuf>,
    #[serde(default)]
    pub emit_plots: bool,
    #[serde(default = "default_xmin")]
    pub xmin: u32,
    #[serde(default)]
    pub paths: PathMode,
    /// Hybrid mixing granularity.
    #[serde(default)]
    pub mixing: HybridMixing,
}

impl ExperimentSpec {
    pub fn new(model: ModelKind, n: usize, m_cap: usize, runs: usize) -> Self {
        ExperimentSpec {
            model,
            n,
            m_cap,
            p: 0.0,
            density: None,
            runs,
            seed_base: 0,
            sweep: None,
            outputs: None,
            emit_plots: false,
            xmin: DEFAULT_XMIN,
            paths: PathMode::Exact,
            mixing: HybridMixing::PerNode,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let spec: ExperimentSpec = serde_json::from_str(text).map_err(|e| ExperimentError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn base_config(&self) -> FormationConfig {
        let density = self.density.unwrap_or_else(|| FormationConfig::matched_density(self.n, self.m_cap));
        FormationConfig::new(self.model, self.n, self.m_cap, self.seed_base)
            .with_p(self.p)
            .with_density(density)
            .with_mixing(self.mixing)
    }

    pub fn seed(&self, run: usize) -> u64 {
        self.seed_base.wrapping_add(run as u64)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.runs < 1 {
            return Err(ExperimentError::Spec("runs must be at least 1".into()));
        }
        if self.xmin < 1 {
            return Err(ExperimentError::Spec("xmin must be at least 1".into()));
        }
        self.base_config().validate()?;
        match &self.sweep {
            Some(Sweep::P(ps)) => {
                if let Some(bad) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(ConfigError::MixingProbability(*bad).into());
                }
            }
            Some(Sweep::N(ns)) => {
                if ns.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ExperimentError::Spec("n sweep must be strictly ascending".into()));
                }
                for &n in ns {
                    FormationConfig { n, ..self.base_config() }.validate()?;
                }
            }
            None => {}
        }
        Ok(())
    }

    fn metrics_options(&self, run: usize) -> MetricsOptions {
        MetricsOptions { xmin: self.xmin, paths: self.paths, sample_seed: self.seed(run) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    pub edge_count: usize,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

impl ScalarSummary {
    /// Sample mean and unbiased variance; `None` when `values` is empty.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let variance = if count > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        Some(ScalarSummary { count, mean, variance })
    }

    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: ExperimentSpec,
    pub config: FormationConfig,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    /// Filled in by the caller that writes results; batch execution itself is
    /// timestamp-free so identical specs give identical result sets.
    pub timestamp: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub provenance: Provenance,
    pub runs: Vec<RunResult>,
    /// Position-wise mean of the per-run descending in-degree vectors.
    pub mean_rank_curve: Vec<f64>,
    /// Mean in-degree per node id (id equals quality rank).
    pub mean_indegree_by_node: Vec<f64>,
    pub gini_of_mean_curve: Option<f64>,
    pub summary: BTreeMap<String, ScalarSummary>,
    /// CCDF of in-degrees pooled over all runs.
    pub pooled_ccdf: Vec<(u32, f64)>,
}

impl ResultSet {
    pub fn pooled_indegrees(&self) -> Vec<u32> {
        let mut pooled = Vec::new();
        for run in &self.runs {
            for (&d, &count) in &run.metrics.degree_histogram {
                pooled.extend(std::iter::repeat_n(d, count as usize));
            }
        }
        pooled
    }

    pub fn scalar(&self, name: &str) -> Option<ScalarSummary> {
        self.summary.get(name).copied()
    }
}

struct RawRun {
    result: RunResult,
    indegrees: Vec<u32>,
}

fn single_run(spec: &ExperimentSpec, run: usize) -> Result<RawRun, ExperimentError> {
    let config = spec.base_config().with_seed(spec.seed(run));
    let g = generate(&config)?;
    let metrics = MetricsReport::compute(&g, &spec.metrics_options(run));
    Ok(RawRun {
        result: RunResult { run, seed: config.seed, edge_count: g.edge_count(), metrics },
        indegrees: g.in_degrees().to_vec(),
    })
}

fn execute_runs(spec: &ExperimentSpec) -> Result<Vec<RawRun>, ExperimentError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..spec.runs).into_par_iter().map(|r| single_run(spec, r)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..spec.runs).map(|r| single_run(spec, r)).collect()
    }
}

fn position_mean<I: Iterator<Item = f64>>(acc: &mut [f64], values: I) {
    for (a, v) in acc.iter_mut().zip(values) {
        *a += v;
    }
}

/// Runs `spec.runs` independent generations and aggregates their metrics.
/// Deterministic for a given spec; any failed run fails the batch.
pub fn run_batch(spec: &ExperimentSpec) -> Result<ResultSet, ExperimentError> {
    spec.validate()?;
    let raw = execute_runs(spec)?;
    let n = spec.n;
    let runs = raw.len() as f64;

    let mut mean_rank_curve = vec![0.0; n];
    let mut mean_indegree_by_node = vec![0.0; n];
    for r in &raw {
        position_mean(&mut mean_rank_curve, r.result.metrics.rank_curve.iter().map(|&d| d as f64));
        position_mean(&mut mean_indegree_by_node, r.indegrees.iter().map(|&d| d as f64));
    }
    mean_rank_curve.iter_mut().for_each(|v| *v /= runs);
    mean_indegree_by_node.iter_mut().for_each(|v| *v /= runs);

    let mut summary = BTreeMap::new();
    let mut add = |name: &str, values: Vec<f64>| {
        if let Some(s) = ScalarSummary::of(&values) {
            summary.insert(name.to_string(), s);
        }
    };
    let reports: Vec<&MetricsReport> = raw.iter().map(|r| &r.result.metrics).collect();
    add("edge_count", raw.iter().map(|r| r.result.edge_count as f64).collect());
    add("gini", reports.iter().filter_map(|m| m.gini).collect());
    add("alpha_hat", reports.iter().filter_map(|m| m.alpha_hat).collect());
    add("diameter", reports.iter().filter_map(|m| m.diameter.map(f64::from)).collect());
    add("avg_path_length", reports.iter().filter_map(|m| m.avg_path_length).collect());
    add("avg_clustering", reports.iter().map(|m| m.avg_clustering).collect());
    add("max_indegree", reports.iter().map(|m| m.rank_curve.first().copied().unwrap_or(0) as f64).collect());

    let mut notes = Vec::new();
    if matches!(spec.model, ModelKind::Meritocracy) || (spec.model == ModelKind::Hybrid && spec.p >= 1.0) {
        notes.push(
            "expected in-degree formulas overstate the rank-1 node at small n; \
             the exhaustive oracle is authoritative there"
                .to_string(),
        );
    }
    if matches!(spec.paths, PathMode::Sampled(_)) {
        notes.push("diameter and average path length are estimated from sampled sources".to_string());
    }

    let mut pooled_hist: BTreeMap<u32, u64> = BTreeMap::new();
    for m in &reports {
        for (&d, &c) in &m.degree_histogram {
            *pooled_hist.entry(d).or_insert(0) += c;
        }
    }
    let total: u64 = pooled_hist.values().sum();
    let mut remaining = total;
    let pooled_ccdf = pooled_hist
        .iter()
        .map(|(&d, &c)| {
            let point = (d, remaining as f64 / total as f64);
            remaining -= c;
            point
        })
        .collect();

    let provenance = Provenance {
        spec: spec.clone(),
        config: spec.base_config(),
        seeds: (0..spec.runs).map(|r| spec.seed(r)).collect(),
        tool_version: TOOL_VERSION.to_string(),
        timestamp: None,
        notes,
    };
    Ok(ResultSet {
        provenance,
        runs: raw.into_iter().map(|r| r.result).collect(),
        gini_of_mean_curve: gini(&mean_rank_curve).ok(),
        mean_rank_curve,
        mean_indegree_by_node,
        summary,
        pooled_ccdf,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub gini_mean: f64,
    pub gini_sd: f64,
    pub gini_of_mean_curve: f64,
    pub mean_rank_curve: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub spec: ExperimentSpec,
    pub rows: Vec<SweepRow>,
}

/// One hybrid batch per mixing probability.
pub fn hybrid_sweep(spec: &ExperimentSpec, ps: &[f64]) -> Result<SweepTable, ExperimentError> {
    let mut base = spec.clone();
    base.model = ModelKind::Hybrid;
    base.sweep = None;
    let mut rows = Vec::with_capacity(ps.len());
    for &p in ps {
        let batch = run_batch(&ExperimentSpec { p, ..base.clone() })?;
        let per_run = batch.scalar("gini").ok_or(MetricsError::AllZero)?;
        rows.push(SweepRow {
            p,
            gini_mean: per_run.mean,
            gini_sd: per_run.sd(),
            gini_of_mean_curve: batch.gini_of_mean_curve.ok_or(MetricsError::AllZero)?,
            mean_rank_curve: batch.mean_rank_curve,
        });
    }
    Ok(SweepTable { spec: base, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub mean_diameter: f64,
    pub mean_apl: f64,
    pub log2_n: f64,
    /// Runs with at least one connected pair.
    pub runs: usize,
}

/// Mean diameter and average path length across node counts.
pub fn small_world_scaling(spec: &ExperimentSpec, ns: &[usize]) -> Result<Vec<ScalingRow>, ExperimentError> {
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::Spec("n list must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut batch_spec = spec.clone();
        batch_spec.n = n;
        batch_spec.sweep = None;
        if batch_spec.paths == PathMode::Skip {
            batch_spec.paths = PathMode::Exact;
        }
        let batch = run_batch(&batch_spec)?;
        let diameter = batch.scalar("diameter");
        let apl = batch.scalar("avg_path_length");
        rows.push(ScalingRow {
            n,
            mean_diameter: diameter.map_or(f64::NAN, |s| s.mean),
            mean_apl: apl.map_or(f64::NAN, |s| s.mean),
            log2_n: (n as f64).log2(),
            runs: diameter.map_or(0, |s| s.count),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalResult {
    pub source: PathBuf,
    pub n: usize,
    pub target_mean: f64,
    pub raw_total: f64,
    /// Descending normalized counts; position `r` holds rank `r + 1`.
    pub normalized_rank_curve: Vec<f64>,
    pub gini: f64,
    pub notes: Vec<String>,
}

/// Parses one follower count per line, either `count` or `user_id,count`.
pub fn parse_followers(text: &str) -> Result<Vec<f64>, (usize, String)> {
    let mut counts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let field = match line.split_once(',') {
            Some((_, count)) => count.trim(),
            None => line,
        };
        let value: f64 = field.parse().map_err(|_| (i + 1, format!("not a number: {raw:?}")))?;
        if !value.is_finite() || value < 0.0 {
            return Err((i + 1, format!("follower count must be non-negative, got {field}")));
        }
        counts.push(value);
    }
    if counts.is_empty() {
        return Err((0, "no follower counts found".into()));
    }
    Ok(counts)
}

/// Rescales counts so their mean equals `target_mean`.
pub fn normalize_density(counts: &[f64], target_mean: f64) -> Vec<f64> {
    let total: f64 = counts.iter().sum();
    let scale = target_mean * counts.len() as f64 / total;
    counts.iter().map(|c| c * scale).collect()
}

pub fn empirical_from_text(source: &Path, text: &str, target_mean: f64) -> Result<EmpiricalResult, ExperimentError> {
    if !(target_mean.is_finite() && target_mean > 0.0) {
        return Err(ExperimentError::Spec(format!("target mean must be positive, got {target_mean}")));
    }
    let counts = parse_followers(text)
        .map_err(|(line, message)| ExperimentError::Parse { path: source.to_path_buf(), line, message })?;
    let raw_total: f64 = counts.iter().sum();
    if raw_total == 0.0 {
        return Err(MetricsError::AllZero.into());
    }
    let mut normalized = normalize_density(&counts, target_mean);
    normalized.sort_by(|a, b| b.total_cmp(a));
    Ok(EmpiricalResult {
        source: source.to_path_buf(),
        n: counts.len(),
        target_mean,
        raw_total,
        gini: gini(&counts)?,
        normalized_rank_curve: normalized,
        notes: vec![format!(
            "counts rescaled to mean {target_mean}; the normalization constant is a free choice (default 5, the model out-degree cap)"
        )],
    })
}

pub fn empirical_ingest(path: &Path, target_mean: f64) -> Result<EmpiricalResult, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
    empirical_from_text(path, &text, target_mean)
}

/// Writes `contents` to a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), ExperimentError> {
    let file_name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, contents).map_err(|e| ExperimentError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| ExperimentError::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))
}

fn ranked_points(values: &[f64]) -> Vec<(f64, f64)> {
    values.iter().enumerate().map(|(r, &v)| ((r + 1) as f64, v)).collect()
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("result types serialize");
    bytes.push(b'\n');
    bytes
}

pub fn rank_curve_csv(curve: &[f64]) -> String {
    let mut out = String::from("rank,mean_indegree\n");
    for (r, v) in curve.iter().enumerate() {
        let _ = writeln!(out, "{},{}", r + 1, v);
    }
    out
}

pub fn ccdf_csv(ccdf: &[(u32, f64)]) -> String {
    let mut out = String::from("indegree,ccdf\n");
    for (d, p) in ccdf {
        let _ = writeln!(out, "{d},{p}");
    }
    out
}

/// Writes `metrics.json`, `rank_curve.csv`, `degree_ccdf.csv` and
/// `indegree_by_node.csv`, plus SVG charts when `emit_plots` is set.
pub fn export_results(result: &ResultSet, dir: &Path, emit_plots: bool) -> Result<Vec<PathBuf>, ExperimentError> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, bytes: Vec<u8>| -> Result<(), ExperimentError> {
        let path = dir.join(name);
        write_atomic(&path, &bytes)?;
        written.push(path);
        Ok(())
    };
    put("metrics.json", to_json(result))?;
    put("rank_curve.csv", rank_curve_csv(&result.mean_rank_curve).into_bytes())?;
    put("degree_ccdf.csv", ccdf_csv(&result.pooled_ccdf).into_bytes())?;
    let mut by_node = String::from("node,mean_indegree\n");
    for (i, v) in result.mean_indegree_by_node.iter().enumerate() {
        let _ = writeln!(by_node, "{},{}", i + 1, v);
    }
    put("indegree_by_node.csv", by_node.into_bytes())?;
    if emit_plots {
        let model = result.provenance.config.model.as_str();
        let rank = log_log_chart(
            &format!("mean rank curve ({model})"),
            "rank",
            "mean in-degree",
            &[Series { label: model, points: ranked_points(&result.mean_rank_curve) }],
        );
        put("rank_curve.svg", rank.into_bytes())?;
        let ccdf: Vec<(f64, f64)> = result.pooled_ccdf.iter().map(|&(d, p)| (d as f64, p)).collect();
        let ccdf = log_log_chart(
            &format!("in-degree CCDF ({model})"),
            "in-degree",
            "P[D >= d]",
            &[Series { label: model, points: ccdf }],
        );
        put("degree_ccdf.svg", ccdf.into_bytes())?;
    }
    Ok(written)
}

pub fn export_sweep(table: &SweepTable, dir: &Path, emit_plots: bool) -> Result<Vec<PathBuf>, ExperimentError> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, bytes: Vec<u8>| -> Result<(), ExperimentError> {
        let path = dir.join(name);
        write_atomic(&path, &bytes)?;
        written.push(path);
        Ok(())
    };
    put("sweep.json", to_json(table))?;
    let mut csv = String::from("p,gini_mean,gini_sd,gini_of_mean_curve\n");
    for row in &table.rows {
        let _ = writeln!(csv, "{},{},{},{}", row.p, row.gini_mean, row.gini_sd, row.gini_of_mean_curve);
    }
    put("sweep.csv", csv.into_bytes())?;
    let mut curves = String::from("rank");
    for row in &table.rows {
        let _ = write!(curves, ",p={}", row.p);
    }
    curves.push('\n');
    for r in 0..table.spec.n {
        let _ = write!(curves, "{}", r + 1);
        for row in &table.rows {
            let _ = write!(curves, ",{}", row.mean_rank_curve[r]);
        }
        curves.push('\n');
    }
    put("sweep_rank_curves.csv", curves.into_bytes())?;
    if emit_plots {
        let labels: Vec<String> = table.rows.iter().map(|r| format!("p={}", r.p)).collect();
        let series: Vec<Series<'_>> = table
            .rows
            .iter()
            .zip(&labels)
            .map(|(row, label)| Series { label, points: ranked_points(&row.mean_rank_curve) })
            .collect();
        put("sweep_rank_curves.svg", log_log_chart("rank curves by mixing probability", "rank", "mean in-degree", &series).into_bytes())?;
    }
    Ok(written)
}

pub fn export_scaling(rows: &[ScalingRow], dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
    ensure_dir(dir)?;
    let mut csv = String::from("n,mean_diameter,mean_apl,log2_n\n");
    for row in rows {
        let _ = writeln!(csv, "{},{},{},{}", row.n, row.mean_diameter, row.mean_apl, row.log2_n);
    }
    let path = dir.join("scaling.csv");
    write_atomic(&path, csv.as_bytes())?;
    let json = dir.join("scaling.json");
    write_atomic(&json, &to_json(&rows))?;
    Ok(vec![path, json])
}

pub fn export_empirical(result: &EmpiricalResult, dir: &Path, emit_plots: bool) -> Result<Vec<PathBuf>, ExperimentError> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    let json = dir.join("empirical.json");
    write_atomic(&json, &to_json(result))?;
    written.push(json);
    let mut csv = String::from("rank,normalized_followers\n");
    for (r, v) in result.normalized_rank_curve.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", r + 1, v);
    }
    let path = dir.join("empirical_rank_curve.csv");
    write_atomic(&path, csv.as_bytes())?;
    written.push(path);
    if emit_plots {
        let svg = log_log_chart(
            "normalized follower rank curve",
            "rank",
            "followers",
            &[Series { label: "empirical", points: ranked_points(&result.normalized_rank_curve) }],
        );
        let path = dir.join("empirical_rank_curve.svg");
        write_atomic(&path, svg.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

/// Per-rank comparison helper: largest relative deviation of `observed`
/// from `expected` over the 1-based rank range `ranks`.
pub fn max_relative_error(observed: &[f64], expected: &[f64], ranks: std::ops::RangeInclusive<usize>) -> (usize, f64) {
    ranks
        .map(|r| (r, (observed[r - 1] - expected[r - 1]).abs() / expected[r - 1].abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
}

/// Descending rank curve of a single graph as floats.
pub fn rank_values(indegrees: &[u32]) -> Vec<f64> {
    metrics::sorted_descending(indegrees).into_iter().map(f64::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_rejects_unknown_keys() {
        let ok = r#"{"model":"matthew","n":100,"m_cap":3,"runs":2,"seed_base":7}"#;
        let spec = ExperimentSpec::from_json(ok).unwrap();
        assert_eq!(spec.runs, 2);
        assert_eq!(spec.xmin, DEFAULT_XMIN);
        let bad = r#"{"model":"matthew","n":100,"m_cap":3,"runs":2,"colour":"red"}"#;
        assert!(matches!(ExperimentSpec::from_json(bad), Err(ExperimentError::Spec(_))));
    }

    #[test]
    fn spec_validation() {
        let mut spec = ExperimentSpec::new(ModelKind::Hybrid, 50, 3, 0);
        assert!(matches!(spec.validate(), Err(ExperimentError::Spec(_))));
        spec.runs = 1;
        spec.sweep = Some(Sweep::P(vec![0.0, 1.2]));
        assert!(matches!(spec.validate(), Err(ExperimentError::Config(ConfigError::MixingProbability(_)))));
        spec.sweep = Some(Sweep::N(vec![100, 50]));
        assert!(spec.validate().is_err());
        spec.sweep = Some(Sweep::N(vec![50, 100]));
        spec.validate().unwrap();
    }

    #[test]
    fn sweep_json_shape() {
        let text = r#"{"model":"hybrid","n":100,"m_cap":3,"runs":1,"sweep":{"p":[0.0,0.5]}}"#;
        let spec = ExperimentSpec::from_json(text).unwrap();
        assert_eq!(spec.sweep, Some(Sweep::P(vec![0.0, 0.5])));
    }

    #[test]
    fn scalar_summary() {
        let s = ScalarSummary::of(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((s.mean, s.variance), (2.0, 1.0));
        assert_eq!(ScalarSummary::of(&[4.0]).unwrap().variance, 0.0);
        assert!(ScalarSummary::of(&[]).is_none());
    }

    #[test]
    fn follower_parsing() {
        assert_eq!(parse_followers("10\n5\n\n5\n").unwrap(), vec![10.0, 5.0, 5.0]);
        assert_eq!(parse_followers("a,3\nb,4\n").unwrap(), vec![3.0, 4.0]);
        assert_eq!(parse_followers("3\nx\n").unwrap_err().0, 2);
        assert_eq!(parse_followers("3\n-1\n").unwrap_err().0, 2);
        assert!(parse_followers("\n\n").is_err());
    }

    #[test]
    fn density_normalization() {
        assert_eq!(normalize_density(&[10.0, 5.0, 5.0], 5.0), vec![7.5, 3.75, 3.75]);
        let r = empirical_from_text(Path::new("x.csv"), "10\n5\n5\n", 5.0).unwrap();
        assert_eq!(r.normalized_rank_curve, vec![7.5, 3.75, 3.75]);
        let raw_gini = gini(&[10.0, 5.0, 5.0]).unwrap();
        assert!((r.gini - raw_gini).abs() < 1e-15);
        assert!((gini(&r.normalized_rank_curve).unwrap() - raw_gini).abs() < 1e-12);
        assert!(matches!(
            empirical_from_text(Path::new("x.csv"), "0\n0\n", 5.0),
            Err(ExperimentError::Metrics(MetricsError::AllZero))
        ));
        assert!(matches!(
            empirical_from_text(Path::new("x.csv"), "1\nfoo\n", 5.0),
            Err(ExperimentError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn relative_error_helper() {
        let (rank, err) = max_relative_error(&[1.0, 2.2, 3.0], &[1.0, 2.0, 3.0], 1..=3);
        assert_eq!(rank, 2);
        assert!((err - 0.1).abs() < 1e-12);
    }
}
