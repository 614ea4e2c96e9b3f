use std::fs;

use netforge::experiment::{
    empirical_from_text, export_results, export_sweep, hybrid_sweep, run_batch, small_world_scaling, ResultSet,
};
use netforge::formation::{generate, FormationConfig, HybridMixing};
use netforge::metrics::PathMode;
use netforge::{ExperimentSpec, ModelKind};

fn small_spec(model: ModelKind) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(model, 300, 4, 5);
    spec.seed_base = 11;
    spec
}

#[test]
fn batch_is_deterministic_and_seeded_per_run() {
    let spec = small_spec(ModelKind::Matthew);
    let a = run_batch(&spec).unwrap();
    let b = run_batch(&spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.provenance.seeds, vec![11, 12, 13, 14, 15]);
    assert!(a.provenance.timestamp.is_none());

    // run r is exactly the graph generated from seed_base + r
    let g = generate(&spec.base_config().with_seed(13)).unwrap();
    let mut degrees = g.in_degrees().to_vec();
    degrees.sort_unstable_by(|x, y| y.cmp(x));
    assert_eq!(a.runs[2].metrics.rank_curve, degrees);
    assert_eq!(a.scalar("edge_count").unwrap().mean, 1200.0);
}

#[test]
fn single_run_has_zero_variance() {
    let mut spec = small_spec(ModelKind::Meritocracy);
    spec.runs = 1;
    let result = run_batch(&spec).unwrap();
    let gini = result.scalar("gini").unwrap();
    assert_eq!(gini.count, 1);
    assert_eq!(gini.variance, 0.0);
    assert_eq!(Some(gini.mean), result.gini_of_mean_curve);
    assert!(!result.provenance.notes.is_empty());
}

#[test]
fn exports_have_headers_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let result = run_batch(&small_spec(ModelKind::ErDirected)).unwrap();
    let written = export_results(&result, dir.path(), true).unwrap();
    assert_eq!(written.len(), 6);

    let rank = fs::read_to_string(dir.path().join("rank_curve.csv")).unwrap();
    assert_eq!(rank.lines().next(), Some("rank,mean_indegree"));
    assert_eq!(rank.lines().count(), 301);
    let ccdf = fs::read_to_string(dir.path().join("degree_ccdf.csv")).unwrap();
    assert_eq!(ccdf.lines().next(), Some("indegree,ccdf"));
    let first: f64 = ccdf.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(first, 1.0);
    assert!(fs::read_to_string(dir.path().join("rank_curve.svg")).unwrap().starts_with("<svg"));

    let back: ResultSet = serde_json::from_slice(&fs::read(dir.path().join("metrics.json")).unwrap()).unwrap();
    assert_eq!(back, result);
    // no temp files left behind
    assert!(fs::read_dir(dir.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp")));
}

#[test]
fn sweep_rows_match_direct_batches() {
    let spec = small_spec(ModelKind::Hybrid);
    let table = hybrid_sweep(&spec, &[0.0, 0.5]).unwrap();
    let direct = run_batch(&ExperimentSpec { p: 0.5, ..spec.clone() }).unwrap();
    let row = &table.rows[1];
    assert_eq!(row.gini_mean, direct.scalar("gini").unwrap().mean);
    assert_eq!(row.mean_rank_curve, direct.mean_rank_curve);

    let dir = tempfile::tempdir().unwrap();
    export_sweep(&table, dir.path(), false).unwrap();
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let curves = fs::read_to_string(dir.path().join("sweep_rank_curves.csv")).unwrap();
    assert_eq!(curves.lines().next(), Some("rank,p=0,p=0.5"));
}

#[test]
fn mixing_key_reaches_the_generator() {
    let json = r#"{"model":"hybrid","n":200,"m_cap":3,"p":0.5,"runs":2,"mixing":"per_event"}"#;
    let spec = ExperimentSpec::from_json(json).unwrap();
    assert_eq!(spec.base_config().mixing, HybridMixing::PerEvent);
    // per-event mixing always fills every slot
    assert_eq!(run_batch(&spec).unwrap().scalar("edge_count").unwrap().mean, 600.0);
    let cfg = FormationConfig::new(ModelKind::Hybrid, 200, 3, 0).with_p(0.5);
    assert_eq!(cfg.mixing, HybridMixing::PerNode);
}

#[test]
fn scaling_row_matches_batch_path_stats() {
    let mut spec = small_spec(ModelKind::Matthew);
    spec.paths = PathMode::Skip;
    let rows = small_world_scaling(&spec, &[300]).unwrap();
    spec.paths = PathMode::Exact;
    let batch = run_batch(&spec).unwrap();
    assert_eq!(rows[0].mean_diameter, batch.scalar("diameter").unwrap().mean);
    assert_eq!(rows[0].mean_apl, batch.scalar("avg_path_length").unwrap().mean);
    assert!(small_world_scaling(&spec, &[400, 300]).is_err());
}

#[test]
fn empirical_normalization_is_scale_free() {
    let text = "a,10\nb,3\n\nc,0\nd,27\n";
    let scaled = "40\n12\n0\n108\n";
    let a = empirical_from_text("a.csv".as_ref(), text, 5.0).unwrap();
    let b = empirical_from_text("b.csv".as_ref(), scaled, 5.0).unwrap();
    assert_eq!(a.n, 4);
    assert!((a.normalized_rank_curve.iter().sum::<f64>() - 20.0).abs() < 1e-12);
    for (x, y) in a.normalized_rank_curve.iter().zip(&b.normalized_rank_curve) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!((a.gini - b.gini).abs() < 1e-12);
    assert!(empirical_from_text("bad".as_ref(), "3\nx\n", 5.0).is_err());
    assert!(empirical_from_text("zero".as_ref(), "0\n0\n", 5.0).is_err());
}
