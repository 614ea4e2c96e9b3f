//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p netforge-core --test acceptance`; pass criterion
//! numbers as arguments (`-- 1 4 8`) to run a subset.

use std::time::{Duration, Instant};

use netforge::experiment::{export_results, hybrid_sweep, max_relative_error, run_batch, small_world_scaling, ExperimentSpec};
use netforge::formation::{check_meritocracy_equilibrium, generate, FormationConfig, ModelKind};
use netforge::metrics::{fit_power_law, gini, PathMode};
use netforge::theory::{
    brute_force_oracle, exact_expected_indegree, matthew_approx_curve, merit_approx_curve, recursion_table,
    single_crossing_index,
};
use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, TestRunner};

// Tolerances and sizes, fixed here for every criterion.
const THEORY_REL_TOL: f64 = 1e-10;
const THEORY_TIME_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(30);
const MC_RUNS: usize = 100_000;
const MC_SIGMAS: f64 = 4.0;
const MC_TIME_LIMIT: Duration = Duration::from_secs(60);
const MATTHEW_SUM_REL_TOL: f64 = 1e-6;
const LARGE_N: usize = 10_000;
const M: usize = 5;
const CURVE_RUNS: usize = 100;
const CURVE_REL_TOL: f64 = 0.05;
const XMIN: u32 = 10;
const MERIT_ALPHA_RANGE: (f64, f64) = (2.0, 3.0);
const MATTHEW_ALPHA: f64 = 1.5;
const MATTHEW_ALPHA_TOL: f64 = 0.2;
const SWEEP_PS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
const SCALING_NS: [usize; 4] = [1000, 2000, 4000, 8000];
const SCALING_RUNS: usize = 20;
const DOUBLING_STEP: (f64, f64) = (0.0, 2.0);
const CLUSTERING_N: usize = 2000;
const CLUSTERING_FACTOR: f64 = 3.0;
const PROPERTY_CASES: u32 = 1000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_theory_consistency() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [3, 10, 100, 10_000] {
        for m in [1, 2, 5] {
            if m > n - 1 {
                continue;
            }
            let table = recursion_table(n, m).unwrap();
            let exact = exact_expected_indegree(n, m).unwrap();
            for (a, b) in table.row(m).iter().zip(&exact.values) {
                worst = worst.max(rel(*a, *b));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= THEORY_REL_TOL && elapsed < THEORY_TIME_LIMIT,
        format!("max relative error {worst:.2e} (tol {THEORY_REL_TOL:e}), {elapsed:.2?}"),
    )
}

fn c2_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 3..=8 {
        for m in 1..n {
            let oracle = brute_force_oracle(n, m).unwrap();
            let exact = exact_expected_indegree(n, m).unwrap();
            for i in 2..=n {
                worst = worst.max(rel(oracle.at(i), exact.at(i)));
            }
        }
    }
    let formula = exact_expected_indegree(3, 2).unwrap().at(1);
    let exhaustive = brute_force_oracle(3, 2).unwrap().at(1);
    let deviation = formula == 2.5 && exhaustive == 2.0;
    let elapsed = start.elapsed();
    outcome(
        worst <= THEORY_REL_TOL && deviation && elapsed < ORACLE_TIME_LIMIT,
        format!(
            "max relative error for i>=2: {worst:.2e}; rank-1 at n=3,M=2: formula {formula} vs oracle {exhaustive}; {elapsed:.2?}"
        ),
    )
}

fn c3_meritocracy_monte_carlo() -> Outcome {
    let start = Instant::now();
    let (n, m) = (6, 3);
    let oracle = brute_force_oracle(n, m).unwrap();
    let mut sum = vec![0.0; n];
    let mut sum_sq = vec![0.0; n];
    for seed in 0..MC_RUNS as u64 {
        let g = generate(&FormationConfig::new(ModelKind::Meritocracy, n, m, seed)).unwrap();
        for (i, &d) in g.in_degrees().iter().enumerate() {
            sum[i] += d as f64;
            sum_sq[i] += (d as f64).powi(2);
        }
    }
    let runs = MC_RUNS as f64;
    let mut worst_z = 0.0f64;
    for i in 0..n {
        let mean = sum[i] / runs;
        let var = (sum_sq[i] / runs - mean * mean) * runs / (runs - 1.0);
        let se = (var / runs).sqrt();
        worst_z = worst_z.max((mean - oracle.values[i]).abs() / se);
    }
    let elapsed = start.elapsed();
    outcome(
        worst_z <= MC_SIGMAS && elapsed < MC_TIME_LIMIT,
        format!("max |z| {worst_z:.2} over ranks (limit {MC_SIGMAS}), {MC_RUNS} runs, {elapsed:.2?}"),
    )
}

fn c4_matthew_identity() -> Outcome {
    let curve = matthew_approx_curve(LARGE_N, M).unwrap();
    let sum: f64 = curve.values.iter().sum();
    let target = (M * LARGE_N) as f64;
    let sum_ok = rel(sum, target) <= MATTHEW_SUM_REL_TOL;
    let mut graphs_ok = true;
    for seed in 0..10 {
        let g = generate(&FormationConfig::new(ModelKind::Matthew, LARGE_N, M, seed)).unwrap();
        graphs_ok &= g.edge_count() == M * LARGE_N && g.out_degrees().iter().all(|&d| d as usize == M);
    }
    outcome(
        sum_ok && graphs_ok,
        format!("sum of curve {sum:.6} vs M*N {target}; 10 simulated graphs exact M*N edges, out-degree M: {graphs_ok}"),
    )
}

struct LargeBatches {
    merit: netforge::ResultSet,
    matthew: netforge::ResultSet,
}

fn large_batches() -> LargeBatches {
    let batch = |model| {
        let mut spec = ExperimentSpec::new(model, LARGE_N, M, CURVE_RUNS);
        spec.paths = PathMode::Skip;
        spec.xmin = XMIN;
        run_batch(&spec).unwrap()
    };
    LargeBatches { merit: batch(ModelKind::Meritocracy), matthew: batch(ModelKind::Matthew) }
}

fn c5_curve_match(b: &LargeBatches) -> Outcome {
    let exact = exact_expected_indegree(LARGE_N, M).unwrap();
    // the exact curve is indexed by quality rank, so compare the per-id mean
    let (merit_rank, merit_err) = max_relative_error(&b.merit.mean_indegree_by_node, &exact.values, 2..=LARGE_N);
    let within: usize = (2..=LARGE_N)
        .filter(|&i| rel(b.merit.mean_indegree_by_node[i - 1], exact.at(i)) <= CURVE_REL_TOL)
        .count();
    let approx = matthew_approx_curve(LARGE_N, M).unwrap();
    let (matthew_rank, matthew_err) = max_relative_error(&b.matthew.mean_rank_curve, &approx.values, 10..=LARGE_N / 2);
    let top = b.matthew.mean_rank_curve[0];
    outcome(
        merit_err <= CURVE_REL_TOL && matthew_err <= CURVE_REL_TOL,
        format!(
            "meritocracy max rel err {merit_err:.3} at rank {merit_rank} ({within}/{} ranks within {CURVE_REL_TOL}); \
             matthew max rel err {matthew_err:.3} at rank {matthew_rank} (simulated {:.2} vs formula {:.2}); \
             matthew mean top in-degree {top:.1} vs formula {:.2}",
            LARGE_N - 1,
            b.matthew.mean_rank_curve[matthew_rank - 1],
            approx.at(matthew_rank),
            approx.at(1),
        ),
    )
}

fn c6_power_law(b: &LargeBatches) -> Outcome {
    let merit_alpha = fit_power_law(&b.merit.pooled_indegrees(), XMIN).unwrap();
    let matthew_alpha = fit_power_law(&b.matthew.pooled_indegrees(), XMIN).unwrap();
    let merit_ok = merit_alpha > MERIT_ALPHA_RANGE.0 && merit_alpha < MERIT_ALPHA_RANGE.1;
    let matthew_ok = (matthew_alpha - MATTHEW_ALPHA).abs() <= MATTHEW_ALPHA_TOL;
    outcome(
        merit_ok && matthew_ok,
        format!(
            "meritocracy alpha {merit_alpha:.3} in {MERIT_ALPHA_RANGE:?}: {merit_ok}; \
             matthew alpha {matthew_alpha:.3} vs {MATTHEW_ALPHA}±{MATTHEW_ALPHA_TOL}: {matthew_ok}"
        ),
    )
}

fn c7_inequality(b: &LargeBatches) -> Outcome {
    let g3 = gini(&merit_approx_curve(LARGE_N, M).unwrap().values).unwrap();
    let g4 = gini(&matthew_approx_curve(LARGE_N, M).unwrap().values).unwrap();
    let sim_merit = b.merit.gini_of_mean_curve.unwrap();
    let sim_matthew = b.matthew.gini_of_mean_curve.unwrap();
    let mut spec = ExperimentSpec::new(ModelKind::Hybrid, LARGE_N, M, CURVE_RUNS);
    spec.paths = PathMode::Skip;
    spec.seed_base = 1_000_000;
    let sweep = hybrid_sweep(&spec, &SWEEP_PS).unwrap();
    let ginis: Vec<f64> = sweep.rows.iter().map(|r| r.gini_of_mean_curve).collect();
    let monotone = ginis.windows(2).all(|w| w[1] >= w[0]);
    let passed = g3 > g4 && sim_merit > sim_matthew && monotone;
    outcome(
        passed,
        format!(
            "analytic {g3:.4} > {g4:.4}; simulated {sim_merit:.4} > {sim_matthew:.4}; hybrid p={SWEEP_PS:?} -> {:?}",
            ginis.iter().map(|g| format!("{g:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn c8_single_crossing() -> Outcome {
    let a = merit_approx_curve(LARGE_N, M).unwrap();
    let b = matthew_approx_curve(LARGE_N, M).unwrap();
    let report = single_crossing_index(&a.values, &b.values).unwrap();
    let head_higher = a.at(1) > b.at(1);
    outcome(
        report.is_single_crossing() && head_higher,
        format!("{} sign change(s), crossing at rank {:?}", report.sign_changes, report.crossing_rank),
    )
}

fn c9_small_world() -> Outcome {
    let mut details = Vec::new();
    let mut passed = true;
    for (label, model) in [("meritocracy", ModelKind::Meritocracy), ("matthew", ModelKind::Matthew)] {
        let mut spec = ExperimentSpec::new(model, SCALING_NS[0], M, SCALING_RUNS);
        spec.paths = PathMode::Exact;
        let rows = small_world_scaling(&spec, &SCALING_NS).unwrap();
        let diam: Vec<f64> = rows.iter().map(|r| r.mean_diameter).collect();
        let steps_ok = diam.windows(2).all(|w| {
            let step = w[1] - w[0];
            step >= DOUBLING_STEP.0 && step <= DOUBLING_STEP.1
        });
        let apl_ok = rows.iter().all(|r| r.mean_apl < r.mean_diameter);
        passed &= steps_ok && apl_ok;
        details.push(format!(
            "{label} diameters {:?} apl {:?}",
            diam.iter().map(|d| format!("{d:.2}")).collect::<Vec<_>>(),
            rows.iter().map(|r| format!("{:.2}", r.mean_apl)).collect::<Vec<_>>()
        ));
    }
    let clustering = |model| {
        let mut spec = ExperimentSpec::new(model, CLUSTERING_N, M, SCALING_RUNS);
        spec.paths = PathMode::Skip;
        spec.seed_base = 500;
        run_batch(&spec).unwrap().scalar("avg_clustering").unwrap().mean
    };
    let merit = clustering(ModelKind::Meritocracy);
    let matthew = clustering(ModelKind::Matthew);
    let er = clustering(ModelKind::ErDirected);
    let cluster_ok = merit > er && matthew <= CLUSTERING_FACTOR * er && matthew >= er / CLUSTERING_FACTOR;
    passed &= cluster_ok;
    details.push(format!("clustering meritocracy {merit:.5}, matthew {matthew:.5}, er {er:.5}"));
    outcome(passed, details.join("; "))
}

fn c10_determinism_and_properties() -> Outcome {
    let mut spec = ExperimentSpec::new(ModelKind::Hybrid, 400, 4, 3);
    spec.p = 0.5;
    spec.seed_base = 77;
    spec.emit_plots = true;
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let files_a = export_results(&run_batch(&spec).unwrap(), dir_a.path(), true).unwrap();
    export_results(&run_batch(&spec).unwrap(), dir_b.path(), true).unwrap();
    let mut identical = true;
    for path in &files_a {
        let other = dir_b.path().join(path.file_name().unwrap());
        identical &= std::fs::read(path).unwrap() == std::fs::read(other).unwrap();
    }

    let strategy = (0usize..4, 2usize..60, any::<u64>(), 0.0f64..=1.0, 0.0f64..=1.0).prop_flat_map(
        |(model, n, seed, p, density)| (Just(model), Just(n), 1..n, Just(seed), Just(p), Just(density)),
    );
    let mut runner = TestRunner::new(ProptestConfig { cases: PROPERTY_CASES, failure_persistence: None, ..Default::default() });
    let result = runner.run(&strategy, |(model, n, m, seed, p, density)| {
        let model = [ModelKind::Meritocracy, ModelKind::Matthew, ModelKind::Hybrid, ModelKind::ErDirected][model];
        let config = FormationConfig::new(model, n, m, seed).with_p(p).with_density(density);
        let g = generate(&config).unwrap();
        g.verify_invariants().map_err(TestCaseError::fail)?;
        if model != ModelKind::ErDirected {
            prop_assert!(g.out_degrees().iter().all(|&d| d as usize <= m));
        }
        match model {
            ModelKind::Meritocracy => check_meritocracy_equilibrium(&g, m).map_err(TestCaseError::fail)?,
            ModelKind::Matthew => prop_assert_eq!(g.edge_count(), m * n),
            ModelKind::Hybrid if p == 0.0 => prop_assert_eq!(g.edge_count(), m * n),
            ModelKind::Hybrid if p == 1.0 => check_meritocracy_equilibrium(&g, m).map_err(TestCaseError::fail)?,
            ModelKind::Hybrid => prop_assert!(g.out_degrees().iter().all(|&d| d >= 1)),
            _ => {}
        }
        let text = g.to_edge_list();
        prop_assert_eq!(netforge::DirectedGraph::from_edge_list(&text, n).unwrap(), g);
        Ok(())
    });
    let props = result.is_ok();
    outcome(
        identical && props,
        format!(
            "{} exported files byte-identical: {identical}; {PROPERTY_CASES} randomized configs: {}",
            files_a.len(),
            match result {
                Ok(()) => "all invariants hold".to_string(),
                Err(e) => e.to_string(),
            }
        ),
    )
}

fn main() {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wants = |k: u32| selected.is_empty() || selected.contains(&k);
    let mut results: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let mut run = |k: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        if wants(k) {
            let start = Instant::now();
            let o = f();
            let elapsed = start.elapsed();
            println!("[{}] {k:>2}. {name}: {} ({elapsed:.1?})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
            results.push((k, name, o, elapsed));
        }
    };
    run(1, "theory consistency", &mut c1_theory_consistency);
    run(2, "oracle agreement", &mut c2_oracle_agreement);
    run(3, "meritocracy monte carlo", &mut c3_meritocracy_monte_carlo);
    run(4, "matthew identity", &mut c4_matthew_identity);
    if [5, 6, 7].iter().any(|&k| wants(k)) {
        let batches = large_batches();
        run(5, "curve match", &mut || c5_curve_match(&batches));
        run(6, "power-law exponents", &mut || c6_power_law(&batches));
        run(7, "inequality ordering", &mut || c7_inequality(&batches));
    }
    run(8, "single crossing", &mut c8_single_crossing);
    run(9, "small world and clustering", &mut c9_small_world);
    run(10, "determinism and property suite", &mut c10_determinism_and_properties);

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" (criteria {failed:?})") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
