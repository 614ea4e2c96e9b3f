//! Browser bindings: theory curves, single simulations and a hybrid Gini
//! sweep, each returned as a JSON string for `www/index.html` to plot.

use netforge::formation::{generate, FormationConfig, ModelKind};
use netforge::metrics::{fit_power_law, gini_of_counts, sorted_descending, DEFAULT_XMIN};
use netforge::theory;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Browsers stall on anything much larger.
pub const MAX_NODES: usize = 20_000;

#[derive(Debug, Serialize)]
pub struct Curves {
    pub exact: Vec<f64>,
    pub merit_approx: Vec<f64>,
    pub matthew_approx: Vec<f64>,
    pub crossing_rank: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Simulation {
    pub model: &'static str,
    pub edge_count: usize,
    pub rank_curve: Vec<u32>,
    pub gini: Option<f64>,
    pub alpha_hat: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub p: f64,
    pub gini_mean: f64,
}

fn check_size(n: usize) -> Result<(), String> {
    if n > MAX_NODES {
        return Err(format!("n is limited to {MAX_NODES} in the browser"));
    }
    Ok(())
}

pub fn curves(n: usize, m: usize) -> Result<Curves, String> {
    check_size(n)?;
    let exact = theory::exact_expected_indegree(n, m).map_err(|e| e.to_string())?;
    let matthew = theory::matthew_approx_curve(n, m).map_err(|e| e.to_string())?;
    let merit = theory::merit_approx_curve(n, m).map_err(|e| e.to_string())?;
    let crossing = theory::single_crossing_index(&exact.values, &matthew.values).map_err(|e| e.to_string())?;
    Ok(Curves {
        exact: exact.values,
        merit_approx: merit.values,
        matthew_approx: matthew.values,
        crossing_rank: crossing.crossing_rank,
    })
}

pub fn simulation(model: &str, n: usize, m: usize, p: f64, seed: u64) -> Result<Simulation, String> {
    check_size(n)?;
    let model: ModelKind = model.parse().map_err(|e: netforge::ConfigError| e.to_string())?;
    let config = FormationConfig::new(model, n, m, seed)
        .with_p(p)
        .with_density(FormationConfig::matched_density(n, m));
    let g = generate(&config).map_err(|e| e.to_string())?;
    let indegrees = g.in_degrees();
    Ok(Simulation {
        model: model.as_str(),
        edge_count: g.edge_count(),
        rank_curve: sorted_descending(indegrees),
        gini: gini_of_counts(indegrees).ok(),
        alpha_hat: fit_power_law(indegrees, DEFAULT_XMIN).ok(),
    })
}

/// Mean per-run Gini at `steps + 1` evenly spaced mixing probabilities.
pub fn sweep(n: usize, m: usize, runs: usize, steps: usize, seed: u64) -> Result<Vec<SweepPoint>, String> {
    check_size(n)?;
    if runs == 0 || steps == 0 {
        return Err("runs and steps must be positive".into());
    }
    (0..=steps)
        .map(|k| {
            let p = k as f64 / steps as f64;
            let mut total = 0.0;
            for r in 0..runs {
                let config = FormationConfig::new(ModelKind::Hybrid, n, m, seed + r as u64).with_p(p);
                let g = generate(&config).map_err(|e| e.to_string())?;
                total += gini_of_counts(g.in_degrees()).map_err(|e| e.to_string())?;
            }
            Ok(SweepPoint { p, gini_mean: total / runs as f64 })
        })
        .collect()
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = theoryCurves)]
pub fn theory_curves(n: usize, m: usize) -> Result<String, JsError> {
    to_js(curves(n, m))
}

#[wasm_bindgen]
pub fn simulate(model: &str, n: usize, m: usize, p: f64, seed: u64) -> Result<String, JsError> {
    to_js(simulation(model, n, m, p, seed))
}

#[wasm_bindgen(js_name = hybridSweep)]
pub fn hybrid_sweep(n: usize, m: usize, runs: usize, steps: usize, seed: u64) -> Result<String, JsError> {
    to_js(sweep(n, m, runs, steps, seed))
}
