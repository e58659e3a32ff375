use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lms_estimate, simulate_shots, ExperimentConfig, DEFAULT_GRID_POINTS, DEFAULT_REFINE_TOL};
use crate::error::{Error, Result};
use crate::interferometer::PreparedInput;
use crate::states::TwoModeState;

/// Fisher information at or below this is treated as zero (no bound).
const FISHER_ZERO: f64 = 1e-8;

/// A grid of QPSI experiments: every state × phase × shot count, each
/// repeated over `seeds` independent records.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    /// `(label, state)` pairs; the label is copied into each row.
    pub states: Vec<(String, TwoModeState)>,
    pub phis: Vec<f64>,
    pub shot_schedule: Vec<u64>,
    pub seeds: u64,
    /// Record `s` of every cell uses seed `base_seed + s`.
    pub base_seed: u64,
    pub grid_points: usize,
    pub refine_tol: f64,
    pub weighted: bool,
}

impl SweepSpec {
    pub fn new(states: Vec<(String, TwoModeState)>, phis: Vec<f64>, shot_schedule: Vec<u64>, seeds: u64) -> Self {
        SweepSpec {
            states,
            phis,
            shot_schedule,
            seeds,
            base_seed: 0,
            grid_points: DEFAULT_GRID_POINTS,
            refine_tol: DEFAULT_REFINE_TOL,
            weighted: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub state: String,
    pub phi: f64,
    pub n_shots: u64,
    pub seeds: u64,
    pub rmse: Option<f64>,
    pub mean_bias: Option<f64>,
    pub fisher: Option<f64>,
    /// `1/√(n_shots · F(Φ))`; absent when `F(Φ)` is zero or indeterminate.
    pub crb: Option<f64>,
    /// Records whose objective had a tied second minimum.
    pub degenerate_runs: u64,
    pub error: Option<String>,
}

impl BenchmarkRow {
    fn failed(state: &str, phi: f64, n_shots: u64, seeds: u64, err: &Error) -> Self {
        BenchmarkRow {
            state: state.to_string(),
            phi,
            n_shots,
            seeds,
            rmse: None,
            mean_bias: None,
            fisher: None,
            crb: None,
            degenerate_runs: 0,
            error: Some(err.to_string()),
        }
    }
}

fn run_cell(spec: &SweepSpec, label: &str, state: &TwoModeState, phi: f64, n_shots: u64) -> BenchmarkRow {
    let base = ExperimentConfig {
        state: state.clone(),
        phi_true: phi,
        n_shots,
        seed: spec.base_seed,
        grid_points: spec.grid_points,
        refine_tol: spec.refine_tol,
        weighted: spec.weighted,
    };
    if let Err(e) = base.validate() {
        return BenchmarkRow::failed(label, phi, n_shots, spec.seeds, &e);
    }

    let runs: Result<Vec<(f64, bool)>> = (0..spec.seeds)
        .into_par_iter()
        .map(|s| {
            let cfg = ExperimentConfig { seed: spec.base_seed.wrapping_add(s), ..base.clone() };
            let counts = simulate_shots(&cfg)?;
            let report = lms_estimate(&counts, &cfg.state, &cfg)?;
            Ok((report.phi_hat - phi, report.diagnostics.degenerate))
        })
        .collect();
    let runs = match runs {
        Ok(r) => r,
        Err(e) => return BenchmarkRow::failed(label, phi, n_shots, spec.seeds, &e),
    };

    let n = runs.len() as f64;
    let mean_bias = runs.iter().map(|r| r.0).sum::<f64>() / n;
    let rmse = (runs.iter().map(|r| r.0 * r.0).sum::<f64>() / n).sqrt();
    let fisher = PreparedInput::new(state).and_then(|p| p.fisher_information(phi));
    let (fisher, crb) = match fisher {
        Ok(f) if f.is_determinate() => {
            let crb = (f.value > FISHER_ZERO).then(|| 1.0 / (n_shots as f64 * f.value).sqrt());
            (Some(f.value), crb)
        }
        _ => (None, None),
    };
    BenchmarkRow {
        state: label.to_string(),
        phi,
        n_shots,
        seeds: spec.seeds,
        rmse: Some(rmse),
        mean_bias: Some(mean_bias),
        fisher,
        crb,
        degenerate_runs: runs.iter().filter(|r| r.1).count() as u64,
        error: None,
    }
}

/// Runs every cell of `spec`. A failing cell becomes a row with `error` set;
/// the sweep itself only fails on empty inputs. Rows come back in
/// state-major, then phase, then shot-count order, and are identical for
/// any thread count.
pub fn benchmark_sweep(spec: &SweepSpec) -> Result<Vec<BenchmarkRow>> {
    for (name, len) in [
        ("states", spec.states.len()),
        ("phis", spec.phis.len()),
        ("shot_schedule", spec.shot_schedule.len()),
        ("seeds", spec.seeds as usize),
    ] {
        if len == 0 {
            return Err(Error::OutOfRange { name, value: "0".into(), range: "nonempty" });
        }
    }
    let cells: Vec<(&str, &TwoModeState, f64, u64)> = spec
        .states
        .iter()
        .flat_map(|(label, state)| {
            spec.phis.iter().flat_map(move |&phi| {
                spec.shot_schedule
                    .iter()
                    .map(move |&n| (label.as_str(), state, phi, n))
            })
        })
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(label, state, phi, n)| run_cell(spec, label, state, phi, n))
        .collect())
}
