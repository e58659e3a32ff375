//! The dataset-producing subcommands, callable as library functions.

use std::f64::consts::{PI, TAU};

use anyhow::{bail, Result};
use serde::Serialize;
use su2phase::interferometer::PreparedInput;
use su2phase::qpsi::{EstimateReport, ShotCounts};
use su2phase::{benchmark_sweep, lms_estimate, simulate_shots, HalfInt};

use crate::config::{ExperimentFile, SweepFile};
use crate::dataset::{ColumnData, DatasetKind, FigureDataset, Grid, Metadata};
use crate::number::{num17, num17_opt};
use crate::spec::StateSpec;
use crate::TOOL_VERSION;

/// Lowest value of the dB column; exact zeros are pinned here.
pub const DB_FLOOR: f64 = -200.0;

/// Smallest accepted angle grid.
pub const MIN_ANGLE_POINTS: usize = 64;

/// `points` values from `-π` to `π` inclusive; `0` and `±π/2` are hit
/// exactly when the grid contains them.
fn symmetric_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|k| PI * ((2 * k) as f64 - last) / last).collect()
}

fn metadata(states: Vec<String>, grid: Option<Grid>, db_floor: Option<f64>, command: &str) -> Metadata {
    Metadata { states, grid, db_floor, tool_version: TOOL_VERSION.to_string(), command: command.to_string() }
}

/// Angle distributions `P(φ)` of one or more states on an inclusive
/// `[-π, π]` grid.
///
/// Per state the columns are `P[spec]`, `dB[spec] = 10 log10(2πP)` floored
/// at [`DB_FLOOR`], and `exact_zero[spec]`. A value is an exact zero when
/// `|ψ(φ)|` lies within the rounding bound `(2j+1) ε Σ|ψ_m|` of the
/// Fourier sum; its dB entry is the floor. `P` itself is never altered.
pub fn angle_dist(states: &[StateSpec], points: usize, command: &str) -> Result<FigureDataset> {
    if states.is_empty() {
        bail!("at least one --state is required");
    }
    if points < MIN_ANGLE_POINTS {
        bail!("--points must be at least {MIN_ANGLE_POINTS}, got {points}");
    }
    let phis = symmetric_grid(points);
    let grid = Grid { variable: "phi", points, start: -PI, stop: PI };
    let labels = states.iter().map(StateSpec::to_string).collect();
    let mut out = FigureDataset::new(DatasetKind::AnglePolar, metadata(labels, Some(grid), Some(DB_FLOOR), command));
    out.push("phi", ColumnData::Real(phis.clone()))?;

    for spec in states {
        let sector = spec.angle_sector()?;
        let abs_sum: f64 = sector.amps().iter().map(|a| a.norm()).sum();
        let bound = sector.j().dim() as f64 * f64::EPSILON * abs_sum;
        let mut probs = Vec::with_capacity(points);
        let mut db = Vec::with_capacity(points);
        let mut zero = Vec::with_capacity(points);
        for &phi in &phis {
            let psi = sector.angle_wavefunction(phi)?;
            let p = psi.norm_sqr() / TAU;
            let is_zero = psi.norm() <= bound;
            let level = if is_zero || p <= 0.0 { DB_FLOOR } else { (10.0 * (TAU * p).log10()).max(DB_FLOOR) };
            probs.push(p);
            db.push(level);
            zero.push(is_zero);
        }
        out.push(format!("P[{spec}]"), ColumnData::Real(probs))?;
        out.push(format!("dB[{spec}]"), ColumnData::Real(db))?;
        out.push(format!("exact_zero[{spec}]"), ColumnData::Flag(zero))?;
    }
    Ok(out)
}

/// Outcome probabilities `P_m(Φ)` on an inclusive `[-π, π]` grid, one
/// column per outcome from `m = j` down to `-j`, plus their sum.
pub fn interferometer_sweep(state: &StateSpec, phi_points: usize, command: &str) -> Result<FigureDataset> {
    if phi_points < 2 {
        bail!("--phi-points must be at least 2, got {phi_points}");
    }
    let prepared = PreparedInput::new(&state.two_mode())?;
    let phis = symmetric_grid(phi_points);
    let grid = Grid { variable: "Phi", points: phi_points, start: -PI, stop: PI };
    let mut out = FigureDataset::new(
        DatasetKind::InterferometerSweep,
        metadata(vec![state.to_string()], Some(grid), None, command),
    );
    let rows: Vec<Vec<f64>> = phis.iter().map(|&phi| prepared.probabilities(phi)).collect();
    out.push("Phi", ColumnData::Real(phis))?;
    for (k, m) in prepared.outcomes().iter().enumerate() {
        out.push(format!("P[m={m}]"), ColumnData::Real(rows.iter().map(|r| r[k]).collect()))?;
    }
    out.push("sum", ColumnData::Real(rows.iter().map(|r| r.iter().sum()).collect()))?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeCount {
    pub m: HalfInt,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDiagnostics {
    pub n_shots: u64,
    pub seed: u64,
    pub grid_points: usize,
    pub weighted: bool,
    pub degenerate: bool,
}

/// The JSON document written by `qpsi --config`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QpsiReport {
    pub tool_version: String,
    pub command: String,
    pub config: ExperimentFile,
    /// Outcomes in descending `m`.
    pub counts: Vec<OutcomeCount>,
    #[serde(serialize_with = "num17")]
    pub phi_hat: f64,
    #[serde(serialize_with = "num17")]
    pub residual: f64,
    #[serde(serialize_with = "num17_opt")]
    pub fisher: Option<f64>,
    /// `1/√(n_shots F(Φ_hat))`, absent where `F` vanishes.
    #[serde(serialize_with = "num17_opt")]
    pub crb: Option<f64>,
    pub diagnostics: ReportDiagnostics,
}

pub struct QpsiOutcome {
    pub report: QpsiReport,
    pub counts: ShotCounts,
    pub estimate: EstimateReport,
    /// The sampled objective `J(Φ)`.
    pub curve: FigureDataset,
}

impl QpsiOutcome {
    pub fn degenerate(&self) -> bool {
        self.report.diagnostics.degenerate
    }
}

/// Simulates one shot record and fits `Φ`.
pub fn qpsi_run(file: &ExperimentFile, command: &str) -> Result<QpsiOutcome> {
    let cfg = file.to_config();
    let counts = simulate_shots(&cfg)?;
    let estimate = lms_estimate(&counts, &cfg.state, &cfg)?;
    let prepared = PreparedInput::new(&cfg.state)?;
    let fisher = prepared
        .fisher_information(estimate.phi_hat)
        .ok()
        .filter(|f| f.is_determinate())
        .map(|f| f.value);
    let crb = fisher.filter(|&f| f > 1e-8).map(|f| 1.0 / (cfg.n_shots as f64 * f).sqrt());
    let d = &estimate.diagnostics;
    let report = QpsiReport {
        tool_version: TOOL_VERSION.to_string(),
        command: command.to_string(),
        config: file.clone(),
        counts: prepared.outcomes().iter().map(|&m| OutcomeCount { m, count: counts.count(m) }).collect(),
        phi_hat: estimate.phi_hat,
        residual: estimate.residual,
        fisher,
        crb,
        diagnostics: ReportDiagnostics {
            n_shots: d.n_shots,
            seed: d.seed,
            grid_points: d.grid_points,
            weighted: d.weighted,
            degenerate: d.degenerate,
        },
    };

    let grid = Grid { variable: "Phi", points: estimate.objective_curve.len(), start: 0.0, stop: PI };
    let mut curve =
        FigureDataset::new(DatasetKind::QpsiObjective, metadata(vec![file.state.to_string()], Some(grid), None, command));
    curve.push("Phi", ColumnData::Real(estimate.objective_curve.iter().map(|p| p.phi).collect()))?;
    curve.push("objective", ColumnData::Real(estimate.objective_curve.iter().map(|p| p.value).collect()))?;
    Ok(QpsiOutcome { report, counts, estimate, curve })
}

/// Runs every cell of a sweep file and tabulates RMSE, bias and the
/// Cramér-Rao bound per (state, Φ, n_shots).
pub fn qpsi_sweep(file: &SweepFile, command: &str) -> Result<FigureDataset> {
    let rows = benchmark_sweep(&file.to_spec())?;
    let labels = file.states.0.iter().map(StateSpec::to_string).collect();
    let mut out = FigureDataset::new(DatasetKind::QpsiBenchmark, metadata(labels, None, None, command));
    out.push("state", ColumnData::Text(rows.iter().map(|r| r.state.clone()).collect()))?;
    out.push("Phi", ColumnData::Real(rows.iter().map(|r| r.phi).collect()))?;
    out.push("n_shots", ColumnData::Real(rows.iter().map(|r| r.n_shots as f64).collect()))?;
    out.push("seeds", ColumnData::Real(rows.iter().map(|r| r.seeds as f64).collect()))?;
    out.push("rmse", ColumnData::OptionalReal(rows.iter().map(|r| r.rmse).collect()))?;
    out.push("mean_bias", ColumnData::OptionalReal(rows.iter().map(|r| r.mean_bias).collect()))?;
    out.push("fisher", ColumnData::OptionalReal(rows.iter().map(|r| r.fisher).collect()))?;
    out.push("crb", ColumnData::OptionalReal(rows.iter().map(|r| r.crb).collect()))?;
    out.push("degenerate_runs", ColumnData::Real(rows.iter().map(|r| r.degenerate_runs as f64).collect()))?;
    out.push("error", ColumnData::Text(rows.iter().map(|r| r.error.clone().unwrap_or_default()).collect()))?;
    Ok(out)
}
