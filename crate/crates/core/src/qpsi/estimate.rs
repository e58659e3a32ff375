use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ShotCounts};
use crate::angular::HalfInt;
use crate::error::{Error, Result};
use crate::interferometer::PreparedInput;
use crate::quadrature::golden_section_min;
use crate::states::TwoModeState;

/// Relative slack under which a second local minimum counts as a tie.
const DEGENERACY_RTOL: f64 = 1e-6;
const DEGENERACY_ATOL: f64 = 1e-15;
/// Objective differences below this are rounding noise and count as ties.
const OBJECTIVE_TIE: f64 = 1e-24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectivePoint {
    pub phi: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub n_shots: u64,
    pub seed: u64,
    pub grid_points: usize,
    pub weighted: bool,
    /// A second, well separated grid minimum ties with the reported one.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub phi_hat: f64,
    /// Objective value at `phi_hat`.
    pub residual: f64,
    pub objective_curve: Vec<ObjectivePoint>,
    pub diagnostics: Diagnostics,
}

struct Objective<'a> {
    prepared: &'a PreparedInput,
    freqs: Vec<f64>,
    weighted: bool,
    variance_floor: f64,
}

impl Objective<'_> {
    fn eval(&self, phi: f64) -> f64 {
        let probs = self.prepared.probabilities(phi);
        self.freqs
            .iter()
            .zip(probs)
            .map(|(f, p)| {
                let r = f - p;
                if self.weighted {
                    r * r / p.max(self.variance_floor)
                } else {
                    r * r
                }
            })
            .sum()
    }
}

/// Least-squares fit of `Φ ∈ [0, π]` to the observed outcome frequencies:
/// minimizes `Σ_m (f_m - P_m(Φ))²` (or its variance-weighted form) on a
/// uniform grid, then refines by golden-section search within the cells
/// adjacent to the best grid point. Ties go to the smaller `Φ`.
pub fn lms_estimate(
    counts: &ShotCounts,
    state: &TwoModeState,
    config: &ExperimentConfig,
) -> Result<EstimateReport> {
    let total: u64 = counts.counts.values().sum();
    if counts.total == 0 || total == 0 {
        return Err(Error::EmptyCounts);
    }
    let freqs = counts
        .counts
        .iter()
        .map(|(&m, &c)| (m, c as f64 / total as f64))
        .collect();
    lms_estimate_frequencies(&freqs, total, state, config)
}

/// [`lms_estimate`] on arbitrary frequencies `f_m`; `n_shots` only feeds the
/// diagnostics and the variance floor of the weighted objective.
pub fn lms_estimate_frequencies(
    freqs: &BTreeMap<HalfInt, f64>,
    n_shots: u64,
    state: &TwoModeState,
    config: &ExperimentConfig,
) -> Result<EstimateReport> {
    if freqs.is_empty() || n_shots == 0 {
        return Err(Error::EmptyCounts);
    }
    let prepared = PreparedInput::new(state)?;
    if let Some(&m) = freqs.keys().find(|m| !prepared.outcomes().contains(m)) {
        return Err(Error::AlphabetMismatch(m));
    }
    if config.grid_points < 2 || !(config.refine_tol.is_finite() && config.refine_tol > 0.0) {
        return Err(Error::OutOfRange {
            name: "grid_points/refine_tol",
            value: format!("{}/{}", config.grid_points, config.refine_tol),
            range: ">= 2 / > 0",
        });
    }

    let objective = Objective {
        prepared: &prepared,
        freqs: prepared
            .outcomes()
            .iter()
            .map(|m| freqs.get(m).copied().unwrap_or(0.0))
            .collect(),
        weighted: config.weighted,
        variance_floor: 1.0 / n_shots as f64,
    };

    let step = PI / (config.grid_points - 1) as f64;
    let curve: Vec<ObjectivePoint> = (0..config.grid_points)
        .map(|k| {
            let phi = if k + 1 == config.grid_points { PI } else { step * k as f64 };
            ObjectivePoint { phi, value: objective.eval(phi) }
        })
        .collect();

    let best = curve
        .iter()
        .enumerate()
        .fold(0, |best, (k, p)| if p.value < curve[best].value - OBJECTIVE_TIE { k } else { best });

    let lo = curve[best.saturating_sub(1)].phi;
    let hi = curve[(best + 1).min(curve.len() - 1)].phi;
    let (refined, refined_value) = golden_section_min(|p| objective.eval(p), lo, hi, config.refine_tol, OBJECTIVE_TIE);
    let grid_wins = curve[best].value <= refined_value + OBJECTIVE_TIE && curve[best].phi <= refined;
    let (phi_hat, residual) = if !grid_wins && refined_value <= curve[best].value + OBJECTIVE_TIE {
        (refined.clamp(0.0, PI), refined_value)
    } else {
        (curve[best].phi, curve[best].value)
    };

    let degenerate = is_degenerate(&curve, best);
    Ok(EstimateReport {
        phi_hat,
        residual,
        objective_curve: curve,
        diagnostics: Diagnostics {
            n_shots,
            seed: config.seed,
            grid_points: config.grid_points,
            weighted: config.weighted,
            degenerate,
        },
    })
}

/// Looks for another grid-local minimum, more than two cells away from
/// `best`, whose value matches the best value within tolerance.
fn is_degenerate(curve: &[ObjectivePoint], best: usize) -> bool {
    let target = curve[best].value;
    let slack = DEGENERACY_RTOL * target.abs() + DEGENERACY_ATOL;
    let n = curve.len();
    (0..n).any(|k| {
        if k.abs_diff(best) <= 2 {
            return false;
        }
        let v = curve[k].value;
        let left = k == 0 || v <= curve[k - 1].value;
        let right = k + 1 == n || v <= curve[k + 1].value;
        left && right && v - target <= slack
    })
}
