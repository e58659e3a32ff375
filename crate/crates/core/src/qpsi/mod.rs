//! Quantum phase statistical inference: simulated shot records at a fixed,
//! unknown `Φ` and least-squares fitting of the known outcome curves
//! `P_m(Φ)` to the observed frequencies.

mod estimate;
mod sampling;
mod sweep;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angular::HalfInt;
use crate::error::{Error, Result};
use crate::states::TwoModeState;

pub use estimate::{lms_estimate, lms_estimate_frequencies, Diagnostics, EstimateReport, ObjectivePoint};
pub use sampling::{shot_uniform, simulate_shots};
pub use sweep::{benchmark_sweep, BenchmarkRow, SweepSpec};

pub const DEFAULT_GRID_POINTS: usize = 2048;
pub const DEFAULT_REFINE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub state: TwoModeState,
    /// Imposed differential phase, in `[0, π]`.
    pub phi_true: f64,
    pub n_shots: u64,
    pub seed: u64,
    /// Coarse search resolution over `[0, π]`, endpoints included.
    pub grid_points: usize,
    /// Golden-section bracket width at which refinement stops, radians.
    pub refine_tol: f64,
    /// Divide residuals by the model variance instead of plain least squares.
    pub weighted: bool,
}

impl ExperimentConfig {
    pub fn new(state: TwoModeState, phi_true: f64, n_shots: u64, seed: u64) -> Self {
        ExperimentConfig {
            state,
            phi_true,
            n_shots,
            seed,
            grid_points: DEFAULT_GRID_POINTS,
            refine_tol: DEFAULT_REFINE_TOL,
            weighted: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.phi_true.is_finite() {
            return Err(Error::NonFinite { name: "phi_true", value: self.phi_true });
        }
        if !(0.0..=PI).contains(&self.phi_true) {
            return Err(Error::OutOfRange {
                name: "phi_true",
                value: self.phi_true.to_string(),
                range: "[0, π]",
            });
        }
        if self.n_shots == 0 {
            return Err(Error::OutOfRange { name: "n_shots", value: "0".into(), range: ">= 1" });
        }
        if self.grid_points < 2 {
            return Err(Error::OutOfRange {
                name: "grid_points",
                value: self.grid_points.to_string(),
                range: ">= 2",
            });
        }
        if !(self.refine_tol.is_finite() && self.refine_tol > 0.0) {
            return Err(Error::OutOfRange {
                name: "refine_tol",
                value: self.refine_tol.to_string(),
                range: "> 0",
            });
        }
        Ok(())
    }
}

/// Outcome counts of a shot record. `m` is half the difference of up and
/// down photodetection counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub counts: BTreeMap<HalfInt, u64>,
    pub total: u64,
}

impl ShotCounts {
    /// Builds a record and sets `total` to the sum of `counts`.
    pub fn from_counts(counts: BTreeMap<HalfInt, u64>) -> Self {
        let total = counts.values().sum();
        ShotCounts { counts, total }
    }

    pub fn count(&self, m: HalfInt) -> u64 {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    pub fn frequency(&self, m: HalfInt) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(m) as f64 / self.total as f64
        }
    }
}
