//! Experiment and sweep configuration files.
//!
//! Field-level validation happens during deserialization, so every schema
//! violation is reported with the line and column where it occurs.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroU64;

use serde::{Deserialize, Deserializer, Serialize};
use su2phase::qpsi::{SweepSpec, DEFAULT_GRID_POINTS, DEFAULT_REFINE_TOL};
use su2phase::ExperimentConfig;

use crate::number::num17;
use crate::spec::StateSpec;

/// A configuration file that failed to parse or validate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}:{line}:{column}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ConfigError {
    fn from_json(path: &str, err: serde_json::Error) -> Self {
        let text = err.to_string();
        let message = match text.rfind(" at line ") {
            Some(cut) => text[..cut].to_string(),
            None => text,
        };
        ConfigError { path: path.to_string(), line: err.line(), column: err.column(), message }
    }
}

macro_rules! checked_f64 {
    ($name:ident, $label:literal, $what:literal, $ok:expr) => {
        #[derive(Clone, Copy, Debug, PartialEq, Serialize)]
        #[serde(transparent)]
        pub struct $name(#[serde(serialize_with = "num17")] pub f64);

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let x = f64::deserialize(d)?;
                let ok: fn(f64) -> bool = $ok;
                if ok(x) {
                    Ok($name(x))
                } else {
                    Err(serde::de::Error::custom(format_args!("{} must be {}, got {}", $label, $what, x)))
                }
            }
        }
    };
}

checked_f64!(Phase, "phase", "in [0, π]", |x| (0.0..=PI).contains(&x));
checked_f64!(RefineTol, "refine_tol", "finite and > 0", |x| x.is_finite() && x > 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GridPoints(pub usize);

impl<'de> Deserialize<'de> for GridPoints {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = usize::deserialize(d)?;
        if n < 2 {
            return Err(serde::de::Error::custom(format_args!("grid_points must be >= 2, got {n}")));
        }
        Ok(GridPoints(n))
    }
}

impl Default for GridPoints {
    fn default() -> Self {
        GridPoints(DEFAULT_GRID_POINTS)
    }
}

impl Default for RefineTol {
    fn default() -> Self {
        RefineTol(DEFAULT_REFINE_TOL)
    }
}

/// A list that must have at least one entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NonEmpty<T>(pub Vec<T>);

impl<'de, T: Deserialize<'de>> Deserialize<'de> for NonEmpty<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<T>::deserialize(d)?;
        if v.is_empty() {
            return Err(serde::de::Error::custom("list must not be empty"));
        }
        Ok(NonEmpty(v))
    }
}

/// One QPSI experiment (`qpsi --config`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub state: StateSpec,
    pub phi_true: Phase,
    pub n_shots: NonZeroU64,
    pub seed: u64,
    #[serde(default)]
    pub grid_points: GridPoints,
    #[serde(default)]
    pub refine_tol: RefineTol,
    #[serde(default)]
    pub weighted: bool,
}

impl ExperimentFile {
    pub fn to_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            state: self.state.two_mode(),
            phi_true: self.phi_true.0,
            n_shots: self.n_shots.get(),
            seed: self.seed,
            grid_points: self.grid_points.0,
            refine_tol: self.refine_tol.0,
            weighted: self.weighted,
        }
    }
}

/// A benchmark sweep (`qpsi --sweep`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub states: NonEmpty<StateSpec>,
    pub phis: NonEmpty<Phase>,
    pub shot_schedule: NonEmpty<NonZeroU64>,
    pub seeds: NonZeroU64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub grid_points: GridPoints,
    #[serde(default)]
    pub refine_tol: RefineTol,
    #[serde(default)]
    pub weighted: bool,
}

impl SweepFile {
    pub fn to_spec(&self) -> SweepSpec {
        SweepSpec {
            states: self.states.0.iter().map(|s| (s.to_string(), s.two_mode())).collect(),
            phis: self.phis.0.iter().map(|p| p.0).collect(),
            shot_schedule: self.shot_schedule.0.iter().map(|n| n.get()).collect(),
            seeds: self.seeds.get(),
            base_seed: self.base_seed,
            grid_points: self.grid_points.0,
            refine_tol: self.refine_tol.0,
            weighted: self.weighted,
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::from_json(path, e))
}

/// Parses an experiment file; `path` only labels error messages.
pub fn parse_experiment(text: &str, path: &str) -> Result<ExperimentFile, ConfigError> {
    parse(text, path)
}

pub fn parse_sweep(text: &str, path: &str) -> Result<SweepFile, ConfigError> {
    parse(text, path)
}

impl fmt::Display for ExperimentFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at Φ={} ({} shots, seed {})", self.state, self.phi_true.0, self.n_shots, self.seed)
    }
}
