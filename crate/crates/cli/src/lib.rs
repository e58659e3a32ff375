//! Command-line front end for `su2phase`: figure datasets (angle
//! distributions, interferometer sweeps, QPSI benchmarks) and QPSI
//! experiment runs driven by JSON configuration files.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod number;
pub mod spec;

pub use commands::{angle_dist, interferometer_sweep, qpsi_run, qpsi_sweep, QpsiOutcome, DB_FLOOR};
pub use config::{parse_experiment, parse_sweep, ConfigError, ExperimentFile, SweepFile};
pub use dataset::{Column, ColumnData, DatasetKind, FigureDataset, Grid, Metadata, OutputFormat};
pub use spec::{SpecError, StateSpec};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
