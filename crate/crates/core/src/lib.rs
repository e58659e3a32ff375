//! Quantum angle and relative-phase distributions of angular-momentum and
//! photon-polarization states, the quantum-phase representation of an SU(2)
//! interferometer, and least-squares phase inference from simulated shot
//! records.
//!
//! Sign convention used throughout: `d(β) = exp(-iβJ_y)` with the standard
//! `J_y`, rows and columns ordered `m = j, j-1, …, -j`. With this choice the
//! first column of `d(+π/2)` is nonnegative, and `D_z(Φ) = exp(-iJ_zΦ)`.

pub mod angular;
pub mod error;
pub mod interferometer;
pub mod qpsi;
pub mod quadrature;
pub mod states;

pub use angular::{c_ladder, jy_generator, verify_c_wigner_identity, wigner_d, CoefficientLadder, HalfInt, WignerDMatrix};
pub use error::{Error, Result};
pub use interferometer::{
    fisher_information, interferometer_amplitude_convolution, interferometer_amplitude_direct,
    interferometer_probs, s_function_eval, single_port_closed_form, InterferometerDistribution,
};
pub use qpsi::{benchmark_sweep, lms_estimate, simulate_shots, EstimateReport, ExperimentConfig, ShotCounts};
pub use states::{spin_up_x_state, two_mode_to_sectors, x_polarized_number_state, AngularSector, Flavor, TwoModeState};
