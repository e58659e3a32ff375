//! Half-integer index arithmetic, Wigner small-d engines and the photonic
//! coefficient ladder.

mod halfint;
mod ladder;
mod wigner;

pub use halfint::HalfInt;
pub use ladder::{c_ladder, verify_c_wigner_identity, CoefficientLadder, MAX_LADDER_JP};
pub use wigner::{jy_generator, wigner_d, wigner_d_cached, wigner_d_explicit, WignerDMatrix, MAX_TWICE_J};
