use crate::angular::HalfInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} is outside the supported range {range}")]
    OutOfRange {
        name: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("index m = {m} is not a member of the j = {j} ladder")]
    InvalidIndex { j: HalfInt, m: HalfInt },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("operation requires a {expected} sector")]
    FlavorMismatch { expected: &'static str },

    #[error("shot record is empty")]
    EmptyCounts,

    #[error("outcome m = {0} is not produced by the state")]
    AlphabetMismatch(HalfInt),

    #[error("invalid state specification `{0}`")]
    InvalidStateSpec(String),
}
