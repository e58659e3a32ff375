use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// `x` with 17 significant digits, e.g. `1.0000000000000000e0`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// An `f64` that serializes to JSON with 17 significant digits; non-finite
/// values become `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num17(pub f64);

impl Serialize for Num17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn num17_opt<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(x) => Num17(*x).serialize(serializer),
        None => serializer.serialize_none(),
    }
}

pub fn num17<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Num17(*value).serialize(serializer)
}
