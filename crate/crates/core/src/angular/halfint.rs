use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact half-integer, stored as twice its value.
///
/// Used for both sector labels `j` and projections `m`. Ordering follows the
/// numeric value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) * 0.5
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Whether `m` is a valid projection inside the ladder labelled by `self`.
    pub const fn admits(self, m: HalfInt) -> bool {
        self.0 >= 0 && m.0.abs() <= self.0 && (self.0 - m.0) % 2 == 0
    }

    /// Ladder dimension `2j + 1`.
    pub fn dim(self) -> usize {
        debug_assert!(self.0 >= 0);
        self.0 as usize + 1
    }

    /// Position of `m` in the descending ordering `j, j-1, …, -j`.
    pub fn index_of(self, m: HalfInt) -> Result<usize> {
        if self.admits(m) {
            Ok(((self.0 - m.0) / 2) as usize)
        } else {
            Err(Error::InvalidIndex { j: self, m })
        }
    }

    /// The projection at position `index` of the descending ladder.
    pub fn m_at(self, index: usize) -> HalfInt {
        HalfInt(self.0 - 2 * index as i32)
    }

    /// `m = j, j-1, …, -j`.
    pub fn ladder(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let j = self.0;
        (0..(j + 1).max(0)).map(move |k| HalfInt(j - 2 * k))
    }

    pub(crate) fn check_sector_label(self) -> Result<()> {
        if self.0 < 0 {
            return Err(Error::OutOfRange {
                name: "2j",
                value: self.0.to_string(),
                range: "2j >= 0",
            });
        }
        Ok(())
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3"`, `"-2"`, `"3/2"`, `"-1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidStateSpec(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((num, "2")) => {
                let twice: i32 = num.trim().parse().map_err(|_| bad())?;
                if twice % 2 == 0 {
                    return Err(bad());
                }
                Ok(HalfInt(twice))
            }
            Some(_) => Err(bad()),
            None => {
                let v: i32 = s.parse().map_err(|_| bad())?;
                Ok(HalfInt(2 * v))
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
