//! State specifications such as `xnum:3`, `xnum:8-singleport`, `spinupx:2`
//! and `fock:2,1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use su2phase::angular::MAX_TWICE_J;
use su2phase::states::MAX_PHOTONS;
use su2phase::{spin_up_x_state, x_polarized_number_state, AngularSector, HalfInt, TwoModeState};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid state spec `{spec}`: {reason}")]
pub struct SpecError {
    pub spec: String,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateSpec {
    /// x-polarized `N`-photon number state (`xnum:N`).
    XNum(u32),
    /// `N` photons in one interferometer input port (`xnum:N-singleport`).
    SinglePort(u32),
    /// Spin up along x, argument `2j` (`spinupx:2j`).
    SpinUpX(HalfInt),
    /// Fock state `|n_u, n_d⟩` (`fock:n_u,n_d`).
    Fock(u32, u32),
}

impl StateSpec {
    /// The angle-distribution sector; only `xnum` and `spinupx` have one.
    pub fn angle_sector(&self) -> Result<AngularSector, SpecError> {
        let built = match *self {
            StateSpec::XNum(n) => x_polarized_number_state(n),
            StateSpec::SpinUpX(j) => spin_up_x_state(j),
            _ => {
                return Err(self.error("angle distributions need xnum:N or spinupx:2j"));
            }
        };
        built.map_err(|e| self.error(&e.to_string()))
    }

    /// The interferometer input. `xnum:N` and `spinupx:2j` enter as the
    /// single-port state that the input beam splitter maps onto them.
    pub fn two_mode(&self) -> TwoModeState {
        match *self {
            StateSpec::XNum(n) | StateSpec::SinglePort(n) => TwoModeState::single_port(n),
            StateSpec::SpinUpX(j) => TwoModeState::single_port(j.twice() as u32),
            StateSpec::Fock(u, d) => TwoModeState::fock(u, d),
        }
    }

    fn error(&self, reason: &str) -> SpecError {
        SpecError { spec: self.to_string(), reason: reason.to_string() }
    }
}

fn photon_count(spec: &str, text: &str) -> Result<u32, SpecError> {
    let err = |reason: &str| SpecError { spec: spec.to_string(), reason: reason.to_string() };
    let n: u32 = text.trim().parse().map_err(|_| err("photon number must be a positive integer"))?;
    if !(1..=MAX_PHOTONS).contains(&n) {
        return Err(err("photon number must be in 1..=64"));
    }
    Ok(n)
}

impl FromStr for StateSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let err = |reason: &str| SpecError { spec: s.to_string(), reason: reason.to_string() };
        let (kind, arg) = s.trim().split_once(':').ok_or_else(|| err("expected `kind:argument`"))?;
        match kind {
            "xnum" => match arg.strip_suffix("-singleport") {
                Some(n) => Ok(StateSpec::SinglePort(photon_count(s, n)?)),
                None => Ok(StateSpec::XNum(photon_count(s, arg)?)),
            },
            "spinupx" => {
                let twice: i32 = arg.trim().parse().map_err(|_| err("2j must be a positive integer"))?;
                if !(1..=MAX_TWICE_J).contains(&twice) {
                    return Err(err("2j must be in 1..=1024"));
                }
                Ok(StateSpec::SpinUpX(HalfInt::from_twice(twice)))
            }
            "fock" => {
                let (u, d) = arg.split_once(',').ok_or_else(|| err("expected fock:n_u,n_d"))?;
                let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| err("photon numbers must be integers"));
                let (u, d) = (parse(u)?, parse(d)?);
                if u64::from(u) + u64::from(d) > MAX_TWICE_J as u64 {
                    return Err(err("n_u + n_d must be at most 1024"));
                }
                Ok(StateSpec::Fock(u, d))
            }
            _ => Err(err("unknown kind; expected xnum, spinupx or fock")),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::XNum(n) => write!(f, "xnum:{n}"),
            StateSpec::SinglePort(n) => write!(f, "xnum:{n}-singleport"),
            StateSpec::SpinUpX(j) => write!(f, "spinupx:{}", j.twice()),
            StateSpec::Fock(u, d) => write!(f, "fock:{u},{d}"),
        }
    }
}

impl Serialize for StateSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StateSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
