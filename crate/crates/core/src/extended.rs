//! Non-negative quantities that may legitimately be infinite.
//!
//! Divergent decay-time functionals, the stationarity time of a stationary
//! state and the variance of a Lorentzian are all meaningful infinities, so
//! they are carried as an explicit variant instead of `f64::INFINITY`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            Extended::Finite(x)
        } else {
            Extended::Infinite
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    /// Value as a float, mapping the infinite variant to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(x) => x,
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Extended::Finite(x) => Extended::from_f64(f(x)),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::report::sig12::serialize(&self.to_f64(), s)
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::report::sig12::deserialize(d).map(Extended::from_f64)
    }
}
