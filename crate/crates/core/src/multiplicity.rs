use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A multiplicity in `ℕ ∪ {ω}`, where `ω` is countably infinite and absorbs
/// addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    pub const ZERO: Multiplicity = Multiplicity::Finite(0);
    pub const ONE: Multiplicity = Multiplicity::Finite(1);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_omega(self) -> bool {
        self == Multiplicity::Omega
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(n) => Some(n),
            Multiplicity::Omega => None,
        }
    }
}

impl From<u64> for Multiplicity {
    fn from(n: u64) -> Self {
        Multiplicity::Finite(n)
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Omega,
        }
    }
}

impl Mul for Multiplicity {
    type Output = Multiplicity;

    fn mul(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a * b),
            (Multiplicity::Finite(0), _) | (_, Multiplicity::Finite(0)) => Multiplicity::ZERO,
            _ => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Omega => write!(f, "ω"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => serializer.serialize_u64(*n),
            Multiplicity::Omega => serializer.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Count(n) => Ok(Multiplicity::Finite(n)),
            Raw::Word(w) if w == "omega" || w == "ω" => Ok(Multiplicity::Omega),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("invalid multiplicity `{w}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_absorbs() {
        assert_eq!(Multiplicity::Omega + Multiplicity::ONE, Multiplicity::Omega);
        assert_eq!(Multiplicity::Finite(2) + Multiplicity::Finite(3), Multiplicity::Finite(5));
        assert_eq!(Multiplicity::Omega * Multiplicity::ZERO, Multiplicity::ZERO);
        assert_eq!(Multiplicity::Omega * Multiplicity::Finite(3), Multiplicity::Omega);
        assert_ne!(Multiplicity::Omega, Multiplicity::Finite(u64::MAX));
    }

    #[test]
    fn json() {
        assert_eq!(serde_json::to_string(&Multiplicity::Omega).unwrap(), "\"omega\"");
        let m: Multiplicity = serde_json::from_str("7").unwrap();
        assert_eq!(m, Multiplicity::Finite(7));
        assert!(serde_json::from_str::<Multiplicity>("\"many\"").is_err());
    }
}
