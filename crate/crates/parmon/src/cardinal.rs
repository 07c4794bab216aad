//! Symbolic cardinal arithmetic.
//!
//! The value domain is deliberately small: finite cardinals, the alephs
//! `ℵ_0, ℵ_1, ℵ_2, …` indexed by a natural number, and `ℵ_ω` as the single
//! represented singular infinite cardinal.  This is exactly enough to state
//! the hypotheses of the classification procedures in [`crate::classifier`]:
//! they only ever distinguish countable, uncountable-regular and singular
//! grounds, and need successors below `ℵ_ω`.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A symbolic cardinal.
///
/// The derived ordering is the cardinal ordering:
/// `Finite(k) < Finite(k+1) < Aleph(0) < Aleph(1) < … < AlephOmega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinal {
    Finite(u64),
    Aleph(u32),
    AlephOmega,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CardinalError {
    /// The successor of `ℵ_ω` falls outside the represented model.
    #[error("successor of alephOmega is not representable in this model")]
    UnrepresentableSuccessor,
    #[error("invalid cardinal literal `{0}`")]
    Parse(String),
}

impl Cardinal {
    pub const ALEPH0: Cardinal = Cardinal::Aleph(0);

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self {
            Cardinal::Finite(k) => Some(*k),
            _ => None,
        }
    }

    /// Cardinal addition: ordinary on finite operands, absorption (maximum)
    /// as soon as one side is infinite.
    pub fn add(self, other: Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a.saturating_add(b)),
            (a, b) => a.max(b),
        }
    }

    /// The successor cardinal.  `ℵ_ω⁺` is outside the model and is reported
    /// as an error rather than silently collapsed.
    pub fn successor(self) -> Result<Cardinal, CardinalError> {
        match self {
            Cardinal::Finite(k) => Ok(Cardinal::Finite(k + 1)),
            Cardinal::Aleph(i) => Ok(Cardinal::Aleph(i + 1)),
            Cardinal::AlephOmega => Err(CardinalError::UnrepresentableSuccessor),
        }
    }

    /// The only finite regular cardinals are 0, 1 and 2; every represented
    /// aleph below `ℵ_ω` is regular; `ℵ_ω` is singular.
    pub fn is_regular(&self) -> bool {
        match self {
            Cardinal::Finite(k) => *k <= 2,
            Cardinal::Aleph(_) => true,
            Cardinal::AlephOmega => false,
        }
    }

    pub fn is_singular(&self) -> bool {
        !self.is_regular()
    }
}

impl From<u64> for Cardinal {
    fn from(k: u64) -> Self {
        Cardinal::Finite(k)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(k) => write!(f, "{k}"),
            Cardinal::Aleph(i) => write!(f, "aleph{i}"),
            Cardinal::AlephOmega => write!(f, "alephOmega"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = CardinalError;

    /// Accepts the text forms `"7"`, `"aleph0"`, `"aleph3"`, `"alephOmega"`
    /// (the omega suffix is case-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(k) = t.parse::<u64>() {
            return Ok(Cardinal::Finite(k));
        }
        if let Some(rest) = t.strip_prefix("aleph") {
            if rest.eq_ignore_ascii_case("omega") {
                return Ok(Cardinal::AlephOmega);
            }
            if let Ok(i) = rest.parse::<u32>() {
                return Ok(Cardinal::Aleph(i));
            }
        }
        Err(CardinalError::Parse(s.to_owned()))
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cardinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cardinal() -> impl Strategy<Value = Cardinal> {
        prop_oneof![
            (0u64..50).prop_map(Cardinal::Finite),
            (0u32..6).prop_map(Cardinal::Aleph),
            Just(Cardinal::AlephOmega),
        ]
    }

    #[test]
    fn ordering_examples() {
        assert!(Cardinal::Finite(2) < Cardinal::Aleph(0));
        assert!(Cardinal::Aleph(1) < Cardinal::AlephOmega);
        assert_eq!(Cardinal::Aleph(0).cmp(&Cardinal::Aleph(0)), std::cmp::Ordering::Equal);
        assert!(Cardinal::Finite(7) < Cardinal::Finite(8));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(Cardinal::Finite(3).add(Cardinal::Finite(4)), Cardinal::Finite(7));
        assert_eq!(Cardinal::Aleph(1).add(Cardinal::Aleph(0)), Cardinal::Aleph(1));
        assert_eq!(Cardinal::Finite(5).add(Cardinal::AlephOmega), Cardinal::AlephOmega);
    }

    #[test]
    fn successor_and_regularity() {
        assert_eq!(Cardinal::Aleph(0).successor(), Ok(Cardinal::Aleph(1)));
        assert!(Cardinal::Aleph(1).is_regular());
        assert!(Cardinal::AlephOmega.is_singular());
        assert!(Cardinal::Finite(2).is_regular());
        assert!(Cardinal::Finite(3).is_singular());
        assert_eq!(
            Cardinal::AlephOmega.successor(),
            Err(CardinalError::UnrepresentableSuccessor)
        );
    }

    #[test]
    fn parse_and_format_forms() {
        for text in ["7", "aleph0", "aleph3", "alephOmega"] {
            let c: Cardinal = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        assert!("alephX".parse::<Cardinal>().is_err());
        assert!("-3".parse::<Cardinal>().is_err());
    }

    proptest! {
        #[test]
        fn add_commutative_associative(a in arb_cardinal(), b in arb_cardinal(), c in arb_cardinal()) {
            prop_assert_eq!(a.add(b), b.add(a));
            prop_assert_eq!(a.add(b).add(c), a.add(b.add(c)));
        }

        #[test]
        fn add_monotone_in_order(a in arb_cardinal(), b in arb_cardinal(), c in arb_cardinal()) {
            if a <= b {
                prop_assert!(a.add(c) <= b.add(c));
            }
        }

        #[test]
        fn infinite_absorbs(a in arb_cardinal(), b in arb_cardinal()) {
            if a.is_infinite() || b.is_infinite() {
                prop_assert_eq!(a.add(b), a.max(b));
            }
        }
    }
}
