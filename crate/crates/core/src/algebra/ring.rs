use std::fmt;

use serde::{Deserialize, Serialize};

/// The countable rings supported by the library.
///
/// All three have characteristic zero. `Integers` and `GaussianIntegers` are
/// good rings (every nonzero ideal has finite index); `Rationals` is a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z[i]")]
    GaussianIntegers,
    #[serde(rename = "Q")]
    Rationals,
}

impl Ring {
    /// Rank of the additive embedding used for boxes and characters.
    pub fn dim(self) -> usize {
        match self {
            Ring::Integers | Ring::Rationals => 1,
            Ring::GaussianIntegers => 2,
        }
    }

    pub fn is_field(self) -> bool {
        matches!(self, Ring::Rationals)
    }

    /// Countable integral domain in which every nonzero ideal has finite index.
    pub fn is_good(self) -> bool {
        matches!(self, Ring::Integers | Ring::GaussianIntegers)
    }

    pub fn characteristic(self) -> u32 {
        0
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Ring::Integers => "Z",
            Ring::GaussianIntegers => "Z[i]",
            Ring::Rationals => "Q",
        }
    }

    pub fn parse(s: &str) -> Option<Ring> {
        match s.trim() {
            "Z" | "ZZ" | "integers" => Some(Ring::Integers),
            "Z[i]" | "ZI" | "gaussian" | "gaussian-integers" => Some(Ring::GaussianIntegers),
            "Q" | "QQ" | "rationals" => Some(Ring::Rationals),
            _ => None,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
