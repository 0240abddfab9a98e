//! Exact rings, Følner sequences, characters and principal ideals.

mod character;
mod element;
mod folner;
mod ideal;
mod real;
mod ring;

pub use character::{char_is_irrational, multipliers_by_norm, Character, IrrationalityVerdict, DEFAULT_PROBE_BUDGET};
pub use element::RingElement;
pub use folner::{
    factorial, folner_defect, folner_defect_counts, FolnerFamily, FolnerSequence, DEFAULT_LADDER_CAP,
};
pub use ideal::{coset_decompose, CosetPartition, Ideal, IdealIndex};
pub use real::{
    display_rational, frac, is_integer, parse_rational, rational_from_int, to_f64, unit, unit_f64,
    unit_from_frac, Rational,
};
pub use ring::Ring;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: Ring, found: Ring },
    #[error("the zero ideal has infinite index")]
    ZeroIdeal,
    #[error("field has no proper finite-index ideals ({0})")]
    FieldIdeal(Ring),
}
