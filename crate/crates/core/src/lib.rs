//! Executable multiple ergodic averages over countable rings.
//!
//! The crate covers exact ring arithmetic with Følner sequences, polynomial
//! systems and PET induction, rotation systems on tori, multiple ergodic
//! averages, uniformity seminorms and character-sum equidistribution.

pub mod algebra;
pub mod averages;
pub mod equidist;
pub mod pet;
pub mod sums;
pub mod polynomials;
pub mod seminorms;
pub mod systems;
