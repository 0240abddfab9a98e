//! Deterministic exponential sums.
//!
//! Phases are exact rationals. Sums are formed by counting residues modulo
//! one and adding the distinct terms in sorted order with a pairwise tree, so
//! the result does not depend on how the phases were produced or on the
//! number of worker threads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{frac, unit_from_frac, Rational};

/// Pairwise (cascade) summation in input order.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn pairwise_sum_real(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}

/// `Σ e(t)` over a multiset of exact phases.
///
/// A multiset that covers every residue `j/q` equally often sums to zero
/// exactly; that case is recognised instead of being left to rounding.
pub fn unit_sum(phases: Vec<Rational>) -> Complex64 {
    let mut counts: BTreeMap<Rational, u64> = BTreeMap::new();
    for t in phases {
        *counts.entry(frac(&t)).or_insert(0) += 1;
    }
    if is_uniform(&counts) {
        return Complex64::new(0.0, 0.0);
    }
    let terms: Vec<Complex64> = counts.iter().map(|(t, c)| unit_from_frac(t) * (*c as f64)).collect();
    pairwise_sum(&terms)
}

fn is_uniform(counts: &BTreeMap<Rational, u64>) -> bool {
    if counts.len() < 2 {
        return false;
    }
    let first = *counts.values().next().expect("nonempty");
    if counts.values().any(|c| *c != first) {
        return false;
    }
    let q = counts.keys().fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    !q.is_one() && q == BigInt::from(counts.len())
}

/// `E_{n∈set} e(phase(n))`, with the phases computed in parallel.
pub fn mean_unit<T, F>(set: &[T], phase: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Rational + Sync,
{
    if set.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let phases: Vec<Rational> = set.par_iter().map(&phase).collect();
    unit_sum(phases) / set.len() as f64
}

/// Mean of real values, parallel map and pairwise sum.
pub fn mean_real<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    if items.is_empty() {
        return 0.0;
    }
    let vals: Vec<f64> = items.par_iter().map(&f).collect();
    pairwise_sum_real(&vals) / items.len() as f64
}

/// Mean of complex values, parallel map and pairwise sum.
pub fn mean_complex<T, F>(items: &[T], f: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Complex64 + Sync,
{
    if items.is_empty() {
        return Complex64::zero();
    }
    let vals: Vec<Complex64> = items.par_iter().map(&f).collect();
    pairwise_sum(&vals) / items.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Ring, RingElement};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn full_periods_vanish_exactly() {
        let phases: Vec<Rational> = (0..12).map(|k| q(k, 6)).collect();
        assert_eq!(unit_sum(phases), Complex64::new(0.0, 0.0));
        let phases: Vec<Rational> = (0..13).map(|k| q(k, 6)).collect();
        assert!((unit_sum(phases) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn partial_residue_sets_are_not_zeroed() {
        // Residues {0, 1/2} with equal counts are a full period of 1/2.
        assert_eq!(unit_sum(vec![q(0, 1), q(1, 2)]), Complex64::new(0.0, 0.0));
        let s = unit_sum(vec![q(0, 1), q(1, 3)]);
        assert!((s - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn order_independent() {
        let a: Vec<Rational> = (0..500).map(|k| q(k * k, 997)).collect();
        let mut b = a.clone();
        b.reverse();
        assert_eq!(unit_sum(a), unit_sum(b));
    }

    #[test]
    fn dirichlet_kernel() {
        let set: Vec<RingElement> = (-10..=10).map(|k| RingElement::from_int(Ring::Integers, k)).collect();
        let alpha = q(1, 7);
        let m = mean_unit(&set, |n: &RingElement| &alpha * &n.embed()[0]);
        let x = std::f64::consts::PI / 7.0;
        let expect = (21.0 * x).sin() / (x.sin() * 21.0);
        assert!((m.re - expect).abs() < 1e-12 && m.im.abs() < 1e-12);
    }
}
