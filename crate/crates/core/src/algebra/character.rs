//! Additive characters `χ(r) = e(⟨θ, embed(r)⟩)` with exact frequencies.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::real::{display_rational, frac, parse_rational, to_f64, unit, unit_from_frac, Rational};
use super::{AlgebraError, Ring, RingElement};

/// Default number of multipliers probed by [`char_is_irrational`].
pub const DEFAULT_PROBE_BUDGET: usize = 1000;
const PROBE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    ring: Ring,
    frequency: Vec<Rational>,
}

impl Character {
    pub fn new(ring: Ring, frequency: Vec<Rational>) -> Result<Self, AlgebraError> {
        if frequency.len() != ring.dim() {
            return Err(AlgebraError::Config(format!(
                "a character on {ring} needs {} frequencies, got {}",
                ring.dim(),
                frequency.len()
            )));
        }
        Ok(Self { ring, frequency })
    }

    pub fn parse(ring: Ring, literals: &[&str]) -> Result<Self, AlgebraError> {
        let freq = literals.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, freq)
    }

    pub fn trivial(ring: Ring) -> Self {
        Self { ring, frequency: vec![Rational::zero(); ring.dim()] }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn frequency(&self) -> &[Rational] {
        &self.frequency
    }

    /// Exact phase `⟨θ, embed(r)⟩`, not reduced.
    pub fn phase(&self, r: &RingElement) -> Rational {
        assert_eq!(r.ring(), self.ring, "character evaluated off its ring");
        self.frequency.iter().zip(r.embed()).map(|(f, x)| f * x).sum()
    }

    pub fn eval(&self, r: &RingElement) -> Complex64 {
        unit(&self.phase(r))
    }

    /// The character `x ↦ χ(b·x)`.
    pub fn scaled(&self, b: &RingElement) -> Self {
        assert_eq!(b.ring(), self.ring, "scaling by an element of another ring");
        let frequency = match (self.ring, b) {
            (Ring::GaussianIntegers, RingElement::Gauss(u, v)) => {
                let (al, be) = (&self.frequency[0], &self.frequency[1]);
                let u = Rational::from_integer(u.clone());
                let v = Rational::from_integer(v.clone());
                vec![al * &u + be * &v, be * &u - al * &v]
            }
            _ => {
                let b = &b.embed()[0];
                vec![&self.frequency[0] * b]
            }
        };
        Self { ring: self.ring, frequency }
    }

    /// Pointwise product, which adds frequencies.
    pub fn product(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring);
        let frequency = self.frequency.iter().zip(&other.frequency).map(|(a, b)| a + b).collect();
        Self { ring: self.ring, frequency }
    }

    pub fn conj(&self) -> Self {
        Self { ring: self.ring, frequency: self.frequency.iter().map(|f| -f).collect() }
    }

    /// Exactly trivial: every frequency reduces to zero modulo the lattice
    /// of the ring (integers for `Z`, `Z[i]`; only zero for `Q`).
    pub fn is_trivial(&self) -> bool {
        match self.ring {
            Ring::Rationals => self.frequency.iter().all(Zero::is_zero),
            _ => self.frequency.iter().all(|f| frac(f).is_zero()),
        }
    }

    pub fn approx_frequency(&self) -> Vec<f64> {
        self.frequency.iter().map(to_f64).collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.frequency.iter().map(display_rational).collect();
        write!(f, "χ[{}]({})", self.ring, parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrationalityVerdict {
    /// No rational relation was found within the probe budget.
    pub irrational: bool,
    /// Some `b ≠ 0` with `χ(b·n) = 1` on the probe grid.
    pub witness: Option<RingElement>,
}

/// Budgeted search for `b ≠ 0` with `χ(b·) ≡ 1`.
///
/// Multipliers are tried in order of increasing norm, one per associate class.
pub fn char_is_irrational(chi: &Character, probe_budget: usize) -> Result<IrrationalityVerdict, AlgebraError> {
    let ring = chi.ring();
    if !ring.is_good() {
        return Err(AlgebraError::Config(format!("irrationality probe needs a good ring, not {ring}")));
    }
    let grid = probe_grid(ring);
    for b in multipliers(ring, probe_budget) {
        let scaled = chi.scaled(&b);
        let worst = grid
            .iter()
            .map(|n| (unit_from_frac(&frac(&scaled.phase(n))) - Complex64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max);
        if worst < PROBE_TOLERANCE {
            return Ok(IrrationalityVerdict { irrational: false, witness: Some(b) });
        }
    }
    Ok(IrrationalityVerdict { irrational: true, witness: None })
}

fn probe_grid(ring: Ring) -> Vec<RingElement> {
    match ring {
        Ring::GaussianIntegers => {
            (0..10).flat_map(|a| (0..10).map(move |c| RingElement::gaussian(a, c))).collect()
        }
        _ => (1..=100).map(|n| RingElement::from_int(ring, n)).collect(),
    }
}

/// Nonzero elements up to associates with norm (index) at most `bound`,
/// ordered by norm.
pub fn multipliers_by_norm(ring: Ring, bound: u64) -> Vec<RingElement> {
    match ring {
        Ring::GaussianIntegers => {
            let r = (bound as f64).sqrt().ceil() as i64 + 1;
            let mut out: Vec<(i64, i64, i64)> = Vec::new();
            for a in 1..=r {
                for c in 0..=r {
                    if (a * a + c * c) as u64 <= bound {
                        out.push((a * a + c * c, a, c));
                    }
                }
            }
            out.sort();
            out.into_iter().map(|(_, a, c)| RingElement::gaussian(a, c)).collect()
        }
        _ => (1..=bound as i64).map(|b| RingElement::from_int(ring, b)).collect(),
    }
}

/// First `budget` nonzero elements up to associates, ordered by norm.
pub(crate) fn multipliers(ring: Ring, budget: usize) -> Vec<RingElement> {
    match ring {
        Ring::GaussianIntegers => {
            let mut radius = 1i64;
            loop {
                let mut out: Vec<(i64, i64, i64)> = Vec::new();
                for a in 1..=radius {
                    for c in 0..=radius {
                        out.push((a * a + c * c, a, c));
                    }
                }
                out.sort();
                // Everything with norm ≤ radius² is present once the box is big enough.
                let complete = out.iter().filter(|t| t.0 <= radius * radius).count();
                if complete >= budget {
                    return out
                        .into_iter()
                        .take(budget)
                        .map(|(_, a, c)| RingElement::gaussian(a, c))
                        .collect();
                }
                radius *= 2;
            }
        }
        _ => (1..=budget as i64).map(|b| RingElement::from_int(ring, b)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        RingElement::from_int(Ring::Integers, n)
    }

    #[test]
    fn homomorphism_and_modulus() {
        let chi = Character::parse(Ring::GaussianIntegers, &["sqrt(2)", "0.3"]).unwrap();
        let r = RingElement::gaussian(3, -2);
        let s = RingElement::gaussian(-7, 5);
        let lhs = chi.eval(&(&r + &s));
        let rhs = chi.eval(&r) * chi.eval(&s);
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((chi.eval(&r).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaled_matches_direct_evaluation() {
        let chi = Character::parse(Ring::GaussianIntegers, &["1/7", "2/5"]).unwrap();
        let b = RingElement::gaussian(2, 3);
        let x = RingElement::gaussian(-4, 9);
        assert_eq!(chi.scaled(&b).phase(&x), chi.phase(&(&b * &x)));
    }

    #[test]
    fn half_has_witness_two() {
        let chi = Character::parse(Ring::Integers, &["0.5"]).unwrap();
        let v = char_is_irrational(&chi, DEFAULT_PROBE_BUDGET).unwrap();
        assert!(!v.irrational);
        assert_eq!(v.witness, Some(z(2)));
    }

    #[test]
    fn sqrt_two_is_irrational_within_budget() {
        let chi = Character::parse(Ring::Integers, &["sqrt(2)"]).unwrap();
        assert!(char_is_irrational(&chi, 1000).unwrap().irrational);
        let chi = Character::parse(Ring::GaussianIntegers, &["sqrt(2)", "sqrt(3)"]).unwrap();
        assert!(char_is_irrational(&chi, 1000).unwrap().irrational);
    }

    #[test]
    fn gaussian_rational_relation() {
        // χ(x) = e(Re(x)/2 + Im(x)/2) is killed by 1+i.
        let chi = Character::parse(Ring::GaussianIntegers, &["1/2", "1/2"]).unwrap();
        let v = char_is_irrational(&chi, 100).unwrap();
        assert_eq!(v.witness, Some(RingElement::gaussian(1, 1)));
    }

    #[test]
    fn rationals_are_refused() {
        let chi = Character::parse(Ring::Rationals, &["1"]).unwrap();
        assert!(char_is_irrational(&chi, 10).is_err());
    }

    #[test]
    fn multiplier_order() {
        let m = multipliers(Ring::GaussianIntegers, 4);
        assert_eq!(
            m,
            vec![
                RingElement::gaussian(1, 0),
                RingElement::gaussian(1, 1),
                RingElement::gaussian(2, 0),
                RingElement::gaussian(1, 2)
            ]
        );
    }
}
