//! Følner sequences over the supported rings.
//!
//! Every family produces its sets as explicit, deterministically ordered
//! element lists. Boxes are used on `Z` and `Z[i]`; `Q` uses ladders of
//! fractions with denominator `N!`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;

use super::{AlgebraError, Ideal, Ring, RingElement};

/// Default cap for ladder sets, `N·N! ≤ 35280`.
pub const DEFAULT_LADDER_CAP: u32 = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FolnerFamily {
    /// `{-N..N}` on `Z`, `{a+bi : |a|,|b| ≤ N}` on `Z[i]`.
    CenteredBox,
    /// `{-N..N-1}` on `Z`, its square on `Z[i]`: `2N` consecutive integers
    /// per axis, so whole periods of any period dividing `2N`.
    HalfOpenBox,
    /// Centered box moved to `base + N·drift`.
    ShiftedBox { base: RingElement, drift: RingElement },
    /// `{k/N! : |k| ≤ N·N!}` on `Q`.
    RationalLadder,
    /// `{k/N! : -N·N! ≤ k < N·N!}` on `Q`: whole periods of every character
    /// `r ↦ e(κr)` with integer `κ`.
    PeriodicLadder,
    /// `A_N = {x : modulus·x + representative ∈ Φ_N}` for a base sequence.
    CosetPullback { base: Box<FolnerSequence>, modulus: RingElement, representative: RingElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerSequence {
    ring: Ring,
    family: FolnerFamily,
    ladder_cap: u32,
}

impl FolnerSequence {
    pub fn new(ring: Ring, family: FolnerFamily) -> Result<Self, AlgebraError> {
        let ok = match &family {
            FolnerFamily::CenteredBox | FolnerFamily::HalfOpenBox => ring.is_good(),
            FolnerFamily::ShiftedBox { base, drift } => {
                ring.is_good() && base.ring() == ring && drift.ring() == ring
            }
            FolnerFamily::RationalLadder | FolnerFamily::PeriodicLadder => ring == Ring::Rationals,
            FolnerFamily::CosetPullback { base, modulus, representative } => {
                ring.is_good()
                    && base.ring == ring
                    && modulus.ring() == ring
                    && representative.ring() == ring
                    && !modulus.is_zero()
            }
        };
        if !ok {
            return Err(AlgebraError::Config(format!(
                "Følner family {} is not supported on {ring}",
                family.name()
            )));
        }
        Ok(Self { ring, family, ladder_cap: DEFAULT_LADDER_CAP })
    }

    pub fn centered_box(ring: Ring) -> Result<Self, AlgebraError> {
        Self::new(ring, FolnerFamily::CenteredBox)
    }

    pub fn half_open_box(ring: Ring) -> Result<Self, AlgebraError> {
        Self::new(ring, FolnerFamily::HalfOpenBox)
    }

    pub fn rational_ladder() -> Self {
        Self::new(Ring::Rationals, FolnerFamily::RationalLadder).expect("ladder on Q")
    }

    pub fn periodic_ladder() -> Self {
        Self::new(Ring::Rationals, FolnerFamily::PeriodicLadder).expect("ladder on Q")
    }

    pub fn with_ladder_cap(mut self, cap: u32) -> Self {
        self.ladder_cap = cap;
        self
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn family(&self) -> &FolnerFamily {
        &self.family
    }

    /// Whether every set is closed under negation.
    pub fn is_symmetric(&self) -> bool {
        matches!(self.family, FolnerFamily::CenteredBox | FolnerFamily::RationalLadder)
    }

    /// The explicit elements of `Φ_N`.
    pub fn set(&self, n: u32) -> Result<Vec<RingElement>, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::Config("Følner index N must be at least 1".into()));
        }
        match &self.family {
            FolnerFamily::CenteredBox => Ok(box_elements(self.ring, n, &RingElement::zero(self.ring))),
            FolnerFamily::HalfOpenBox => Ok(half_open_box(self.ring, n)),
            FolnerFamily::ShiftedBox { base, drift } => {
                let centre = base + &(&RingElement::from_int(self.ring, n) * drift);
                Ok(box_elements(self.ring, n, &centre))
            }
            FolnerFamily::RationalLadder | FolnerFamily::PeriodicLadder => {
                if n > self.ladder_cap {
                    return Err(AlgebraError::Budget(format!(
                        "ladder index {n} exceeds cap {} (N·N! elements)",
                        self.ladder_cap
                    )));
                }
                let fact: BigInt = (1..=n).map(BigInt::from).product();
                let half: BigInt = &fact * n;
                let upper = if matches!(self.family, FolnerFamily::PeriodicLadder) {
                    half.clone() - 1
                } else {
                    half.clone()
                };
                let mut out = Vec::new();
                let mut k = -half;
                while k <= upper {
                    out.push(RingElement::rational(k.clone(), fact.clone()));
                    k += 1;
                }
                Ok(out)
            }
            FolnerFamily::CosetPullback { base, modulus, representative } => {
                let ideal = Ideal::new(modulus.clone())?;
                let target = ideal.residue(representative)?;
                let mut out = Vec::new();
                for y in base.set(n)? {
                    if ideal.residue(&y)? == target {
                        let shifted = &y - representative;
                        let x = shifted.checked_div(modulus).expect("member of the coset");
                        out.push(x);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn size(&self, n: u32) -> Result<usize, AlgebraError> {
        Ok(self.set(n)?.len())
    }
}

impl FolnerFamily {
    pub fn name(&self) -> &'static str {
        match self {
            FolnerFamily::CenteredBox => "centered-box",
            FolnerFamily::HalfOpenBox => "half-open-box",
            FolnerFamily::ShiftedBox { .. } => "shifted-box",
            FolnerFamily::RationalLadder => "rational-ladder",
            FolnerFamily::PeriodicLadder => "periodic-ladder",
            FolnerFamily::CosetPullback { .. } => "coset-pullback",
        }
    }
}

fn box_elements(ring: Ring, n: u32, centre: &RingElement) -> Vec<RingElement> {
    let n = i64::from(n);
    match ring {
        Ring::Integers => (-n..=n).map(|k| centre + &RingElement::from_int(ring, k)).collect(),
        Ring::GaussianIntegers => {
            let mut out = Vec::with_capacity(((2 * n + 1) * (2 * n + 1)) as usize);
            for a in -n..=n {
                for b in -n..=n {
                    out.push(centre + &RingElement::gaussian(a, b));
                }
            }
            out
        }
        Ring::Rationals => unreachable!("boxes are rejected on Q"),
    }
}

fn half_open_box(ring: Ring, n: u32) -> Vec<RingElement> {
    let n = i64::from(n);
    match ring {
        Ring::Integers => (-n..n).map(|k| RingElement::from_int(ring, k)).collect(),
        Ring::GaussianIntegers => {
            (-n..n).flat_map(|a| (-n..n).map(move |b| RingElement::gaussian(a, b))).collect()
        }
        Ring::Rationals => unreachable!("boxes are rejected on Q"),
    }
}

/// Symmetric difference count `|Φ_N Δ (g+Φ_N)|` and `|Φ_N|`.
pub fn folner_defect_counts(
    seq: &FolnerSequence,
    n: u32,
    g: &RingElement,
) -> Result<(usize, usize), AlgebraError> {
    if g.ring() != seq.ring() {
        return Err(AlgebraError::RingMismatch { expected: seq.ring(), found: g.ring() });
    }
    let set = seq.set(n)?;
    let base: HashSet<&RingElement> = set.iter().collect();
    let shifted: Vec<RingElement> = set.iter().map(|x| g + x).collect();
    let shifted_set: HashSet<&RingElement> = shifted.iter().collect();
    let sym = base.symmetric_difference(&shifted_set).count();
    Ok((sym, set.len()))
}

/// `|Φ_N Δ (g+Φ_N)| / |Φ_N|`, computed by explicit set arithmetic.
pub fn folner_defect(seq: &FolnerSequence, n: u32, g: &RingElement) -> Result<f64, AlgebraError> {
    let (sym, size) = folner_defect_counts(seq, n, g)?;
    Ok(sym as f64 / size as f64)
}

/// `N!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl FolnerSequence {
    /// Convenience for moving boxes, e.g. `{N² + k}` style sequences on `Z`.
    pub fn shifted_box(base: RingElement, drift: RingElement) -> Result<Self, AlgebraError> {
        let ring = base.ring();
        Self::new(ring, FolnerFamily::ShiftedBox { base, drift })
    }

    pub fn coset_pullback(
        base: FolnerSequence,
        modulus: RingElement,
        representative: RingElement,
    ) -> Result<Self, AlgebraError> {
        let ring = base.ring;
        Self::new(ring, FolnerFamily::CosetPullback { base: Box::new(base), modulus, representative })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        RingElement::from_int(Ring::Integers, n)
    }

    #[test]
    fn integer_box_n1() {
        let seq = FolnerSequence::centered_box(Ring::Integers).unwrap();
        assert_eq!(seq.set(1).unwrap(), vec![z(-1), z(0), z(1)]);
    }

    #[test]
    fn gaussian_box_n1_has_nine_elements() {
        let seq = FolnerSequence::centered_box(Ring::GaussianIntegers).unwrap();
        let s = seq.set(1).unwrap();
        assert_eq!(s.len(), 9);
        assert!(s.contains(&RingElement::gaussian(-1, 1)));
    }

    #[test]
    fn ladder_n2() {
        let s = FolnerSequence::rational_ladder().set(2).unwrap();
        let want: Vec<_> = (-4..=4).map(|k| RingElement::rational(k, 2)).collect();
        assert_eq!(s, want);
        assert_eq!(FolnerSequence::periodic_ladder().set(2).unwrap().len(), 8);
    }

    #[test]
    fn ladder_cap_is_enforced() {
        assert!(matches!(FolnerSequence::rational_ladder().set(8), Err(AlgebraError::Budget(_))));
        assert_eq!(FolnerSequence::rational_ladder().with_ladder_cap(8).ladder_cap, 8);
    }

    #[test]
    fn unsupported_pairings() {
        assert!(FolnerSequence::centered_box(Ring::Rationals).is_err());
        assert!(FolnerSequence::new(Ring::Integers, FolnerFamily::RationalLadder).is_err());
        assert!(FolnerSequence::centered_box(Ring::Integers).unwrap().set(0).is_err());
    }

    #[test]
    fn defect_examples() {
        let seq = FolnerSequence::centered_box(Ring::Integers).unwrap();
        assert_eq!(folner_defect(&seq, 10, &z(0)).unwrap(), 0.0);
        assert_eq!(folner_defect_counts(&seq, 10, &z(1)).unwrap(), (2, 21));
        let gseq = FolnerSequence::centered_box(Ring::GaussianIntegers).unwrap();
        assert_eq!(folner_defect_counts(&gseq, 5, &RingElement::gaussian(1, 0)).unwrap(), (22, 121));
    }

    #[test]
    fn defect_bound_on_integer_box() {
        let seq = FolnerSequence::centered_box(Ring::Integers).unwrap();
        for n in [1u32, 5, 20, 50] {
            for g in [-7i64, -1, 2, 3, 9] {
                let d = folner_defect(&seq, n, &z(g)).unwrap();
                assert!(d <= 2.0 * g.unsigned_abs() as f64 / (2 * n + 1) as f64 + 1e-15);
            }
        }
    }

    #[test]
    fn shifted_box_moves() {
        let seq = FolnerSequence::shifted_box(z(0), z(3)).unwrap();
        let s = seq.set(2).unwrap();
        assert_eq!(s.first(), Some(&z(4)));
        assert_eq!(s.last(), Some(&z(8)));
    }

    #[test]
    fn coset_pullback_partitions_box() {
        let base = FolnerSequence::centered_box(Ring::Integers).unwrap();
        let a0 = FolnerSequence::coset_pullback(base.clone(), z(2), z(0)).unwrap();
        let a1 = FolnerSequence::coset_pullback(base, z(2), z(1)).unwrap();
        assert_eq!(a0.set(3).unwrap(), vec![z(-1), z(0), z(1)]);
        assert_eq!(a1.set(3).unwrap(), vec![z(-2), z(-1), z(0), z(1)]);
    }
}
