//! Rotation systems `T_r x = x + φ(r) mod 1` on `T^m` and their observables.

mod observable;

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{
    multipliers_by_norm, unit, AlgebraError, Character, Ideal, Rational, Ring, RingElement,
};

pub use observable::{parse_complex, Frequency, TrigObservable, DEFAULT_SUPPORT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("eigenfunction relation fails at {0}")]
    EigenRelation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A rotation of `T^m` driven by a homomorphism `φ: R → R^m`; coordinate `j`
/// of `φ` is the additive character frequency `θ_j`, so
/// `φ(r)_j = ⟨θ_j, embed(r)⟩` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    ring: Ring,
    coords: Vec<Character>,
}

impl RotationSystem {
    pub fn new(ring: Ring, phi: Vec<Vec<Rational>>) -> Result<Self, SystemError> {
        if phi.is_empty() {
            return Err(SystemError::Config("torus dimension must be at least 1".into()));
        }
        let coords = phi.into_iter().map(|row| Character::new(ring, row)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { ring, coords })
    }

    /// Parse one row of frequency literals per torus coordinate.
    pub fn parse(ring: Ring, rows: &[Vec<&str>]) -> Result<Self, SystemError> {
        let coords =
            rows.iter().map(|r| Character::parse(ring, r)).collect::<Result<Vec<_>, _>>()?;
        if coords.is_empty() {
            return Err(SystemError::Config("torus dimension must be at least 1".into()));
        }
        Ok(Self { ring, coords })
    }

    /// The system `x ↦ x + r` on `T` for `Q`, the default field example.
    pub fn rational_identity() -> Self {
        Self::new(Ring::Rationals, vec![vec![Rational::from_integer(1.into())]]).expect("valid")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn torus_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinates(&self) -> &[Character] {
        &self.coords
    }

    /// `φ(r)` exactly, not reduced modulo one.
    pub fn phi(&self, r: &RingElement) -> Vec<Rational> {
        self.coords.iter().map(|c| c.phase(r)).collect()
    }

    /// The character `r ↦ e(κ·φ(r))`.
    pub fn character(&self, kappa: &[i64]) -> Character {
        assert_eq!(kappa.len(), self.torus_dim());
        let mut freq = vec![Rational::from_integer(0.into()); self.ring.dim()];
        for (k, c) in kappa.iter().zip(&self.coords) {
            for (f, t) in freq.iter_mut().zip(c.frequency()) {
                *f += t * Rational::from_integer((*k).into());
            }
        }
        Character::new(self.ring, freq).expect("dimension preserved")
    }

    /// Exact phase `κ·φ(r)`.
    pub fn phase(&self, kappa: &[i64], r: &RingElement) -> Rational {
        self.coords.iter().zip(kappa).map(|(c, k)| c.phase(r) * Rational::from_integer((*k).into())).sum()
    }

    /// `T_r f = f ∘ T_r`: `c_κ ↦ c_κ e(κ·φ(r))`.
    pub fn act(&self, r: &RingElement, f: &TrigObservable) -> Result<TrigObservable, SystemError> {
        if f.dim() != self.torus_dim() {
            return Err(SystemError::DimMismatch { expected: self.torus_dim(), found: f.dim() });
        }
        if r.ring() != self.ring {
            return Err(AlgebraError::RingMismatch { expected: self.ring, found: r.ring() }.into());
        }
        let phi = self.phi(r);
        let coeffs = f.coeffs().iter().map(|(k, c)| {
            let t: Rational =
                k.iter().zip(&phi).map(|(kj, p)| p * Rational::from_integer((*kj).into())).sum();
            (k.clone(), c * unit(&t))
        });
        Ok(TrigObservable::from_coeffs(f.dim(), coeffs))
    }

    /// `e(κ·x)` with its eigencharacter, checked on probe elements.
    pub fn spectrum_eigenfunction(&self, kappa: &[i64]) -> Result<(TrigObservable, Character), SystemError> {
        if kappa.len() != self.torus_dim() {
            return Err(SystemError::DimMismatch { expected: self.torus_dim(), found: kappa.len() });
        }
        let f = if kappa.iter().all(|k| *k == 0) {
            TrigObservable::constant(self.torus_dim(), Complex64::new(1.0, 0.0))
        } else {
            TrigObservable::exponential(kappa.to_vec())
        };
        let chi = self.character(kappa);
        for r in probe_elements(self.ring) {
            let lhs = self.act(&r, &f)?;
            let rhs = f.scale(chi.eval(&r));
            let err = lhs.sub(&rhs)?.l2_norm();
            if err > 1e-12 {
                return Err(SystemError::EigenRelation(r.to_string()));
            }
        }
        Ok((f, chi))
    }

    /// Ergodic iff no nonzero `κ` makes `r ↦ e(κ·φ(r))` trivial; searched
    /// over the box `|κ_j| ≤ radius`.
    pub fn check_ergodicity(&self, radius: i64) -> ErgodicityVerdict {
        for kappa in frequency_box(self.torus_dim(), radius) {
            if self.character(&kappa).is_trivial() {
                return ErgodicityVerdict { holds: false, witness: Some(Witness { ideal: None, kappa }) };
            }
        }
        ErgodicityVerdict { holds: true, witness: None }
    }

    /// Ergodicity of the restriction to every principal ideal of index at
    /// most `index_bound`. Frequencies are the outer loop so the witness has
    /// the smallest `κ`. Fields have no proper finite-index subgroups, so for
    /// `Q` this is plain ergodicity.
    pub fn check_total_ergodicity(&self, index_bound: u64, radius: i64) -> ErgodicityVerdict {
        if self.ring.is_field() {
            return self.check_ergodicity(radius);
        }
        let ideals: Vec<RingElement> = multipliers_by_norm(self.ring, index_bound);
        for kappa in frequency_box(self.torus_dim(), radius) {
            let chi = self.character(&kappa);
            for b in &ideals {
                if chi.scaled(b).is_trivial() {
                    let ideal = Ideal::new(b.clone()).expect("nonzero generator");
                    return ErgodicityVerdict {
                        holds: false,
                        witness: Some(Witness { ideal: Some(ideal.generator().clone()), kappa }),
                    };
                }
            }
        }
        ErgodicityVerdict { holds: true, witness: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Generator of the subgroup on which ergodicity fails; `None` for the
    /// whole ring.
    pub ideal: Option<RingElement>,
    pub kappa: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicityVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Nonzero integer vectors with `|κ_j| ≤ radius`, one of each `±κ` pair,
/// ordered by max-norm and then lexicographically.
pub fn frequency_box(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for r in 1..=radius {
        let side = (2 * r + 1) as usize;
        let total = side.pow(dim as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut k = vec![0i64; dim];
            for slot in k.iter_mut().rev() {
                *slot = (rest % side) as i64 - r;
                rest /= side;
            }
            let norm = k.iter().map(|v| v.abs()).max().unwrap_or(0);
            let first_positive = k.iter().find(|v| **v != 0).is_some_and(|v| *v > 0);
            if norm == r && first_positive {
                out.push(k);
            }
        }
    }
    out
}

fn probe_elements(ring: Ring) -> Vec<RingElement> {
    match ring {
        Ring::Integers => [1, -1, 2, 7, 100].iter().map(|&k| RingElement::from_int(ring, k)).collect(),
        Ring::GaussianIntegers => {
            [(1, 0), (0, 1), (2, -3), (-5, 4)].iter().map(|&(a, b)| RingElement::gaussian(a, b)).collect()
        }
        Ring::Rationals => {
            [(1, 1), (1, 2), (-2, 3), (7, 6)].iter().map(|&(a, b)| RingElement::rational(a, b)).collect()
        }
    }
}
