//! PET induction on polynomial systems.
//!
//! Systems live over an extended variable set: primary variables `g` plus
//! formal shift parameters introduced by each van der Corput step. Degrees,
//! equivalence and weights are taken in the primary variables only, with the
//! parameters treated as generic coefficients. Conditions under which a
//! concrete choice of parameters would break the generic picture are kept as
//! explicit polynomials that must not vanish.

mod corpus;
mod generic;
mod reduce;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Ring, RingElement};
use crate::polynomials::{Degree, Exponent, PolyError, PolySystem, RingPolynomial};

pub use corpus::seeded_corpus;
pub use generic::{pet_reduce_generic, vdc_step_at, GenericOutcome};
pub use reduce::{
    pet_reduce, vdc_step, PetBudget, PetOutcome, VdcStep, DEFAULT_MAX_DEPTH, DEFAULT_MAX_SIZE, DEFAULT_MAX_TERMS,
    PAIR_CONSTRAINT_CAP,
};
pub use trace::{render_outline, NodeOrigin, ReductionNode, TraceNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PetError {
    #[error("polynomial {index} is constant in the primary variables")]
    Constant { index: usize },
    #[error("polynomials {first} and {second} differ by a constant")]
    NotEssentiallyDistinct { first: usize, second: usize },
    #[error("system is not standard")]
    NotStandard,
    #[error("degree-one system: use the linear base case")]
    LinearSystem,
    #[error("polynomial {index} has degree {degree}, not below the bound {bound}")]
    DegreeBound { index: usize, degree: u32, bound: u32 },
    #[error("budget exceeded at depth {depth} with {size} polynomials: {reason}")]
    Budget { depth: usize, size: usize, reason: String },
    #[error("weight did not decrease: {child} is not below {parent}")]
    WeightNotDecreased { parent: Weight, child: Weight },
    #[error("equivalence is not transitive on polynomials {0:?}")]
    NotTransitive(Vec<usize>),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(ω₁, …, ω_m)`: the number of equivalence classes of each degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn entries(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Shorter weights are smaller; equal lengths compare from the top entry down.
pub fn weight_less(a: &Weight, b: &Weight) -> bool {
    let (a, b) = (&a.0, &b.0);
    if a.len() != b.len() {
        return a.len() < b.len();
    }
    for n in (0..a.len()).rev() {
        if a[n] != b[n] {
            return a[n] < b[n];
        }
    }
    false
}

/// A polynomial system together with its variable names and the mask of
/// primary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetSystem {
    polys: Vec<RingPolynomial>,
    names: Vec<String>,
    primary: Vec<bool>,
}

impl PetSystem {
    pub fn new(polys: Vec<RingPolynomial>, names: Vec<String>, primary: Vec<bool>) -> Result<Self, PetError> {
        if polys.is_empty() {
            return Err(PolyError::EmptySystem.into());
        }
        let ring = polys[0].ring();
        if names.len() != primary.len()
            || polys.iter().any(|p| p.nvars() != names.len() || p.ring() != ring)
        {
            return Err(PolyError::Mismatch.into());
        }
        Ok(Self { polys, names, primary })
    }

    /// Every variable of the plain system is primary; names default to `g`
    /// (one variable) or `g1, …, gd`.
    pub fn from_system(system: &PolySystem) -> Self {
        let d = system.nvars();
        let names = if d == 1 { vec!["g".to_string()] } else { (1..=d).map(|i| format!("g{i}")).collect() };
        Self { polys: system.polys().to_vec(), names, primary: vec![true; d] }
    }

    pub fn polys(&self) -> &[RingPolynomial] {
        &self.polys
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn primary(&self) -> &[bool] {
        &self.primary
    }

    pub fn ring(&self) -> Ring {
        self.polys[0].ring()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn primary_count(&self) -> usize {
        self.primary.iter().filter(|p| **p).count()
    }

    pub fn parameter_count(&self) -> usize {
        self.primary.len() - self.primary_count()
    }

    pub fn degree_of(&self, p: &RingPolynomial) -> Degree {
        p.degree_in(&self.primary)
    }

    pub fn degree(&self) -> Degree {
        self.polys.iter().map(|p| self.degree_of(p)).max().unwrap_or(Degree::NegInfinity)
    }

    pub fn texts(&self) -> Vec<String> {
        self.polys.iter().map(|p| p.display_with(&self.names)).collect()
    }

    /// `p ~ q` iff both have degree `D` and `deg(p − q) < D`.
    pub fn equivalent(&self, p: &RingPolynomial, q: &RingPolynomial) -> bool {
        let d = self.degree_of(p);
        d == self.degree_of(q) && self.degree_of(&(p - q)) < d
    }

    /// The part of `p` of top primary degree; equal tops mean equivalence.
    fn top(&self, p: &RingPolynomial) -> (Degree, RingPolynomial) {
        let d = self.degree_of(p);
        let top = match d {
            Degree::Finite(k) => p.homogeneous_part_in(&self.primary, k),
            Degree::NegInfinity => p.clone(),
        };
        (d, top)
    }

    /// `p` with every term free of primary variables removed.
    fn nonconstant_part(&self, p: &RingPolynomial) -> RingPolynomial {
        let terms = p
            .terms()
            .iter()
            .filter(|(e, _)| e.iter().zip(&self.primary).any(|(k, m)| *m && *k > 0))
            .map(|(e, c)| (e.clone(), c.clone()));
        RingPolynomial::from_terms(p.ring(), p.nvars(), terms)
    }

    fn check_nonconstant(&self) -> Result<(), PetError> {
        for (index, p) in self.polys.iter().enumerate() {
            if self.degree_of(p) <= Degree::Finite(0) {
                return Err(PetError::Constant { index });
            }
        }
        Ok(())
    }

    /// First pair of members differing by a primary-constant, if any.
    pub fn constant_difference(&self) -> Option<(usize, usize)> {
        let mut seen: BTreeMap<RingPolynomial, usize> = BTreeMap::new();
        for (i, p) in self.polys.iter().enumerate() {
            if let Some(&j) = seen.get(&self.nonconstant_part(p)) {
                return Some((j, i));
            }
            seen.insert(self.nonconstant_part(p), i);
        }
        None
    }

    /// Coefficient of the lexicographically largest top-degree primary
    /// monomial, as a polynomial in the parameters.
    pub fn leading_coefficient(&self, p: &RingPolynomial) -> RingPolynomial {
        let (d, top) = self.top(p);
        if d == Degree::NegInfinity {
            return RingPolynomial::zero(p.ring(), p.nvars());
        }
        let key = |e: &Exponent| -> Exponent {
            e.iter().zip(&self.primary).map(|(k, m)| if *m { *k } else { 0 }).collect()
        };
        let lead = top.terms().keys().map(key).max().expect("nonzero top part");
        let terms = top.terms().iter().filter(|(e, _)| key(e) == lead).map(|(e, c)| {
            let e: Exponent = e.iter().zip(&self.primary).map(|(k, m)| if *m { 0 } else { *k }).collect();
            (e, c.clone())
        });
        RingPolynomial::from_terms(p.ring(), p.nvars(), terms)
    }

    /// Substitute concrete values for the parameters, leaving a system in the
    /// primary variables only.
    pub fn specialize(&self, values: &[RingElement]) -> Result<PetSystem, PetError> {
        let params = self.parameter_count();
        if values.len() != params {
            return Err(PolyError::Arity { expected: params, found: values.len() }.into());
        }
        let d = self.primary_count();
        let ring = self.ring();
        let mut next_primary = 0;
        let mut next_param = 0;
        let subs: Vec<RingPolynomial> = self
            .primary
            .iter()
            .map(|&m| {
                if m {
                    next_primary += 1;
                    RingPolynomial::variable(ring, d, next_primary - 1)
                } else {
                    next_param += 1;
                    RingPolynomial::constant(values[next_param - 1].clone(), d)
                }
            })
            .collect();
        let polys = self.polys.iter().map(|p| p.substitute(&subs)).collect::<Result<Vec<_>, _>>()?;
        let names = self.names.iter().zip(&self.primary).filter(|(_, m)| **m).map(|(n, _)| n.clone()).collect();
        Ok(PetSystem { polys, names, primary: vec![true; d] })
    }
}

/// Partition member indices by equivalence; classes are listed in order of
/// first appearance.
pub fn equivalence_classes(system: &PetSystem) -> Result<Vec<Vec<usize>>, PetError> {
    system.check_nonconstant()?;
    let mut index: BTreeMap<(Degree, RingPolynomial), usize> = BTreeMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in system.polys.iter().enumerate() {
        let key = system.top(p);
        match index.get(&key) {
            Some(&c) => classes[c].push(i),
            None => {
                index.insert(key, classes.len());
                classes.push(vec![i]);
            }
        }
    }
    // The relation is checked directly against its definition: pairwise for
    // small classes, against the first member otherwise.
    for class in &classes {
        let ok = if class.len() <= 16 {
            class.iter().all(|&a| class.iter().all(|&b| system.equivalent(&system.polys[a], &system.polys[b])))
        } else {
            class.iter().all(|&b| system.equivalent(&system.polys[class[0]], &system.polys[b]))
        };
        if !ok {
            return Err(PetError::NotTransitive(class.clone()));
        }
    }
    Ok(classes)
}

pub fn weight(system: &PetSystem) -> Result<Weight, PetError> {
    let classes = equivalence_classes(system)?;
    let m = system.degree().finite().unwrap_or(0) as usize;
    let mut w = vec![0u32; m];
    for class in classes {
        let d = system.degree_of(&system.polys[class[0]]).finite().expect("nonconstant");
        w[d as usize - 1] += 1;
    }
    Ok(Weight(w))
}

/// Nonconstant, essentially distinct, and `deg p₁ = deg P`.
pub fn is_standard(system: &PetSystem) -> bool {
    if system.check_nonconstant().is_err() || system.constant_difference().is_some() {
        return false;
    }
    system.degree_of(&system.polys[0]) == system.degree()
}

/// Convenience wrappers on plain systems, where every variable is primary.
pub fn system_weight(system: &PolySystem) -> Result<Weight, PetError> {
    weight(&PetSystem::from_system(system))
}

pub fn system_classes(system: &PolySystem) -> Result<Vec<Vec<usize>>, PetError> {
    equivalence_classes(&PetSystem::from_system(system))
}

pub fn system_is_standard(system: &PolySystem) -> bool {
    is_standard(&PetSystem::from_system(system))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(v: &[&str]) -> PolySystem {
        PolySystem::parse(Ring::Integers, 1, v).unwrap()
    }

    #[test]
    fn classes_examples() {
        assert_eq!(system_classes(&sys(&["n^2", "n^2+n", "n^3"])).unwrap(), vec![vec![0, 1], vec![2]]);
        assert_eq!(system_classes(&sys(&["n", "n^2", "n^3"])).unwrap(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(system_classes(&sys(&["n", "5*n"])).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(system_classes(&sys(&["n", "3"])), Err(PetError::Constant { index: 1 }));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(system_weight(&sys(&["n", "n^2", "n^2+n", "n^3"])).unwrap(), Weight(vec![1, 1, 1]));
        assert_eq!(system_weight(&sys(&["n"])).unwrap(), Weight(vec![1]));
        assert_eq!(system_weight(&sys(&["n^2", "3*n^2"])).unwrap(), Weight(vec![0, 2]));
    }

    #[test]
    fn weight_order_examples() {
        assert!(weight_less(&Weight(vec![1, 2]), &Weight(vec![0, 0, 1])));
        assert!(weight_less(&Weight(vec![0, 1]), &Weight(vec![1, 1])));
        assert!(!weight_less(&Weight(vec![1, 1]), &Weight(vec![1, 1])));
        assert!(!weight_less(&Weight(vec![0, 0, 1]), &Weight(vec![5, 7])));
    }

    #[test]
    fn standard_examples() {
        assert!(system_is_standard(&sys(&["n^2", "n"])));
        assert!(!system_is_standard(&sys(&["n", "n^2"])));
        assert!(!system_is_standard(&sys(&["n", "n+1"])));
    }

    #[test]
    fn leading_coefficient_in_parameters() {
        let names: Vec<String> = ["g", "h", "h'"].iter().map(|s| s.to_string()).collect();
        let p = crate::polynomials::parse_polynomial(Ring::Integers, "(h-h')*g^2 + g + h", &["g", "h", "h'"]).unwrap();
        let s = PetSystem::new(vec![p.clone()], names, vec![true, false, false]).unwrap();
        let lc = s.leading_coefficient(&p);
        assert_eq!(lc.display_with(s.names()), "h - h'");
        assert_eq!(s.degree_of(&p), Degree::Finite(2));
    }
}
