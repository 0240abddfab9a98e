//! Reduction at random concrete shifts.
//!
//! Replacing the formal parameters by random integers from a wide range
//! lands outside the exceptional set with overwhelming probability (a
//! nonzero polynomial of degree `D` vanishes on at most a `D/|range|`
//! fraction of a grid). Systems then stay in the primary variables only, so
//! weights and sizes of deep towers are cheap to follow.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{Ring, RingElement};
use crate::polynomials::{Degree, PolySystem, RingPolynomial};

use super::reduce::{arrange, choose_i0, root, PetBudget};
use super::{weight, weight_less, PetError, PetSystem, Weight};

const SHIFT_RANGE: i64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericOutcome {
    pub k: usize,
    pub depth: usize,
    /// Weight of each system along the chain, root first.
    pub weights: Vec<Weight>,
    pub sizes: Vec<usize>,
}

fn random_element(rng: &mut ChaCha8Rng, ring: Ring) -> RingElement {
    let mut draw = || rng.gen_range(-SHIFT_RANGE..=SHIFT_RANGE);
    match ring {
        Ring::GaussianIntegers => {
            let a = draw();
            RingElement::gaussian(a, draw())
        }
        _ => RingElement::from_int(ring, draw()),
    }
}

/// One step of the reduction with concrete `h, h'`.
pub fn vdc_step_at(system: &PetSystem, h: &[RingElement], hp: &[RingElement]) -> Result<PetSystem, PetError> {
    if system.degree() < Degree::Finite(2) {
        return Err(PetError::LinearSystem);
    }
    let i0 = choose_i0(system);
    let arranged = arrange(system, i0);
    let shifted: Vec<RingPolynomial> = arranged
        .par_iter()
        .map(|&(i, tag)| system.polys()[i].shift(if tag == 0 { h } else { hp }).expect("arity matches"))
        .collect();
    let qs = shifted.last().expect("nonempty").clone();
    let polys = shifted[..shifted.len() - 1].par_iter().map(|q| q - &qs).collect();
    PetSystem::new(polys, system.names().to_vec(), system.primary().to_vec())
}

/// Follow the reduction chain with seeded random shifts.
pub fn pet_reduce_generic(
    system: &PolySystem,
    degree_bound: Option<u32>,
    budget: PetBudget,
    seed: u64,
) -> Result<GenericOutcome, PetError> {
    let (mut current, _) = root(system, degree_bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = current.primary_count();
    let ring = current.ring();
    let mut weights = Vec::new();
    let mut sizes = Vec::new();
    loop {
        let w = weight(&current)?;
        weights.push(w.clone());
        sizes.push(current.len());
        let depth = weights.len() - 1;
        if current.degree() == Degree::Finite(1) {
            return Ok(GenericOutcome { k: current.len() + 1, depth, weights, sizes });
        }
        if depth >= budget.max_depth {
            return Err(PetError::Budget { depth, size: current.len(), reason: "maximum depth reached".into() });
        }
        let next_size = current
            .polys()
            .iter()
            .map(|p| if current.degree_of(p) > Degree::Finite(1) { 2 } else { 1 })
            .sum::<usize>()
            - 1;
        if next_size > budget.max_size {
            return Err(PetError::Budget {
                depth,
                size: current.len(),
                reason: format!("next system would have {next_size} polynomials"),
            });
        }
        let h: Vec<RingElement> = (0..d).map(|_| random_element(&mut rng, ring)).collect();
        let hp: Vec<RingElement> = (0..d).map(|_| random_element(&mut rng, ring)).collect();
        let child = vdc_step_at(&current, &h, &hp)?;
        let cw = weight(&child)?;
        if !weight_less(&cw, &w) {
            return Err(PetError::WeightNotDecreased { parent: w, child: cw });
        }
        current = child;
    }
}
