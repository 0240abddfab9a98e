//! One van der Corput step and the full reduction to linear systems.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::algebra::RingElement;
use crate::polynomials::{Degree, PolySystem, RingPolynomial};

use super::trace::{NodeOrigin, ReductionNode};
use super::{equivalence_classes, is_standard, weight, weight_less, PetError, PetSystem, Weight};

pub const DEFAULT_MAX_DEPTH: usize = 64;
pub const DEFAULT_MAX_SIZE: usize = 4096;
/// Above this many same-degree pairs the pairwise constraints are skipped.
pub const PAIR_CONSTRAINT_CAP: usize = 2048;
/// Memory guard on the total number of stored terms in one system.
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PetBudget {
    pub max_depth: usize,
    pub max_size: usize,
    pub max_terms: usize,
}

impl Default for PetBudget {
    fn default() -> Self {
        Self { max_depth: DEFAULT_MAX_DEPTH, max_size: DEFAULT_MAX_SIZE, max_terms: DEFAULT_MAX_TERMS }
    }
}

#[derive(Clone, Debug)]
pub struct VdcStep {
    pub child: PetSystem,
    /// Zero-based index of the subtracted polynomial.
    pub i0: usize,
    pub parent_weight: Weight,
    pub child_weight: Weight,
    /// Each must be a nonzero polynomial in the parameters for the generic
    /// degrees and classes to hold.
    pub constraints: Vec<RingPolynomial>,
    pub pair_constraints_omitted: bool,
}

/// Choose `i₀` among the members after the first: minimal degree, then (when
/// all degrees agree) not equivalent to `p₁` if possible, then lowest index.
/// A single polynomial is subtracted from its own shift.
pub(crate) fn choose_i0(system: &PetSystem) -> usize {
    let ps = system.polys();
    if ps.len() == 1 {
        return 0;
    }
    let degrees: Vec<Degree> = ps.iter().map(|p| system.degree_of(p)).collect();
    let min = *degrees[1..].iter().min().expect("at least two members");
    let candidates: Vec<usize> = (1..ps.len()).filter(|&i| degrees[i] == min).collect();
    let all_equal = degrees.iter().all(|d| *d == degrees[0]);
    if all_equal {
        if let Some(&i) = candidates.iter().find(|&&i| !system.equivalent(&ps[0], &ps[i])) {
            return i;
        }
    }
    candidates[0]
}

/// `(index, tag)` pairs of `P_{h,h'}` in canonical order, tag 0 for `h` and 1
/// for `h'`: `p₁(g+h)` first, `p_{i₀}(g+h')` last, the rest by index then tag.
pub(crate) fn arrange(system: &PetSystem, i0: usize) -> Vec<(usize, u8)> {
    let mut order: Vec<(usize, u8)> = Vec::new();
    for (i, p) in system.polys.iter().enumerate() {
        if system.degree_of(p) > Degree::Finite(1) {
            order.push((i, 0));
        }
        order.push((i, 1));
    }
    let first = (0usize, 0u8);
    let last = (i0, 1u8);
    let mut arranged = vec![first];
    arranged.extend(order.into_iter().filter(|t| *t != first && *t != last));
    arranged.push(last);
    arranged
}

/// Build `P'_{h,h'}` with fresh formal shifts for every primary variable.
pub fn vdc_step(system: &PetSystem) -> Result<VdcStep, PetError> {
    if !is_standard(system) {
        if let Some((first, second)) = system.constant_difference() {
            return Err(PetError::NotEssentiallyDistinct { first, second });
        }
        system.check_nonconstant()?;
        return Err(PetError::NotStandard);
    }
    if system.degree() < Degree::Finite(2) {
        return Err(PetError::LinearSystem);
    }
    let parent_weight = weight(system)?;
    let i0 = choose_i0(system);

    // Extended variables: old ones, then h and h' for each primary variable.
    let primary_idx: Vec<usize> = (0..system.primary.len()).filter(|&i| system.primary[i]).collect();
    let dp = primary_idx.len();
    let step = system.parameter_count() / (2 * dp) + 1;
    let old = system.names.len();
    let mut names = system.names.clone();
    let single = dp == 1;
    for tag in ["", "'"] {
        for &j in &primary_idx {
            names.push(if single {
                format!("h{step}{tag}")
            } else {
                format!("h{step}_{}{tag}", system.names[j])
            });
        }
    }
    let mut primary = system.primary.clone();
    primary.extend(std::iter::repeat(false).take(2 * dp));
    let nv = names.len();
    let targets = |offset: usize| -> Vec<Option<usize>> {
        (0..old).map(|i| primary_idx.iter().position(|&j| j == i).map(|k| old + offset + k)).collect()
    };
    let targets_h = targets(0);
    let targets_hp = targets(dp);

    let arranged = arrange(system, i0);

    let shifted: Vec<RingPolynomial> = arranged
        .par_iter()
        .map(|&(i, tag)| {
            let t = if tag == 0 { &targets_h } else { &targets_hp };
            system.polys[i].shift_by_variables(t, nv)
        })
        .collect();
    let qs = shifted.last().expect("nonempty").clone();
    let children: Vec<RingPolynomial> =
        shifted[..shifted.len() - 1].par_iter().map(|q| q - &qs).collect();
    let child = PetSystem { polys: children, names, primary };

    let child_weight = weight(&child)?;
    if !weight_less(&child_weight, &parent_weight) {
        return Err(PetError::WeightNotDecreased { parent: parent_weight, child: child_weight });
    }
    let (constraints, pair_constraints_omitted) = exceptional_constraints(&child)?;
    Ok(VdcStep { child, i0, parent_weight, child_weight, constraints, pair_constraints_omitted })
}

/// Leading parameter coefficients whose vanishing would change a degree, merge
/// two classes, or make two members differ by a constant.
fn exceptional_constraints(system: &PetSystem) -> Result<(Vec<RingPolynomial>, bool), PetError> {
    let ps = system.polys();
    let mut out: BTreeSet<RingPolynomial> = BTreeSet::new();
    let mut keep = |c: RingPolynomial| {
        if !c.is_constant() {
            out.insert(c);
        }
    };
    for p in ps {
        keep(system.leading_coefficient(p));
    }
    let classes = equivalence_classes(system)?;
    let mut class_of = vec![0usize; ps.len()];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    let degrees: Vec<Degree> = ps.iter().map(|p| system.degree_of(p)).collect();
    let pairs: Vec<(usize, usize)> = (0..ps.len())
        .flat_map(|a| (a + 1..ps.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| class_of[a] == class_of[b] || degrees[a] == degrees[b])
        .collect();
    let omitted = pairs.len() > PAIR_CONSTRAINT_CAP;
    if !omitted {
        let diffs: Vec<RingPolynomial> =
            pairs.par_iter().map(|&(a, b)| system.leading_coefficient(&(&ps[a] - &ps[b]))).collect();
        for c in diffs {
            keep(c);
        }
    }
    Ok((out.into_iter().collect(), omitted))
}

#[derive(Clone, Debug)]
pub struct PetOutcome {
    pub k: usize,
    pub depth: usize,
    pub trace: ReductionNode,
}

/// Reduce to a degree-one system and return the seminorm step `k = s + 1`
/// for a leaf of size `s`. Nonstandard inputs are first doubled with
/// `q(g) = g₁^b` over three copies of the variables.
pub fn pet_reduce(system: &PolySystem, degree_bound: Option<u32>, budget: PetBudget) -> Result<PetOutcome, PetError> {
    let (root_system, origin) = root(system, degree_bound)?;

    let mut chain: Vec<(PetSystem, Weight, NodeOrigin)> = Vec::new();
    let mut steps: Vec<VdcStep> = Vec::new();
    let mut current = root_system;
    let mut current_origin = origin;
    loop {
        let w = weight(&current)?;
        if current.degree() == Degree::Finite(1) {
            let k = current.len() + 1;
            chain.push((current, w, current_origin));
            let depth = chain.len() - 1;
            return Ok(PetOutcome { k, depth, trace: assemble(chain, steps) });
        }
        let depth = chain.len();
        if depth >= budget.max_depth {
            return Err(PetError::Budget { depth, size: current.len(), reason: "maximum depth reached".into() });
        }
        let next_size = current
            .polys
            .iter()
            .map(|p| if current.degree_of(p) > Degree::Finite(1) { 2 } else { 1 })
            .sum::<usize>()
            - 1;
        let terms: usize = current.polys.iter().map(|p| p.terms().len()).sum();
        if terms > budget.max_terms {
            return Err(PetError::Budget {
                depth,
                size: current.len(),
                reason: format!("system holds {terms} terms"),
            });
        }
        if next_size > budget.max_size {
            return Err(PetError::Budget {
                depth,
                size: current.len(),
                reason: format!("next system would have {next_size} polynomials"),
            });
        }
        let step = vdc_step(&current)?;
        let child = step.child.clone();
        chain.push((current, w, current_origin));
        steps.push(step);
        current = child;
        current_origin = NodeOrigin::VdcStep;
    }
}

/// Validate the input and return the standard system the reduction starts
/// from, doubling nonstandard inputs.
pub(crate) fn root(system: &PolySystem, degree_bound: Option<u32>) -> Result<(PetSystem, NodeOrigin), PetError> {
    let plain = PetSystem::from_system(system);
    plain.check_nonconstant()?;
    if let Some((first, second)) = plain.constant_difference() {
        return Err(PetError::NotEssentiallyDistinct { first, second });
    }
    let deg = plain.degree().finite().expect("nonconstant");
    let bound = degree_bound.unwrap_or(deg + 1);
    for (index, p) in plain.polys.iter().enumerate() {
        let d = plain.degree_of(p).finite().expect("nonconstant");
        if d >= bound {
            return Err(PetError::DegreeBound { index, degree: d, bound });
        }
    }
    if is_standard(&plain) {
        Ok((plain, NodeOrigin::Input))
    } else {
        let doubled = double(&plain, bound);
        Ok((doubled, NodeOrigin::Doubled { original: system_texts(system), q_degree: bound }))
    }
}

fn system_texts(system: &PolySystem) -> Vec<String> {
    let names = RingPolynomial::default_names(system.nvars());
    system.polys().iter().map(|p| p.display_with(&names)).collect()
}

/// `{p_i(g+s) + q(g)} ∪ {p_i(g+t) + q(g)}` over `3d` primary variables.
pub(crate) fn double(system: &PetSystem, bound: u32) -> PetSystem {
    let d = system.names.len();
    let ring = system.ring();
    let nv = 3 * d;
    let names: Vec<String> = if d == 1 {
        vec!["g".into(), "s".into(), "t".into()]
    } else {
        ["g", "s", "t"].iter().flat_map(|p| (1..=d).map(move |i| format!("{p}{i}"))).collect()
    };
    let shifted = |offset: usize| -> Vec<RingPolynomial> {
        (0..d)
            .map(|i| &RingPolynomial::variable(ring, nv, i) + &RingPolynomial::variable(ring, nv, offset + i))
            .collect()
    };
    let q = RingPolynomial::variable(ring, nv, 0).pow(bound);
    let mut polys = Vec::with_capacity(2 * system.len());
    for offset in [d, 2 * d] {
        let subs = shifted(offset);
        for p in &system.polys {
            polys.push(&p.substitute(&subs).expect("arity matches") + &q);
        }
    }
    PetSystem { polys, names, primary: vec![true; nv] }
}

fn assemble(chain: Vec<(PetSystem, Weight, NodeOrigin)>, steps: Vec<VdcStep>) -> ReductionNode {
    let mut node: Option<ReductionNode> = None;
    for (idx, (system, w, origin)) in chain.into_iter().enumerate().rev() {
        let step = steps.get(idx);
        let leaf_k = node.is_none().then(|| system.len() + 1);
        node = Some(ReductionNode {
            system,
            weight: w,
            origin,
            i0: step.map(|s| s.i0),
            constraints: step.map(|s| s.constraints.clone()).unwrap_or_default(),
            pair_constraints_omitted: step.is_some_and(|s| s.pair_constraints_omitted),
            leaf_k,
            children: node.into_iter().collect(),
        });
    }
    node.expect("nonempty chain")
}

impl VdcStep {
    /// Whether every constraint is nonzero at concrete parameter values,
    /// listed in variable order.
    pub fn constraints_hold(&self, values: &[RingElement]) -> bool {
        self.constraints.iter().all(|c| {
            let mut point = vec![RingElement::zero(c.ring()); c.nvars()];
            let mut it = values.iter();
            for (slot, m) in point.iter_mut().zip(self.child.primary()) {
                if !*m {
                    *slot = it.next().expect("one value per parameter").clone();
                }
            }
            !c.evaluate(&point).expect("arity matches").is_zero()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;

    fn plain(v: &[&str]) -> PetSystem {
        PetSystem::from_system(&PolySystem::parse(Ring::Integers, 1, v).unwrap())
    }

    #[test]
    fn quadratic_and_linear_step() {
        let step = vdc_step(&plain(&["n^2", "n"])).unwrap();
        assert_eq!(step.i0, 1);
        assert_eq!(step.child.texts(), vec!["g^2 + 2*g*h1 + h1^2 - g - h1'", "g^2 + 2*g*h1' + h1'^2 - g - h1'"]);
        assert_eq!(step.parent_weight, Weight(vec![1, 1]));
        assert_eq!(step.child_weight, Weight(vec![0, 1]));
    }

    #[test]
    fn trace_constraints_use_step_variables() {
        let sys = PolySystem::parse(Ring::Integers, 1, &["n^2", "n"]).unwrap();
        let out = pet_reduce(&sys, None, PetBudget::default()).unwrap();
        let trace = out.trace.to_trace();
        assert!(!trace.constraints.is_empty());
        assert!(trace.constraints.iter().any(|c| c.contains("h1")));
        assert!(crate::pet::render_outline(&trace).contains("nonzero:"));
    }

    #[test]
    fn equal_quadratics_collapse() {
        let step = vdc_step(&plain(&["n^2", "2*n^2"])).unwrap();
        assert_eq!(step.i0, 1);
        assert_eq!(step.child.len(), 3);
        // Two members share the top part -g², the third drops to degree one.
        assert_eq!(step.child_weight, Weight(vec![1, 1]));
    }

    #[test]
    fn cubic_with_linear() {
        let step = vdc_step(&plain(&["n^3", "n"])).unwrap();
        assert_eq!(step.child.degree(), Degree::Finite(3));
        assert!(weight_less(&step.child_weight, &Weight(vec![1, 0, 1])) || step.child_weight == Weight(vec![1, 0, 1]));
    }

    #[test]
    fn linear_input_is_refused() {
        assert!(matches!(vdc_step(&plain(&["n", "2*n"])), Err(PetError::LinearSystem)));
    }

    #[test]
    fn linear_systems_give_r_plus_one() {
        let polys = ["n", "2*n", "3*n", "4*n", "5*n"];
        for r in 1..=5 {
            let sys = PolySystem::parse(Ring::Integers, 1, &polys[..r]).unwrap();
            let out = pet_reduce(&sys, None, PetBudget::default()).unwrap();
            assert_eq!(out.k, r + 1);
            assert_eq!(out.depth, 0);
        }
    }

    #[test]
    fn quadratic_linear_needs_four() {
        let sys = PolySystem::parse(Ring::Integers, 1, &["n^2", "n"]).unwrap();
        let out = pet_reduce(&sys, None, PetBudget::default()).unwrap();
        assert_eq!(out.k, 4);
        assert_eq!(out.depth, 2);
    }

    #[test]
    fn nonstandard_input_is_doubled() {
        let d = double(&plain(&["n", "n^2"]), 3);
        assert_eq!(d.len(), 4);
        assert_eq!(d.primary_count(), 3);
        assert!(is_standard(&d));
        assert_eq!(weight(&d).unwrap(), Weight(vec![0, 0, 1]));
        assert_eq!(d.texts()[1], "g^3 + g^2 + 2*g*s + s^2");
        // The doubled cubic tower outgrows a small budget quickly.
        let sys = PolySystem::parse(Ring::Integers, 1, &["n", "n^2"]).unwrap();
        let budget = PetBudget { max_size: 64, ..PetBudget::default() };
        assert!(matches!(pet_reduce(&sys, None, budget), Err(PetError::Budget { .. })));
    }

    #[test]
    fn errors_name_the_offending_pair() {
        let sys = PolySystem::parse(Ring::Integers, 1, &["n^2", "n", "n^2 + 3"]).unwrap();
        assert_eq!(
            pet_reduce(&sys, None, PetBudget::default()).unwrap_err(),
            PetError::NotEssentiallyDistinct { first: 0, second: 2 }
        );
        let sys = PolySystem::parse(Ring::Integers, 1, &["n^2", "5"]).unwrap();
        assert_eq!(pet_reduce(&sys, None, PetBudget::default()).unwrap_err(), PetError::Constant { index: 1 });
    }

    #[test]
    fn constraints_vanish_on_the_diagonal() {
        let step = vdc_step(&plain(&["n^2", "n"])).unwrap();
        let one = RingElement::from_int(Ring::Integers, 1);
        let two = RingElement::from_int(Ring::Integers, 2);
        assert!(step.constraints_hold(&[one.clone(), two]));
        assert!(!step.constraints_hold(&[one.clone(), one]));
    }
}
