//! Uniformity seminorms `⫼f⫼_s` of trigonometric observables on rotation
//! systems.
//!
//! The truncated estimate uses the combined average
//! `E_{n̲∈Φ_N^s} ∫ Δ_n̲ f dμ`. On a rotation every term of `∫ Δ_n̲ f` is a
//! product of characters in the separate coordinates `n_j`, so the average
//! over the product set factors into one-dimensional character sums.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FolnerSequence, Ideal, IdealIndex, RingElement};
use crate::polynomials::{Degree, PolyError, RingPolynomial};
use crate::sums::{mean_real, mean_unit};
use crate::systems::{Frequency, RotationSystem, SystemError, TrigObservable, DEFAULT_SUPPORT_BUDGET};

/// Largest number of frequency tuples enumerated by the truncated estimate.
pub const DEFAULT_TUPLE_BUDGET: usize = 20_000_000;

/// Negative truncated values above this are clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeminormError {
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Config(String),
    #[error("numerical integrity: {0}")]
    Integrity(String),
    #[error("the closed form needs an ergodic rotation; e(κ·x) is invariant for κ = {0:?}")]
    NotErgodic(Vec<i64>),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A vertex `ε ∈ {0,1}^s` of the discrete cube.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeIndex {
    bits: Vec<bool>,
}

impl CubeIndex {
    pub fn new(bits: Vec<bool>) -> Result<Self, SeminormError> {
        if bits.is_empty() {
            return Err(SeminormError::Config("cube depth must be at least 1".into()));
        }
        Ok(Self { bits })
    }

    /// All `2^s` vertices, `ε` read as a binary number with `ε_1` lowest.
    pub fn all(s: usize) -> Vec<Self> {
        (0..1usize << s).map(|m| Self { bits: (0..s).map(|j| m >> j & 1 == 1).collect() }).collect()
    }

    pub fn depth(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// `|ε| = Σ ε_i`.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Whether `C^{|ε|}` conjugates.
    pub fn conjugates(&self) -> bool {
        self.weight() % 2 == 1
    }

    /// `ε·n̲ = Σ ε_i n_i`.
    pub fn dot(&self, ns: &[RingElement]) -> RingElement {
        assert_eq!(ns.len(), self.bits.len());
        let ring = ns[0].ring();
        ns.iter().zip(&self.bits).filter(|(_, b)| **b).fold(RingElement::zero(ring), |acc, (n, _)| &acc + n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeminormMethod {
    /// Truncated combined average over `Φ_N^s`.
    Recursive,
    /// Exact limit on ergodic rotations.
    ClosedForm,
    /// `E_{n̲∈Φ_N^{s−2}} ⫼Δ_n̲ f⫼₂⁴`, with the inner seminorm in closed form.
    EarlyStop,
}

impl std::fmt::Display for SeminormMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeminormMethod::Recursive => "recursive",
            SeminormMethod::ClosedForm => "closed-form",
            SeminormMethod::EarlyStop => "early-stop",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeminormEstimate {
    pub s: usize,
    pub value: f64,
    /// Følner index used at each level; empty for the closed form.
    pub truncation: Vec<u32>,
    pub method: SeminormMethod,
}

/// `Δ_n f = f · T_n f̄`.
pub fn delta(sys: &RotationSystem, f: &TrigObservable, n: &RingElement) -> Result<TrigObservable, SeminormError> {
    let shifted = sys.act(n, f)?.conj();
    Ok(f.multiply(&shifted, DEFAULT_SUPPORT_BUDGET)?)
}

/// `Δ_{n_1}⋯Δ_{n_s} f`, computed by repeated differencing and checked
/// against the cube product `Π_ε C^{|ε|} T_{ε·n̲} f`.
pub fn delta_iterated(
    sys: &RotationSystem,
    f: &TrigObservable,
    ns: &[RingElement],
) -> Result<TrigObservable, SeminormError> {
    if ns.is_empty() {
        return Err(SeminormError::Config("at least one difference step is required".into()));
    }
    let mut rec = f.clone();
    for n in ns.iter().rev() {
        rec = delta(sys, &rec, n)?;
    }
    let mut direct = TrigObservable::constant(f.dim(), Complex64::new(1.0, 0.0));
    for eps in CubeIndex::all(ns.len()) {
        let t = sys.act(&eps.dot(ns), f)?;
        let t = if eps.conjugates() { t.conj() } else { t };
        direct = direct.multiply(&t, DEFAULT_SUPPORT_BUDGET)?;
    }
    let scale = f.sup_bound().max(1.0).powi(1 << ns.len());
    let gap = rec.sub(&direct)?.l2_norm();
    if gap > 1e-9 * scale {
        return Err(SeminormError::Integrity(format!(
            "iterated and cube-product differences disagree by {gap:e}"
        )));
    }
    Ok(rec)
}

/// Truncated `⫼f⫼_s` from `E_{n̲∈Φ_{N_1}×⋯×Φ_{N_s}} ∫ Δ_n̲ f dμ`. A single
/// schedule entry is used at every level.
pub fn seminorm_truncated(
    sys: &RotationSystem,
    f: &TrigObservable,
    s: usize,
    schedule: &[u32],
    folner: &FolnerSequence,
) -> Result<SeminormEstimate, SeminormError> {
    let power = truncated_power(sys, f, s, schedule, folner)?;
    let truncation = level_schedule(s, schedule)?;
    Ok(SeminormEstimate { s, value: power.powf(1.0 / (1u64 << s) as f64), truncation, method: SeminormMethod::Recursive })
}

fn level_schedule(s: usize, schedule: &[u32]) -> Result<Vec<u32>, SeminormError> {
    match schedule.len() {
        1 => Ok(vec![schedule[0]; s]),
        l if l == s => Ok(schedule.to_vec()),
        l => Err(SeminormError::Config(format!("schedule of length {l} for s = {s}; give 1 or s entries"))),
    }
}

/// The clamped value of `E ∫ Δ_n̲ f`, i.e. the truncated `⫼f⫼_s^{2^s}`.
pub fn truncated_power(
    sys: &RotationSystem,
    f: &TrigObservable,
    s: usize,
    schedule: &[u32],
    folner: &FolnerSequence,
) -> Result<f64, SeminormError> {
    if s == 0 {
        return Err(SeminormError::Config("seminorm order s must be at least 1".into()));
    }
    if s > 5 {
        return Err(SeminormError::Budget(format!("s = {s} gives 2^s = {} cube vertices", 1u64 << s)));
    }
    if f.dim() != sys.torus_dim() {
        return Err(SystemError::DimMismatch { expected: sys.torus_dim(), found: f.dim() }.into());
    }
    if folner.ring() != sys.ring() {
        return Err(SeminormError::Config(format!("Følner sets over {} for a system over {}", folner.ring(), sys.ring())));
    }
    let levels = level_schedule(s, schedule)?;
    let mut sets = HashMap::new();
    for &n in &levels {
        if let std::collections::hash_map::Entry::Vacant(e) = sets.entry(n) {
            e.insert(folner.set(n)?);
        }
    }
    let mut kernel: HashMap<(u32, Frequency), Complex64> = HashMap::new();
    let total = cube_sum(f, s, |lambdas| {
        let mut term = Complex64::new(1.0, 0.0);
        for (&n, lambda) in levels.iter().zip(lambdas) {
            let key = (n, lambda.clone());
            let d = *kernel.entry(key).or_insert_with(|| {
                if lambda.iter().all(|v| *v == 0) {
                    Complex64::new(1.0, 0.0)
                } else {
                    mean_unit(&sets[&n], |r: &RingElement| sys.phase(lambda, r))
                }
            });
            term *= d;
        }
        term
    })?;
    if folner.is_symmetric() && total.im.abs() > 1e-9 * f.sup_bound().max(1.0).powi(1 << s) {
        return Err(SeminormError::Integrity(format!(
            "imaginary part {:e} over symmetric Følner sets",
            total.im
        )));
    }
    // Over non-symmetric sets the conjugate average is the same limit, so the
    // real part is the symmetrised estimate.
    clamp(total.re)
}

/// `Σ Π_ε C^{|ε|} c_{κ_ε} · K(λ_1, …, λ_s)` over frequency tuples
/// `(κ_ε)_{ε∈{0,1}^s}` with `Σ_ε (−1)^{|ε|} κ_ε = 0`, where
/// `λ_j = Σ_{ε_j=1} (−1)^{|ε|} κ_ε`. This is `E ∫ Δ_n̲ f` once `K` is the
/// product of the one-dimensional averages of `r ↦ e(λ_j·φ(r))`.
fn cube_sum<K>(f: &TrigObservable, s: usize, mut kernel: K) -> Result<Complex64, SeminormError>
where
    K: FnMut(&[Frequency]) -> Complex64,
{
    let support: Vec<(&Frequency, &Complex64)> = f.coeffs().iter().collect();
    if support.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let vertices = CubeIndex::all(s);
    let free = vertices.len() - 1;
    let tuples = (support.len() as f64).powi(free as i32);
    if tuples > DEFAULT_TUPLE_BUDGET as f64 {
        return Err(SeminormError::Budget(format!("{tuples:.0} frequency tuples for s = {s}")));
    }
    let lookup: HashMap<&Frequency, Complex64> = support.iter().map(|(k, c)| (*k, **c)).collect();
    let dim = f.dim();
    let sign = |eps: &CubeIndex| if eps.conjugates() { -1 } else { 1 };
    let mut total = Complex64::new(0.0, 0.0);
    let mut cursor = vec![0usize; free];
    let mut lambdas = vec![vec![0i64; dim]; s];
    loop {
        // Frequencies at the free vertices; the last vertex balances the sum.
        let mut balance = vec![0i64; dim];
        let mut weight = Complex64::new(1.0, 0.0);
        let mut picks: Vec<&Frequency> = Vec::with_capacity(vertices.len());
        for (slot, eps) in cursor.iter().zip(&vertices) {
            let (k, c) = support[*slot];
            for (b, v) in balance.iter_mut().zip(k.iter()) {
                *b += sign(eps) * v;
            }
            weight *= if eps.conjugates() { c.conj() } else { *c };
            picks.push(k);
        }
        let last = &vertices[free];
        let needed: Frequency = balance.iter().map(|b| -sign(last) * b).collect();
        if let Some((key, c)) = lookup.get_key_value(&needed) {
            weight *= if last.conjugates() { c.conj() } else { *c };
            picks.push(*key);
            for (j, lambda) in lambdas.iter_mut().enumerate() {
                lambda.iter_mut().for_each(|l| *l = 0);
                for (eps, k) in vertices.iter().zip(&picks) {
                    if eps.bits()[j] {
                        for (l, v) in lambda.iter_mut().zip(k.iter()) {
                            *l += sign(eps) * v;
                        }
                    }
                }
            }
            total += weight * kernel(&lambdas);
        }
        if !advance(&mut cursor, support.len()) {
            break;
        }
    }
    Ok(total)
}

fn clamp(x: f64) -> Result<f64, SeminormError> {
    if x < -NEGATIVE_TOLERANCE {
        return Err(SeminormError::Integrity(format!("truncated seminorm power {x:e} is negative")));
    }
    Ok(x.max(0.0))
}

fn advance(cursor: &mut [usize], base: usize) -> bool {
    for c in cursor.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

/// `⫼f⫼_s^{2^s}` on an ergodic rotation. On such a system the average of
/// `r ↦ e(λ·φ(r))` tends to `1` for `λ = 0` and to `0` otherwise, so the
/// limit keeps exactly the cube tuples with every `λ_j = 0`. For `s = 1` this
/// is `|c_0|²` and for `s = 2` it is `Σ_κ |c_κ|⁴`.
pub fn closed_form_power(f: &TrigObservable, s: usize) -> Result<f64, SeminormError> {
    match s {
        0 => Err(SeminormError::Config("seminorm order s must be at least 1".into())),
        1 => Ok(f.integral().norm_sqr()),
        2 => {
            let terms: Vec<f64> = f.coeffs().values().map(|c| c.norm_sqr() * c.norm_sqr()).collect();
            Ok(crate::sums::pairwise_sum_real(&terms))
        }
        _ => {
            let total = cube_sum(f, s, |lambdas| {
                if lambdas.iter().all(|l| l.iter().all(|v| *v == 0)) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })?;
            clamp(total.re)
        }
    }
}

fn require_ergodic(sys: &RotationSystem, f: &TrigObservable, s: usize) -> Result<(), SeminormError> {
    let radius = (f.max_frequency() << s.min(5)).clamp(1, 64);
    let v = sys.check_ergodicity(radius);
    match v.witness {
        Some(w) => Err(SeminormError::NotErgodic(w.kappa)),
        None => Ok(()),
    }
}

/// Reference values on ergodic rotations, see [`closed_form_power`]. Also
/// accepts `s = 1`, where the mean ergodic theorem gives `|∫ f|`.
pub fn seminorm_closed_form_rotation(
    sys: &RotationSystem,
    f: &TrigObservable,
    s: usize,
) -> Result<SeminormEstimate, SeminormError> {
    if s == 0 {
        return Err(SeminormError::Config("seminorm order s must be at least 1".into()));
    }
    if f.dim() != sys.torus_dim() {
        return Err(SystemError::DimMismatch { expected: sys.torus_dim(), found: f.dim() }.into());
    }
    require_ergodic(sys, f, s)?;
    let value = closed_form_power(f, s)?.powf(1.0 / (1u64 << s) as f64);
    Ok(SeminormEstimate { s, value, truncation: Vec::new(), method: SeminormMethod::ClosedForm })
}

/// `E_{n̲∈Φ_N^{s−2}} ⫼Δ_n̲ f⫼₂⁴` for `2 ≤ s ≤ 3`.
pub fn seminorm_early_stop(
    sys: &RotationSystem,
    f: &TrigObservable,
    s: usize,
    n: u32,
    folner: &FolnerSequence,
) -> Result<SeminormEstimate, SeminormError> {
    if !(2..=3).contains(&s) {
        return Err(SeminormError::Config(format!("the early-stop form covers s = 2, 3; got {s}")));
    }
    require_ergodic(sys, f, s)?;
    let power = if s == 2 {
        closed_form_power(f, 2)?
    } else {
        let set = folner.set(n)?;
        let deltas: Vec<Result<f64, SeminormError>> =
            set.iter().map(|g| closed_form_power(&delta(sys, f, g)?, 2)).collect();
        let vals = deltas.into_iter().collect::<Result<Vec<_>, _>>()?;
        mean_real(&vals, |v| *v)
    };
    let truncation = if s == 2 { Vec::new() } else { vec![n] };
    Ok(SeminormEstimate {
        s,
        value: clamp(power)?.powf(1.0 / (1u64 << s) as f64),
        truncation,
        method: SeminormMethod::EarlyStop,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearIdentityReport {
    /// `E_{g∈Φ_N} ⫼f · T_{p(g)} f̄⫼_k^{2^k}`.
    pub lhs: f64,
    /// `⫼f⫼_{k+1}^{2^{k+1}}`.
    pub rhs: f64,
    /// `|lhs − rhs|`.
    pub gap: f64,
    /// `[R : J]` for the ideal `J` generated by the coefficient of `p`; `1`
    /// over a field.
    pub bound_factor: u64,
    /// Equality within `tolerance` over a field, `lhs ≤ [R:J]·rhs + tolerance`
    /// over a good ring.
    pub holds: bool,
}

/// Finite-`N` form of `lim E_g ⫼f · T_{p(g)} f̄⫼_k^{2^k} = ⫼f⫼_{k+1}^{2^{k+1}}`
/// (fields) and its bound `≤ [R:J] ⫼f⫼_{k+1}^{2^{k+1}}` (good rings).
/// Inner seminorms use the closed form; the outer average is exact.
pub fn linear_seminorm_identity_check(
    sys: &RotationSystem,
    f: &TrigObservable,
    p: &RingPolynomial,
    k: usize,
    folner: &FolnerSequence,
    n: u32,
    tolerance: f64,
) -> Result<LinearIdentityReport, SeminormError> {
    if k == 0 {
        return Err(SeminormError::Config("k must be at least 1".into()));
    }
    if p.nvars() != 1 || p.ring() != sys.ring() {
        return Err(SeminormError::Config("p must be a polynomial in one variable over the system's ring".into()));
    }
    if p.degree() != Degree::Finite(1) {
        return Err(SeminormError::Config(format!("p must have degree 1, found {}", p.degree())));
    }
    if !p.constant_term().is_zero() {
        return Err(SeminormError::Config("p(0) must be 0".into()));
    }
    require_ergodic(sys, f, k + 1)?;
    let a = p.coefficient(&[1]);
    let bound_factor = if sys.ring().is_field() {
        1
    } else {
        match Ideal::new(a)?.index() {
            IdealIndex::Finite(i) => u64::try_from(i).map_err(|_| SeminormError::Budget("ideal index".into()))?,
            IdealIndex::Infinite => unreachable!("nonzero ideals of good rings have finite index"),
        }
    };
    let set = folner.set(n)?;
    let fbar = f.conj();
    let inner: Vec<f64> = set
        .iter()
        .map(|g| {
            let pg = p.evaluate(std::slice::from_ref(g))?;
            let h = f.multiply(&sys.act(&pg, &fbar)?, DEFAULT_SUPPORT_BUDGET)?;
            closed_form_power(&h, k)
        })
        .collect::<Result<_, SeminormError>>()?;
    let lhs = mean_real(&inner, |v| *v);
    let rhs = closed_form_power(f, k + 1)?;
    let gap = (lhs - rhs).abs();
    let holds = if sys.ring().is_field() { gap < tolerance } else { lhs <= bound_factor as f64 * rhs + tolerance };
    Ok(LinearIdentityReport { lhs, rhs, gap, bound_factor, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;

    fn zsys(alpha: &str) -> RotationSystem {
        RotationSystem::parse(Ring::Integers, &[vec![alpha]]).unwrap()
    }

    fn zbox() -> FolnerSequence {
        FolnerSequence::centered_box(Ring::Integers).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cube_parity() {
        let all = CubeIndex::all(3);
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|e| e.conjugates()).count(), 4);
        assert_eq!(all[5].bits(), &[true, false, true]);
        assert_eq!(all[5].weight(), 2);
    }

    #[test]
    fn delta_examples() {
        let sys = zsys("sqrt(2)");
        let f = TrigObservable::exponential(vec![1]);
        let n = RingElement::from_int(Ring::Integers, 5);
        let d = delta(&sys, &f, &n).unwrap();
        assert_eq!(d.support_size(), 1);
        let c0 = d.coefficient(&[0]);
        assert!((c0 - sys.character(&[1]).eval(&n).conj()).norm() < 1e-15);
        let k = TrigObservable::constant(1, c(2.0, 1.0));
        assert_eq!(delta(&sys, &k, &n).unwrap(), TrigObservable::constant(1, c(5.0, 0.0)));
        let g = TrigObservable::parse("e(1) + 0.5*e(3)", 1).unwrap();
        let zero = RingElement::zero(Ring::Integers);
        assert_eq!(delta(&sys, &g, &zero).unwrap(), g.multiply(&g.conj(), 100).unwrap());
    }

    #[test]
    fn iterated_delta_examples() {
        let sys = RotationSystem::parse(Ring::GaussianIntegers, &[vec!["sqrt(3)", "0.2"]]).unwrap();
        let f = TrigObservable::exponential(vec![1]);
        let ns = [RingElement::gaussian(1, 2), RingElement::gaussian(-3, 1)];
        let d = delta_iterated(&sys, &f, &ns).unwrap();
        assert_eq!(d.support_size(), 1);
        assert!((d.coefficient(&[0]).norm() - 1.0).abs() < 1e-12);
        assert_eq!(delta_iterated(&sys, &f, &ns[..1]).unwrap(), delta(&sys, &f, &ns[0]).unwrap());
        let k = TrigObservable::constant(1, c(0.0, 2.0));
        let d = delta_iterated(&sys, &k, &ns).unwrap();
        assert!((d.coefficient(&[0]) - c(16.0, 0.0)).norm() < 1e-12);
        let g = TrigObservable::parse("e(1) + (0.3-0.2i)*e(-2) + 0.1", 1).unwrap();
        let ns3 = [RingElement::gaussian(1, 0), RingElement::gaussian(0, 1), RingElement::gaussian(2, -1)];
        assert!(delta_iterated(&sys, &g, &ns3).is_ok());
    }

    #[test]
    fn truncated_examples() {
        let sys = zsys("sqrt(2)-1");
        let k = TrigObservable::constant(1, c(0.6, 0.8));
        for s in 1..=3 {
            let e = seminorm_truncated(&sys, &k, s, &[20], &zbox()).unwrap();
            assert!((e.value - 1.0).abs() < 1e-12);
        }
        let f = TrigObservable::exponential(vec![1]);
        assert!(seminorm_truncated(&sys, &f, 1, &[500], &zbox()).unwrap().value < 0.05);
        let two = seminorm_truncated(&sys, &f, 2, &[500], &zbox()).unwrap();
        assert!((two.value - 1.0).abs() < 0.05);
        assert_eq!(two.truncation, vec![500, 500]);
    }

    #[test]
    fn truncated_matches_direct_enumeration() {
        let sys = zsys("0.3");
        let f = TrigObservable::parse("e(1) + 0.5*e(-2) + 0.25", 1).unwrap();
        let n = 3;
        let set = zbox().set(n).unwrap();
        let mut acc = c(0.0, 0.0);
        for a in &set {
            for b in &set {
                acc += delta_iterated(&sys, &f, &[a.clone(), b.clone()]).unwrap().integral();
            }
        }
        acc /= (set.len() * set.len()) as f64;
        let p = truncated_power(&sys, &f, 2, &[n], &zbox()).unwrap();
        assert!((p - acc.re).abs() < 1e-12 && acc.im.abs() < 1e-12);
        let p = truncated_power(&sys, &f, 2, &[n, 5], &zbox()).unwrap();
        let set5 = zbox().set(5).unwrap();
        let mut acc = 0.0;
        for a in &set {
            for b in &set5 {
                acc += delta_iterated(&sys, &f, &[a.clone(), b.clone()]).unwrap().integral().re;
            }
        }
        assert!((p - acc / (set.len() * set5.len()) as f64).abs() < 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let sys = zsys("sqrt(2)");
        let f = TrigObservable::exponential(vec![1]);
        assert_eq!(seminorm_closed_form_rotation(&sys, &f, 2).unwrap().value, 1.0);
        let g = TrigObservable::parse("e(1) + 0.5*e(2)", 1).unwrap();
        let v = seminorm_closed_form_rotation(&sys, &g, 2).unwrap().value;
        assert!((v - 1.0625f64.powf(0.25)).abs() < 1e-15);
        let k = TrigObservable::constant(1, c(-3.0, 0.0));
        assert_eq!(seminorm_closed_form_rotation(&sys, &k, 3).unwrap().value, 3.0);
        assert!(matches!(
            seminorm_closed_form_rotation(&zsys("1/4"), &f, 2),
            Err(SeminormError::NotErgodic(_))
        ));
    }

    #[test]
    fn early_stop_agrees() {
        let sys = zsys("sqrt(2)-1");
        let g = TrigObservable::parse("e(1) + 0.5*e(2)", 1).unwrap();
        let early = seminorm_early_stop(&sys, &g, 3, 300, &zbox()).unwrap();
        let closed = seminorm_closed_form_rotation(&sys, &g, 3).unwrap();
        assert!((early.value - closed.value).abs() < 0.02);
    }

    #[test]
    fn closed_form_is_not_the_diagonal_sum_beyond_s2() {
        // Σ|c|^8 = 1 + 1/256, while the limit also counts off-diagonal cubes.
        let g = TrigObservable::parse("e(1) + 0.5*e(2)", 1).unwrap();
        let p = closed_form_power(&g, 3).unwrap();
        assert!((p - (1.0 + 1.0 / 256.0)).abs() > 0.3);
        let sys = zsys("sqrt(2)-1");
        let t = truncated_power(&sys, &g, 3, &[500], &zbox()).unwrap();
        assert!((p - t).abs() < 0.02, "{p} vs {t}");
        let cube = cube_sum(&g, 2, |l| {
            if l.iter().all(|x| x.iter().all(|v| *v == 0)) { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
        .unwrap();
        assert!((cube.re - closed_form_power(&g, 2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn linear_identity_examples() {
        let q = RotationSystem::rational_identity();
        let f = TrigObservable::exponential(vec![1]);
        let p = RingPolynomial::variable(Ring::Rationals, 1, 0);
        let r = linear_seminorm_identity_check(&q, &f, &p, 1, &FolnerSequence::rational_ladder(), 5, 0.05).unwrap();
        assert!(r.holds && r.gap < 0.05 && r.bound_factor == 1);
        let z = zsys("sqrt(2)-1");
        let g = TrigObservable::parse("e(1) + 0.5*e(2)", 1).unwrap();
        let p2 = crate::polynomials::parse_polynomial(Ring::Integers, "2*n", &["n"]).unwrap();
        let r = linear_seminorm_identity_check(&z, &g, &p2, 1, &zbox(), 200, 1e-9).unwrap();
        assert_eq!(r.bound_factor, 2);
        assert!(r.holds);
        let k = TrigObservable::constant(1, c(0.0, 2.0));
        let r = linear_seminorm_identity_check(&z, &k, &p2, 1, &zbox(), 10, 1e-12).unwrap();
        assert!((r.lhs - 16.0).abs() < 1e-12 && (r.rhs - 16.0).abs() < 1e-12);
        let bad = crate::polynomials::parse_polynomial(Ring::Integers, "2*n+1", &["n"]).unwrap();
        assert!(linear_seminorm_identity_check(&z, &g, &bad, 1, &zbox(), 10, 0.05).is_err());
    }
}
