//! Multiple ergodic averages `E_{n∈Φ_N} Π_i T_{p_i(n)} f_i` on rotation
//! systems, computed exactly on the Fourier side or by grid sampling, plus
//! mean ergodic and van der Corput checks.

mod vdc;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{char_is_irrational, frac, to_f64, AlgebraError, FolnerSequence, Rational, Ring, RingElement};
use crate::algebra::DEFAULT_PROBE_BUDGET;
use crate::polynomials::{PolyError, PolySystem, RingPolynomial};
use crate::sums::{mean_complex, mean_unit, pairwise_sum_real};
use crate::systems::{Frequency, RotationSystem, SystemError, TrigObservable, DEFAULT_SUPPORT_BUDGET};

pub use vdc::{
    vdc_finite_set_check, vdc_inequality_check, FiniteSetReport, IndexedFamily, PeriodicFamily, VdcReport,
};

/// Largest number of `(grid point, n)` evaluations on the sampled path.
pub const DEFAULT_GRID_BUDGET: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AverageError {
    #[error("{0}")]
    Mismatch(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Config(String),
    #[error("grid of {points} points per axis aliases; at least {required} are needed")]
    UnderResolved { points: usize, required: usize },
    #[error("limsup not finitely checkable: {0}")]
    NotPeriodic(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The average as a function on the torus.
#[derive(Clone, Debug, PartialEq)]
pub enum AverageValue {
    Fourier(TrigObservable),
    /// Values at the nodes `j/points` of the uniform grid, row-major with the
    /// last coordinate fastest.
    Grid { points: usize, values: Vec<Complex64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AverageResult {
    pub n: u32,
    pub size: usize,
    pub value: AverageValue,
    pub l2_distance_to_product: f64,
    pub target: Complex64,
}

impl AverageResult {
    /// `‖value − target‖₂` recomputed from the stored value.
    pub fn recompute_distance(&self) -> f64 {
        match &self.value {
            AverageValue::Fourier(f) => fourier_distance(f, self.target),
            AverageValue::Grid { values, .. } => grid_distance(values, self.target),
        }
    }

    /// The value sampled on a grid; Fourier values are evaluated exactly.
    pub fn sample(&self, points: usize, dim: usize) -> Vec<Complex64> {
        match &self.value {
            AverageValue::Fourier(f) => grid_nodes(points, dim).iter().map(|x| f.eval(x)).collect(),
            AverageValue::Grid { values, .. } => values.clone(),
        }
    }
}

fn fourier_distance(f: &TrigObservable, target: Complex64) -> f64 {
    let zero = vec![0; f.dim()];
    let mut acc = (f.coefficient(&zero) - target).norm_sqr();
    let rest: Vec<f64> = f.coeffs().iter().filter(|(k, _)| **k != zero).map(|(_, c)| c.norm_sqr()).collect();
    acc += pairwise_sum_real(&rest);
    acc.sqrt()
}

fn grid_distance(values: &[Complex64], target: Complex64) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| (v - target).norm_sqr()).collect();
    (pairwise_sum_real(&sq) / values.len() as f64).sqrt()
}

fn grid_nodes(points: usize, dim: usize) -> Vec<Vec<f64>> {
    let total = points.pow(dim as u32);
    (0..total)
        .map(|idx| {
            let mut rest = idx;
            let mut x = vec![0.0; dim];
            for slot in x.iter_mut().rev() {
                *slot = (rest % points) as f64 / points as f64;
                rest /= points;
            }
            x
        })
        .collect()
}

fn validate(
    sys: &RotationSystem,
    polys: &PolySystem,
    obs: &[TrigObservable],
    folner: &FolnerSequence,
) -> Result<(), AverageError> {
    if polys.len() != obs.len() {
        return Err(AverageError::Mismatch(format!("{} polynomials but {} observables", polys.len(), obs.len())));
    }
    if polys.nvars() != 1 {
        return Err(AverageError::Mismatch("averages are taken over polynomials in one variable".into()));
    }
    if polys.ring() != sys.ring() || folner.ring() != sys.ring() {
        return Err(AverageError::Mismatch(format!(
            "system over {}, polynomials over {}, Følner sets over {}",
            sys.ring(),
            polys.ring(),
            folner.ring()
        )));
    }
    if let Some(f) = obs.iter().find(|f| f.dim() != sys.torus_dim()) {
        return Err(SystemError::DimMismatch { expected: sys.torus_dim(), found: f.dim() }.into());
    }
    Ok(())
}

/// `φ(p_i(n))` for every `n` in the set and every polynomial.
fn phis(sys: &RotationSystem, polys: &[RingPolynomial], set: &[RingElement]) -> Vec<Vec<Vec<Rational>>> {
    set.par_iter()
        .map(|x| {
            let at = [x.clone()];
            polys.iter().map(|p| sys.phi(&p.evaluate(&at).expect("validated arity and ring"))).collect()
        })
        .collect()
}

fn product_target(obs: &[TrigObservable]) -> Complex64 {
    obs.iter().map(TrigObservable::integral).product()
}

/// Exact Fourier-side average with the default support budget.
pub fn multi_average_fourier(
    sys: &RotationSystem,
    polys: &PolySystem,
    obs: &[TrigObservable],
    folner: &FolnerSequence,
    n: u32,
) -> Result<AverageResult, AverageError> {
    multi_average_fourier_with_budget(sys, polys, obs, folner, n, DEFAULT_SUPPORT_BUDGET)
}

/// The coefficient at `κ = Σκ_i` collects `Π c_{i,κ_i} · E_n e(Σ κ_i·φ(p_i(n)))`
/// over all frequency selections; each character sum is exact.
pub fn multi_average_fourier_with_budget(
    sys: &RotationSystem,
    polys: &PolySystem,
    obs: &[TrigObservable],
    folner: &FolnerSequence,
    n: u32,
    support_budget: usize,
) -> Result<AverageResult, AverageError> {
    validate(sys, polys, obs, folner)?;
    let selections = obs.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.support_size().max(1)));
    match selections {
        Some(s) if s <= support_budget => {}
        _ => {
            return Err(AverageError::Budget(format!(
                "more than {support_budget} frequency selections; use the grid path"
            )))
        }
    }
    let set = folner.set(n)?;
    let table = phis(sys, polys.polys(), &set);
    let dim = sys.torus_dim();
    let supports: Vec<Vec<(&Frequency, &Complex64)>> = obs.iter().map(|f| f.coeffs().iter().collect()).collect();
    let mut coeffs: BTreeMap<Frequency, Complex64> = BTreeMap::new();
    let mut cursor = vec![0usize; obs.len()];
    if supports.iter().all(|s| !s.is_empty()) {
        loop {
            let picks: Vec<(&Frequency, &Complex64)> =
                cursor.iter().zip(&supports).map(|(&c, s)| s[c]).collect();
            let mut total = vec![0i64; dim];
            let mut weight = Complex64::new(1.0, 0.0);
            for (k, c) in &picks {
                for (t, v) in total.iter_mut().zip(k.iter()) {
                    *t += v;
                }
                weight *= **c;
            }
            let kappas: Vec<&Frequency> = picks.iter().map(|(k, _)| *k).collect();
            let mean = if kappas.iter().all(|k| k.iter().all(|v| *v == 0)) {
                Complex64::new(1.0, 0.0)
            } else {
                mean_unit(&table, |row: &Vec<Vec<Rational>>| selection_phase(&kappas, row))
            };
            *coeffs.entry(total).or_insert(Complex64::new(0.0, 0.0)) += weight * mean;
            if !advance(&mut cursor, &supports) {
                break;
            }
        }
    }
    let value = TrigObservable::from_coeffs(dim, coeffs);
    let target = product_target(obs);
    let distance = fourier_distance(&value, target);
    Ok(AverageResult { n, size: set.len(), value: AverageValue::Fourier(value), l2_distance_to_product: distance, target })
}

fn selection_phase(kappas: &[&Frequency], row: &[Vec<Rational>]) -> Rational {
    let mut t = Rational::from_integer(0.into());
    for (k, phi) in kappas.iter().zip(row) {
        for (kj, pj) in k.iter().zip(phi) {
            if *kj != 0 {
                t += pj * Rational::from_integer((*kj).into());
            }
        }
    }
    t
}

fn advance<T>(cursor: &mut [usize], supports: &[Vec<T>]) -> bool {
    for i in (0..cursor.len()).rev() {
        cursor[i] += 1;
        if cursor[i] < supports[i].len() {
            return true;
        }
        cursor[i] = 0;
    }
    false
}

/// Pointwise average on the uniform grid. The L² distance uses the grid
/// quadrature, which is exact when `points > 2·Σ_i max|κ_i|`.
pub fn multi_average_grid(
    sys: &RotationSystem,
    polys: &PolySystem,
    obs: &[TrigObservable],
    folner: &FolnerSequence,
    n: u32,
    points: usize,
) -> Result<AverageResult, AverageError> {
    validate(sys, polys, obs, folner)?;
    let reach: i64 = obs.iter().map(TrigObservable::max_frequency).sum();
    let required = 2 * reach as usize + 1;
    if points < required {
        return Err(AverageError::UnderResolved { points, required });
    }
    let set = folner.set(n)?;
    let dim = sys.torus_dim();
    let nodes = grid_nodes(points, dim);
    if nodes.len().saturating_mul(set.len()) > DEFAULT_GRID_BUDGET {
        return Err(AverageError::Budget(format!(
            "{} grid nodes times {} Følner elements exceeds {DEFAULT_GRID_BUDGET}",
            nodes.len(),
            set.len()
        )));
    }
    let shifts: Vec<Vec<Vec<f64>>> = phis(sys, polys.polys(), &set)
        .into_iter()
        .map(|row| row.into_iter().map(|phi| phi.iter().map(|t| to_f64(&frac(t))).collect()).collect())
        .collect();
    let values: Vec<Complex64> = nodes
        .par_iter()
        .map(|x| {
            let per_n: Vec<Complex64> = shifts
                .iter()
                .map(|row| {
                    obs.iter()
                        .zip(row)
                        .map(|(f, s)| {
                            let y: Vec<f64> = x.iter().zip(s).map(|(a, b)| a + b).collect();
                            f.eval(&y)
                        })
                        .product()
                })
                .collect();
            crate::sums::pairwise_sum(&per_n) / set.len() as f64
        })
        .collect();
    let target = product_target(obs);
    let distance = grid_distance(&values, target);
    Ok(AverageResult {
        n,
        size: set.len(),
        value: AverageValue::Grid { points, values },
        l2_distance_to_product: distance,
        target,
    })
}

/// The dependent pair `{n, a·n}` with `f = e(a·x)`, `g = e(−x)`: the average
/// is `e((a−1)·x)` for every `N` while the product of integrals is zero.
pub fn counterexample_dependent(
    sys: &RotationSystem,
    a: i64,
    folner: &FolnerSequence,
    n: u32,
) -> Result<AverageResult, AverageError> {
    if a < 2 {
        return Err(AverageError::Config(format!("multiplier a = {a} must be at least 2")));
    }
    if sys.ring() != Ring::Integers || sys.torus_dim() != 1 {
        return Err(AverageError::Config("the counterexample runs on a Z-rotation of the circle".into()));
    }
    let verdict = char_is_irrational(&sys.coordinates()[0], DEFAULT_PROBE_BUDGET)?;
    if !verdict.irrational {
        return Err(AverageError::Config("the rotation number must be irrational".into()));
    }
    let polys = PolySystem::parse(Ring::Integers, 1, &["n", &format!("{a}*n")])?;
    let obs = [TrigObservable::exponential(vec![a]), TrigObservable::exponential(vec![-1])];
    multi_average_fourier(sys, &polys, &obs, folner, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanErgodicReport {
    pub n: u32,
    pub size: usize,
    pub average: TrigObservable,
    pub projection: TrigObservable,
    pub deviation: f64,
}

/// `E_{g∈Φ_N} T_g f` against the projection onto invariant functions, which
/// keeps exactly the frequencies whose character `r ↦ e(κ·φ(r))` is trivial
/// (only `κ = 0` for an ergodic system).
pub fn mean_ergodic_check(
    sys: &RotationSystem,
    f: &TrigObservable,
    folner: &FolnerSequence,
    n: u32,
) -> Result<MeanErgodicReport, AverageError> {
    if f.dim() != sys.torus_dim() {
        return Err(SystemError::DimMismatch { expected: sys.torus_dim(), found: f.dim() }.into());
    }
    if folner.ring() != sys.ring() {
        return Err(AverageError::Mismatch(format!("Følner sets over {} for a system over {}", folner.ring(), sys.ring())));
    }
    let set = folner.set(n)?;
    let mut avg = Vec::new();
    let mut proj = Vec::new();
    for (k, c) in f.coeffs() {
        let chi = sys.character(k);
        if chi.is_trivial() {
            avg.push((k.clone(), *c));
            proj.push((k.clone(), *c));
        } else {
            let m = mean_unit(&set, |r: &RingElement| chi.phase(r));
            avg.push((k.clone(), c * m));
        }
    }
    let average = TrigObservable::from_coeffs(f.dim(), avg);
    let projection = TrigObservable::from_coeffs(f.dim(), proj);
    let deviation = average.sub(&projection)?.l2_norm();
    Ok(MeanErgodicReport { n, size: set.len(), average, projection, deviation })
}

/// Deviations along a schedule of Følner indices.
pub fn mean_ergodic_sweep(
    sys: &RotationSystem,
    f: &TrigObservable,
    folner: &FolnerSequence,
    schedule: &[u32],
) -> Result<Vec<MeanErgodicReport>, AverageError> {
    schedule.iter().map(|&n| mean_ergodic_check(sys, f, folner, n)).collect()
}

/// Average of `Π_i f_i(x + φ(p_i(n)))` at one point, straight from the
/// definition; used to spot-check both engines.
pub fn pointwise_average(
    sys: &RotationSystem,
    polys: &PolySystem,
    obs: &[TrigObservable],
    folner: &FolnerSequence,
    n: u32,
    x: &[f64],
) -> Result<Complex64, AverageError> {
    validate(sys, polys, obs, folner)?;
    let set = folner.set(n)?;
    Ok(mean_complex(&set, |r| {
        polys
            .polys()
            .iter()
            .zip(obs)
            .map(|(p, f)| {
                let shift = sys.phi(&p.evaluate(std::slice::from_ref(r)).expect("validated"));
                let y: Vec<f64> = x.iter().zip(&shift).map(|(a, t)| a + to_f64(&frac(t))).collect();
                f.eval(&y)
            })
            .product()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zsys(alpha: &str) -> RotationSystem {
        RotationSystem::parse(Ring::Integers, &[vec![alpha]]).unwrap()
    }

    fn zbox() -> FolnerSequence {
        FolnerSequence::centered_box(Ring::Integers).unwrap()
    }

    #[test]
    fn unit_observable_averages_to_one() {
        let polys = PolySystem::parse(Ring::Integers, 1, &["n"]).unwrap();
        let one = TrigObservable::constant(1, c(1.0, 0.0));
        let r = multi_average_fourier(&zsys("sqrt(2)"), &polys, &[one], &zbox(), 10).unwrap();
        assert_eq!(r.value, AverageValue::Fourier(TrigObservable::constant(1, c(1.0, 0.0))));
        assert_eq!(r.l2_distance_to_product, 0.0);
    }

    #[test]
    fn single_exponential_is_dirichlet_kernel() {
        let alpha = 0.3f64;
        let polys = PolySystem::parse(Ring::Integers, 1, &["n"]).unwrap();
        let r = multi_average_fourier(&zsys("0.3"), &polys, &[TrigObservable::exponential(vec![1])], &zbox(), 20)
            .unwrap();
        let AverageValue::Fourier(f) = &r.value else { panic!() };
        let x = std::f64::consts::PI * alpha;
        let d = (41.0 * x).sin() / (41.0 * x.sin());
        assert!((f.coefficient(&[1]) - c(d, 0.0)).norm() < 1e-12);
        assert!((r.l2_distance_to_product - d.abs()).abs() < 1e-12);
    }

    #[test]
    fn grid_matches_fourier() {
        let sys = zsys("sqrt(2)-1");
        let polys = PolySystem::parse(Ring::Integers, 1, &["n", "n^2"]).unwrap();
        let obs = [
            TrigObservable::parse("e(1) + 0.5*e(-2)", 1).unwrap(),
            TrigObservable::parse("(0+1i)*e(1) + 0.25", 1).unwrap(),
        ];
        let four = multi_average_fourier(&sys, &polys, &obs, &zbox(), 30).unwrap();
        let grid = multi_average_grid(&sys, &polys, &obs, &zbox(), 30, 7).unwrap();
        assert!((four.l2_distance_to_product - grid.l2_distance_to_product).abs() < 1e-9);
        for (a, b) in four.sample(7, 1).iter().zip(grid.sample(7, 1)) {
            assert!((a - b).norm() < 1e-9);
        }
        let direct = pointwise_average(&sys, &polys, &obs, &zbox(), 30, &[0.3]).unwrap();
        let AverageValue::Fourier(f) = &four.value else { panic!() };
        assert!((f.eval(&[0.3]) - direct).norm() < 1e-9);
        assert!(matches!(
            multi_average_grid(&sys, &polys, &obs, &zbox(), 30, 6),
            Err(AverageError::UnderResolved { required: 7, .. })
        ));
    }

    #[test]
    fn counterexample_is_exact() {
        let sys = zsys("sqrt(2)");
        for a in [2, 3] {
            for n in [1, 5, 40] {
                let r = counterexample_dependent(&sys, a, &zbox(), n).unwrap();
                assert_eq!(r.l2_distance_to_product, 1.0);
                assert_eq!(r.value, AverageValue::Fourier(TrigObservable::exponential(vec![a - 1])));
            }
        }
        assert!(counterexample_dependent(&sys, 1, &zbox(), 3).is_err());
        assert!(counterexample_dependent(&zsys("1/3"), 2, &zbox(), 3).is_err());
    }

    #[test]
    fn mean_ergodic_examples() {
        let f = TrigObservable::exponential(vec![1]);
        let r = mean_ergodic_check(&zsys("sqrt(2)-1"), &f, &zbox(), 1000).unwrap();
        assert!(r.deviation < 0.01);
        let k = TrigObservable::constant(1, c(2.0, -1.0));
        assert_eq!(mean_ergodic_check(&zsys("sqrt(2)"), &k, &zbox(), 7).unwrap().deviation, 0.0);
        let q = RotationSystem::rational_identity();
        let r = mean_ergodic_check(&q, &f, &FolnerSequence::periodic_ladder(), 3).unwrap();
        assert_eq!(r.deviation, 0.0);
        let r = mean_ergodic_check(&q, &f, &FolnerSequence::rational_ladder(), 5).unwrap();
        assert!(r.deviation < 0.01);
        // A rational rotation keeps the invariant frequencies.
        let g = TrigObservable::parse("e(3) + e(1)", 1).unwrap();
        let r = mean_ergodic_check(&zsys("1/3"), &g, &zbox(), 10).unwrap();
        assert_eq!(r.projection, TrigObservable::exponential(vec![3]));
    }
}
