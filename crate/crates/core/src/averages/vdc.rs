//! Van der Corput inequalities for vector families indexed by `Z`.

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AverageError;
use crate::algebra::{FolnerSequence, Ring, RingElement};

/// A finite window of vectors, extended by zero outside `[offset, offset+len)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexedFamily {
    dim: usize,
    offset: i64,
    values: Vec<Vec<Complex64>>,
}

impl IndexedFamily {
    pub fn new(dim: usize, offset: i64, values: Vec<Vec<Complex64>>) -> Result<Self, AverageError> {
        if values.iter().any(|v| v.len() != dim) {
            return Err(AverageError::Mismatch(format!("every vector must have dimension {dim}")));
        }
        Ok(Self { dim, offset, values })
    }

    /// Entries with independent real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(seed: u64, dim: usize, lo: i64, hi: i64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (lo..=hi)
            .map(|_| (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
            .collect();
        Self { dim, offset: lo, values }
    }

    /// `x_n = e(n·t)·v` on `[lo, hi]`.
    pub fn modulated(v: &[Complex64], t: f64, lo: i64, hi: i64) -> Self {
        let values =
            (lo..=hi).map(|n| v.iter().map(|c| c * crate::algebra::unit_f64(n as f64 * t)).collect()).collect();
        Self { dim: v.len(), offset: lo, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn range(&self) -> (i64, i64) {
        (self.offset, self.offset + self.values.len() as i64 - 1)
    }

    pub fn get(&self, n: i64) -> Option<&[Complex64]> {
        let i = n.checked_sub(self.offset)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i)).map(Vec::as_slice)
    }

    pub fn sup_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| norm_sq(v)).fold(0.0, f64::max)
    }
}

/// A family with `x_{n+p} = x_n`, stored as one period starting at `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicFamily {
    dim: usize,
    period: Vec<Vec<Complex64>>,
}

impl PeriodicFamily {
    pub fn new(dim: usize, period: Vec<Vec<Complex64>>) -> Result<Self, AverageError> {
        if period.is_empty() || period.iter().any(|v| v.len() != dim) {
            return Err(AverageError::Mismatch(format!("a period of nonempty {dim}-vectors is required")));
        }
        Ok(Self { dim, period })
    }

    /// The smallest exact period visible in the window, if it repeats at
    /// least twice. Anything else cannot stand in for a limsup.
    pub fn detect(family: &IndexedFamily) -> Result<Self, AverageError> {
        let len = family.values.len();
        for p in 1..=len / 2 {
            if (p..len).all(|i| family.values[i] == family.values[i - p]) {
                let start = family.offset.rem_euclid(p as i64) as usize;
                // Rotate so that index 0 of the period is x_{kp}.
                let period = (0..p).map(|j| family.values[(j + p - start) % p].clone()).collect();
                return Self::new(family.dim, period);
            }
        }
        Err(AverageError::NotPeriodic(format!(
            "window of length {len} shows no period repeating at least twice"
        )))
    }

    pub fn period(&self) -> usize {
        self.period.len()
    }

    pub fn get(&self, n: i64) -> &[Complex64] {
        &self.period[n.rem_euclid(self.period.len() as i64) as usize]
    }
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn integer_set(seq: &FolnerSequence, n: u32) -> Result<Vec<i64>, AverageError> {
    if seq.ring() != Ring::Integers {
        return Err(AverageError::Config("van der Corput checks index families by Z".into()));
    }
    seq.set(n)?
        .iter()
        .map(|r| match r {
            RingElement::Int(k) => k.to_i64().ok_or_else(|| AverageError::Budget("index exceeds i64".into())),
            _ => unreachable!("ring checked"),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VdcReport {
    pub lhs: f64,
    pub rhs: f64,
    pub remainder: f64,
    /// `rhs + remainder − lhs`.
    pub slack: f64,
    /// Indices needed by the right side that lie outside the stored window
    /// and were read as zero.
    pub outside_indices: usize,
    pub holds: bool,
}

/// `‖E_{n∈Φ_N} x_n‖² ≤ Re E_{h'∈Φ_M} E_{h∈Φ_M−h'} E_{n∈Φ_N+h'} ⟨x_{n+h}, x_n⟩ + R`
/// with `R = sup‖x‖² · E_{m∈Φ_M} |Φ_N Δ (Φ_N+m)| / |Φ_N|`.
pub fn vdc_inequality_check(
    x: &IndexedFamily,
    folner: &FolnerSequence,
    n: u32,
    m: u32,
) -> Result<VdcReport, AverageError> {
    let phi_n = integer_set(folner, n)?;
    let phi_m = integer_set(folner, m)?;
    let zero = vec![Complex64::new(0.0, 0.0); x.dim];
    let at = |k: i64| x.get(k).unwrap_or(&zero);

    let mut mean = vec![Complex64::new(0.0, 0.0); x.dim];
    for &k in &phi_n {
        for (a, b) in mean.iter_mut().zip(at(k)) {
            *a += b;
        }
    }
    let lhs = norm_sq(&mean) / (phi_n.len() * phi_n.len()) as f64;

    let mut rhs = 0.0;
    let mut outside = HashSet::new();
    for &hp in &phi_m {
        let mut over_h = 0.0;
        for &mm in &phi_m {
            let h = mm - hp;
            let mut over_n = 0.0;
            for &k in &phi_n {
                let base = k + hp;
                for idx in [base, base + h] {
                    if x.get(idx).is_none() {
                        outside.insert(idx);
                    }
                }
                over_n += inner(at(base + h), at(base)).re;
            }
            over_h += over_n / phi_n.len() as f64;
        }
        rhs += over_h / phi_m.len() as f64;
    }
    rhs /= phi_m.len() as f64;

    let base: HashSet<i64> = phi_n.iter().copied().collect();
    let mut defect = 0.0;
    for &mm in &phi_m {
        let shifted: HashSet<i64> = phi_n.iter().map(|k| k + mm).collect();
        defect += base.symmetric_difference(&shifted).count() as f64 / phi_n.len() as f64;
    }
    let remainder = x.sup_norm_sq() * defect / phi_m.len() as f64;
    let slack = rhs + remainder - lhs;
    Ok(VdcReport { lhs, rhs, remainder, slack, outside_indices: outside.len(), holds: slack >= -1e-9 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSetReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖E_{g∈Φ_N} x_g‖² ≤ Re E_{(h,h')∈S²} E_{g∈Φ_N} ⟨x_{g+h}, x_{g+h'}⟩` for a
/// periodic family over an interval made of whole periods, where both sides
/// equal their limsups.
pub fn vdc_finite_set_check(
    x: &PeriodicFamily,
    s: &[i64],
    folner: &FolnerSequence,
    n: u32,
) -> Result<FiniteSetReport, AverageError> {
    if s.is_empty() {
        return Err(AverageError::Config("the finite set S must be nonempty".into()));
    }
    let mut phi = integer_set(folner, n)?;
    phi.sort_unstable();
    let interval = phi.windows(2).all(|w| w[1] == w[0] + 1);
    if !interval || phi.len() % x.period() != 0 {
        return Err(AverageError::NotPeriodic(format!(
            "Φ_{n} has {} elements{}, not a union of whole periods of length {}",
            phi.len(),
            if interval { "" } else { " and is not an interval" },
            x.period()
        )));
    }
    let mut mean = vec![Complex64::new(0.0, 0.0); x.dim];
    for &g in &phi {
        for (a, b) in mean.iter_mut().zip(x.get(g)) {
            *a += b;
        }
    }
    let lhs = norm_sq(&mean) / (phi.len() * phi.len()) as f64;
    let mut rhs = 0.0;
    for &h in s {
        for &hp in s {
            let t: f64 = phi.iter().map(|&g| inner(x.get(g + h), x.get(g + hp)).re).sum();
            rhs += t / phi.len() as f64;
        }
    }
    rhs /= (s.len() * s.len()) as f64;
    Ok(FiniteSetReport { lhs, rhs, holds: lhs <= rhs + 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zbox() -> FolnerSequence {
        FolnerSequence::centered_box(Ring::Integers).unwrap()
    }

    fn v(xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|x| Complex64::new(*x, 0.0)).collect()
    }

    #[test]
    fn constant_family_is_tight() {
        let vec = v(&[1.0, -2.0, 0.5]);
        let fam = IndexedFamily::new(3, -40, vec![vec.clone(); 81]).unwrap();
        let r = vdc_inequality_check(&fam, &zbox(), 10, 5).unwrap();
        let norm = 5.25;
        assert!((r.lhs - norm).abs() < 1e-12 && (r.rhs - norm).abs() < 1e-12);
        assert!(r.remainder >= 0.0 && r.holds && r.outside_indices == 0);
    }

    #[test]
    fn modulated_family_has_slack() {
        let fam = IndexedFamily::modulated(&v(&[1.0, 1.0]), 0.3, -60, 60);
        let r = vdc_inequality_check(&fam, &zbox(), 20, 20).unwrap();
        assert!(r.holds && r.slack > 0.0);
    }

    #[test]
    fn random_families_hold() {
        for seed in 0..20 {
            let fam = IndexedFamily::random(seed, 8, -30, 30);
            let r = vdc_inequality_check(&fam, &zbox(), 20, 20).unwrap();
            assert!(r.holds, "seed {seed}: {r:?}");
            assert!(r.outside_indices > 0);
        }
    }

    #[test]
    fn periodic_checks() {
        let cst = PeriodicFamily::new(2, vec![v(&[1.0, 2.0])]).unwrap();
        let r = vdc_finite_set_check(&cst, &[0, 3], &zbox(), 4).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12 && r.holds);
        let two = PeriodicFamily::new(1, vec![v(&[1.0]), v(&[-0.5])]).unwrap();
        // Centered boxes have odd size, so an even period never tiles them.
        assert!(vdc_finite_set_check(&two, &[0, 1], &zbox(), 4).is_err());
        let half = FolnerSequence::half_open_box(Ring::Integers).unwrap();
        let r = vdc_finite_set_check(&two, &[0, 1], &half, 4).unwrap();
        // lhs = |1/4|², rhs = (2·(1+1/4)/2 + 2·(-1/2))/4.
        assert!((r.lhs - 1.0 / 16.0).abs() < 1e-15 && (r.rhs - 1.0 / 16.0).abs() < 1e-15 && r.holds);
        let third: Vec<Vec<Complex64>> = (0..3)
            .map(|k| vec![crate::algebra::unit(&crate::algebra::Rational::new(k.into(), 3.into()))])
            .collect();
        let third = PeriodicFamily::new(1, third).unwrap();
        let r = vdc_finite_set_check(&third, &[0, 1, 2], &half, 3).unwrap();
        assert!(r.lhs < 1e-24 && r.rhs.abs() < 1e-12 && r.holds);
        let window = IndexedFamily::new(1, -4, (-4..8).map(|k| v(&[(k as f64).rem_euclid(3.0)])).collect()).unwrap();
        let det = PeriodicFamily::detect(&window).unwrap();
        assert_eq!(det.period(), 3);
        assert_eq!(det.get(5), &v(&[2.0])[..]);
        assert!(PeriodicFamily::detect(&IndexedFamily::random(1, 2, 0, 20)).is_err());
    }
}
