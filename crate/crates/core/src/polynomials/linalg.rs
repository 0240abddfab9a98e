//! Exact linear algebra over the fraction field `Q(i)` for independence tests.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Rational, Ring, RingElement};

use super::{Exponent, PolyError, PolySystem};

/// Elements of `Q(i)`; `Z` and `Q` embed with zero imaginary part.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Qi {
    re: Rational,
    im: Rational,
}

impl Qi {
    fn zero() -> Self {
        Self { re: Rational::zero(), im: Rational::zero() }
    }

    fn from_element(x: &RingElement) -> Self {
        let (re, im) = x.to_rational_parts();
        Self { re, im }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Self) -> Self {
        Self { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn neg(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }

    fn inv(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        Self { re: &self.re / &n, im: -&self.im / &n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Independence {
    pub independent: bool,
    pub rank: usize,
    /// A primitive integral vector `b` with `Σ b_i p_i` constant, when dependent.
    pub witness: Option<Vec<RingElement>>,
}

/// Rank of the non-constant coefficient matrix over the fraction field.
pub fn is_independent(system: &PolySystem) -> Result<Independence, PolyError> {
    if system.is_empty() {
        return Err(PolyError::EmptySystem);
    }
    let ring = system.ring();
    let zero_exp = vec![0; system.nvars()];
    let monomials: BTreeSet<&Exponent> =
        system.polys().iter().flat_map(|p| p.terms().keys()).filter(|e| **e != zero_exp).collect();
    let k = system.len();
    let mut m: Vec<Vec<Qi>> = monomials
        .iter()
        .map(|e| system.polys().iter().map(|p| Qi::from_element(&p.coefficient(e))).collect())
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(r) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, r);
        let inv = m[row][col].inv();
        for c in col..k {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..k {
                    let t = f.mul(&m[row][c]);
                    m[r][c] = m[r][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    if rank == k {
        return Ok(Independence { independent: true, rank, witness: None });
    }
    let free = (0..k).find(|c| !pivots.contains(c)).expect("rank deficit leaves a free column");
    let mut x = vec![Qi::zero(); k];
    x[free] = Qi { re: Rational::one(), im: Rational::zero() };
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][free].neg();
    }
    Ok(Independence { independent: false, rank, witness: Some(primitive(ring, &x)) })
}

/// Scale to coprime ring integers with a normalised first entry.
fn primitive(ring: Ring, x: &[Qi]) -> Vec<RingElement> {
    let lcm = x.iter().flat_map(|q| [q.re.denom(), q.im.denom()]).fold(BigInt::one(), |a, d| a.lcm(d));
    let scaled: Vec<(BigInt, BigInt)> = x
        .iter()
        .map(|q| ((&q.re * &lcm).to_integer(), (&q.im * &lcm).to_integer()))
        .collect();
    match ring {
        Ring::GaussianIntegers => {
            let elems: Vec<RingElement> = scaled.into_iter().map(|(a, b)| RingElement::gaussian(a, b)).collect();
            let g = elems.iter().fold(RingElement::zero(ring), |acc, e| acc.gcd(e));
            let elems: Vec<RingElement> = elems.iter().map(|e| e.checked_div(&g).expect("gcd divides")).collect();
            let lead = elems.iter().find(|e| !e.is_zero()).expect("nonzero witness");
            let unit = lead.normalized_associate().checked_div(lead).expect("associates differ by a unit");
            elems.iter().map(|e| e * &unit).collect()
        }
        _ => {
            let ints: Vec<BigInt> = scaled.into_iter().map(|(a, _)| a).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            let lead_negative = ints.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
            ints.iter()
                .map(|v| {
                    let v = v / &g;
                    let v = if lead_negative { -v } else { v };
                    RingElement::from_int(ring, v)
                })
                .collect()
        }
    }
}
