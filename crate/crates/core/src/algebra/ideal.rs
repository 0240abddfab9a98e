//! Principal ideals of `Z` and `Z[i]` and their coset decompositions.
//!
//! For `Z[i]` the ideal `(a+bi)` is the lattice spanned by `(a, b)` and
//! `(-b, a)`. Its Hermite form `{(h, 0), (f, g)}` with `g = gcd(a, b)` and
//! `h = (a²+b²)/g` gives canonical representatives `p + qi`, `0 ≤ p < h`,
//! `0 ≤ q < g`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{AlgebraError, Ring, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for IdealIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealIndex::Finite(n) => write!(f, "{n}"),
            IdealIndex::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    generator: RingElement,
    form: Form,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Form {
    Zero,
    Integer { modulus: BigInt },
    Gaussian { h: BigInt, f: BigInt, g: BigInt },
}

impl Ideal {
    /// The ideal generated by `generator`; the zero ideal is allowed but has
    /// no finite coset structure.
    pub fn new(generator: RingElement) -> Result<Self, AlgebraError> {
        let form = match &generator {
            RingElement::Rat(_) => return Err(AlgebraError::FieldIdeal(Ring::Rationals)),
            g if g.is_zero() => Form::Zero,
            RingElement::Int(n) => Form::Integer { modulus: n.abs() },
            RingElement::Gauss(a, b) => {
                let ext = a.extended_gcd(b);
                let g = ext.gcd.abs();
                let (s, t) = if ext.gcd.is_negative() { (-ext.x, -ext.y) } else { (ext.x, ext.y) };
                let norm = a * a + b * b;
                let h = &norm / &g;
                // a·s + b·t = g, so t·(a, b) + s·(-b, a) has imaginary part g.
                let re = &t * a - &s * b;
                let f = re.mod_floor(&h);
                Form::Gaussian { h, f, g }
            }
        };
        Ok(Self { generator, form })
    }

    pub fn ring(&self) -> Ring {
        self.generator.ring()
    }

    pub fn generator(&self) -> &RingElement {
        &self.generator
    }

    pub fn index(&self) -> IdealIndex {
        match &self.form {
            Form::Zero => IdealIndex::Infinite,
            Form::Integer { modulus } => IdealIndex::Finite(modulus.clone()),
            Form::Gaussian { h, g, .. } => IdealIndex::Finite(h * g),
        }
    }

    /// Canonical representative of `x + J`.
    pub fn residue(&self, x: &RingElement) -> Result<RingElement, AlgebraError> {
        if x.ring() != self.ring() {
            return Err(AlgebraError::RingMismatch { expected: self.ring(), found: x.ring() });
        }
        match (&self.form, x) {
            (Form::Zero, _) => Err(AlgebraError::ZeroIdeal),
            (Form::Integer { modulus }, RingElement::Int(n)) => Ok(RingElement::Int(n.mod_floor(modulus))),
            (Form::Gaussian { h, f, g }, RingElement::Gauss(re, im)) => {
                let (m, q) = im.div_mod_floor(g);
                let p = (re - m * f).mod_floor(h);
                Ok(RingElement::Gauss(p, q))
            }
            _ => unreachable!("ring checked above"),
        }
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        match &self.form {
            Form::Zero => x.is_zero(),
            _ => self.residue(x).map(|r| r.is_zero()).unwrap_or(false),
        }
    }

    pub fn congruent(&self, x: &RingElement, y: &RingElement) -> bool {
        self.contains(&(x - y))
    }

    /// All canonical representatives in increasing order.
    pub fn coset_representatives(&self) -> Result<Vec<RingElement>, AlgebraError> {
        match &self.form {
            Form::Zero => Err(AlgebraError::ZeroIdeal),
            Form::Integer { modulus } => Ok(range(modulus).map(RingElement::Int).collect()),
            Form::Gaussian { h, g, .. } => Ok(range(h)
                .flat_map(|p| range(g).map(move |q| RingElement::Gauss(p.clone(), q)))
                .collect()),
        }
    }
}

fn range(n: &BigInt) -> impl Iterator<Item = BigInt> {
    let n = n.clone();
    let mut k = BigInt::zero();
    std::iter::from_fn(move || {
        if k < n {
            let out = k.clone();
            k += 1;
            Some(out)
        } else {
            None
        }
    })
}

/// A set split by residue modulo a nonzero ideal. Every representative is
/// listed, so parts may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPartition {
    pub parts: Vec<(RingElement, Vec<RingElement>)>,
}

impl CosetPartition {
    pub fn total(&self) -> usize {
        self.parts.iter().map(|(_, p)| p.len()).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.parts.iter().map(|(_, p)| p.len()).collect()
    }

    pub fn nonempty(&self) -> impl Iterator<Item = &(RingElement, Vec<RingElement>)> {
        self.parts.iter().filter(|(_, p)| !p.is_empty())
    }
}

/// Partition `elements` by residue mod `ideal`, preserving input order.
pub fn coset_decompose(elements: &[RingElement], ideal: &Ideal) -> Result<CosetPartition, AlgebraError> {
    let reps = ideal.coset_representatives()?;
    let mut parts: Vec<(RingElement, Vec<RingElement>)> = reps.into_iter().map(|r| (r, Vec::new())).collect();
    for x in elements {
        let r = ideal.residue(x)?;
        let slot = parts.binary_search_by(|(rep, _)| rep.cmp(&r)).expect("residue is a listed representative");
        parts[slot].1.push(x.clone());
    }
    Ok(CosetPartition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        RingElement::from_int(Ring::Integers, n)
    }

    #[test]
    fn indices() {
        assert_eq!(Ideal::new(z(3)).unwrap().index(), IdealIndex::Finite(3.into()));
        assert_eq!(Ideal::new(z(-3)).unwrap().index(), IdealIndex::Finite(3.into()));
        assert_eq!(
            Ideal::new(RingElement::gaussian(1, 1)).unwrap().index(),
            IdealIndex::Finite(2.into())
        );
        assert_eq!(Ideal::new(RingElement::gaussian(0, 0)).unwrap().index(), IdealIndex::Infinite);
        assert_eq!(
            Ideal::new(RingElement::rational(1, 2)).unwrap_err(),
            AlgebraError::FieldIdeal(Ring::Rationals)
        );
    }

    #[test]
    fn parity_split() {
        let set: Vec<_> = (-2..=2).map(z).collect();
        let p = coset_decompose(&set, &Ideal::new(z(2)).unwrap()).unwrap();
        assert_eq!(p.parts[0], (z(0), vec![z(-2), z(0), z(2)]));
        assert_eq!(p.parts[1], (z(1), vec![z(-1), z(1)]));
    }

    #[test]
    fn gaussian_box_mod_one_plus_i() {
        let set: Vec<_> =
            (-1..=1).flat_map(|a| (-1..=1).map(move |b| RingElement::gaussian(a, b))).collect();
        let p = coset_decompose(&set, &Ideal::new(RingElement::gaussian(1, 1)).unwrap()).unwrap();
        let mut sizes = p.sizes();
        sizes.sort();
        assert_eq!(sizes, vec![4, 5]);
    }

    #[test]
    fn unit_ideal_single_part() {
        let set: Vec<_> = (-3..=3).map(z).collect();
        let p = coset_decompose(&set, &Ideal::new(z(-1)).unwrap()).unwrap();
        assert_eq!(p.parts.len(), 1);
        assert_eq!(p.parts[0].1, set);
        let g = Ideal::new(RingElement::gaussian(0, 1)).unwrap();
        assert_eq!(g.coset_representatives().unwrap().len(), 1);
    }

    #[test]
    fn zero_ideal_cannot_decompose() {
        assert_eq!(coset_decompose(&[z(1)], &Ideal::new(z(0)).unwrap()), Err(AlgebraError::ZeroIdeal));
    }

    #[test]
    fn gaussian_representatives_are_complete_and_distinct() {
        for (a, b) in [(1, 1), (2, 0), (3, 1), (2, 2), (1, 2), (-4, 6), (0, 3), (5, -5)] {
            let ideal = Ideal::new(RingElement::gaussian(a, b)).unwrap();
            let reps = ideal.coset_representatives().unwrap();
            assert_eq!(BigInt::from(reps.len() as i64), BigInt::from(a * a + b * b));
            let gen = RingElement::gaussian(a, b);
            for (i, x) in reps.iter().enumerate() {
                for y in &reps[i + 1..] {
                    assert!((x - y).checked_div(&gen).is_none(), "{x} ≡ {y} mod ({gen})");
                }
            }
            for re in -6..=6 {
                for im in -6..=6 {
                    let x = RingElement::gaussian(re, im);
                    let r = ideal.residue(&x).unwrap();
                    assert!(reps.contains(&r));
                    assert!((&x - &r).checked_div(&gen).is_some(), "{x} vs {r} mod ({gen})");
                }
            }
        }
    }
}
