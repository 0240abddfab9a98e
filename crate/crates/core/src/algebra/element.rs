use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::{display_rational, parse_rational, Rational};
use super::{AlgebraError, Ring};

/// An exact element of one of the supported rings.
///
/// Rationals are kept in lowest terms with a positive denominator by
/// `BigRational`'s normalisation. Mixing rings in arithmetic is a
/// programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElement {
    Int(BigInt),
    /// `re + im·i`
    Gauss(BigInt, BigInt),
    Rat(BigRational),
}

impl RingElement {
    pub fn ring(&self) -> Ring {
        match self {
            RingElement::Int(_) => Ring::Integers,
            RingElement::Gauss(..) => Ring::GaussianIntegers,
            RingElement::Rat(_) => Ring::Rationals,
        }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::from_int(ring, 0)
    }

    pub fn one(ring: Ring) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: Ring, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        match ring {
            Ring::Integers => RingElement::Int(n),
            Ring::GaussianIntegers => RingElement::Gauss(n, BigInt::zero()),
            Ring::Rationals => RingElement::Rat(BigRational::from_integer(n)),
        }
    }

    pub fn gaussian(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        RingElement::Gauss(re.into(), im.into())
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        RingElement::Rat(BigRational::new(num.into(), den.into()))
    }

    /// The Gaussian unit `i`; `None` outside `Z[i]`.
    pub fn imaginary_unit(ring: Ring) -> Option<Self> {
        (ring == Ring::GaussianIntegers).then(|| RingElement::gaussian(0, 1))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Int(n) => n.is_zero(),
            RingElement::Gauss(a, b) => a.is_zero() && b.is_zero(),
            RingElement::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.ring())
    }

    pub fn is_unit(&self) -> bool {
        match self {
            RingElement::Int(n) => n.abs().is_one(),
            RingElement::Gauss(a, b) => (a * a + b * b).is_one(),
            RingElement::Rat(q) => !q.is_zero(),
        }
    }

    /// Coordinates in the additive embedding: `(n)`, `(a, b)` or `(r)`.
    pub fn embed(&self) -> Vec<Rational> {
        match self {
            RingElement::Int(n) => vec![BigRational::from_integer(n.clone())],
            RingElement::Gauss(a, b) => {
                vec![BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone())]
            }
            RingElement::Rat(q) => vec![q.clone()],
        }
    }

    /// Squared absolute value for `Z[i]`, absolute value for `Z`.
    pub fn norm(&self) -> Option<BigInt> {
        match self {
            RingElement::Int(n) => Some(n.abs()),
            RingElement::Gauss(a, b) => Some(a * a + b * b),
            RingElement::Rat(_) => None,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.ring());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient when it exists in the ring.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        assert_same_ring(self, other);
        if other.is_zero() {
            return None;
        }
        match (self, other) {
            (RingElement::Int(a), RingElement::Int(b)) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(RingElement::Int(q))
            }
            (RingElement::Gauss(a, b), RingElement::Gauss(c, d)) => {
                // (a+bi)/(c+di) = ((ac+bd) + (bc-ad)i) / (c²+d²)
                let n = c * c + d * d;
                let re = a * c + b * d;
                let im = b * c - a * d;
                let (qr, rr) = re.div_rem(&n);
                let (qi, ri) = im.div_rem(&n);
                (rr.is_zero() && ri.is_zero()).then_some(RingElement::Gauss(qr, qi))
            }
            (RingElement::Rat(a), RingElement::Rat(b)) => Some(RingElement::Rat(a / b)),
            _ => unreachable!(),
        }
    }

    /// Gaussian-rounded quotient for the Euclidean algorithm on `Z` and `Z[i]`.
    pub(crate) fn euclid_div_rem(&self, other: &Self) -> (Self, Self) {
        match (self, other) {
            (RingElement::Int(a), RingElement::Int(b)) => {
                let (q, r) = a.div_mod_floor(b);
                (RingElement::Int(q), RingElement::Int(r))
            }
            (RingElement::Gauss(a, b), RingElement::Gauss(c, d)) => {
                let n = c * c + d * d;
                let re = a * c + b * d;
                let im = b * c - a * d;
                let round = |x: &BigInt| -> BigInt {
                    let two_n: BigInt = &n * 2;
                    (x * BigInt::from(2) + &n).div_floor(&two_n)
                };
                let q = RingElement::Gauss(round(&re), round(&im));
                let r = self - &(&q * other);
                (q, r)
            }
            _ => panic!("euclidean division only on Z and Z[i]"),
        }
    }

    /// Greatest common divisor up to units (normalised associate).
    pub fn gcd(&self, other: &Self) -> Self {
        assert_same_ring(self, other);
        match self.ring() {
            Ring::Rationals => {
                if self.is_zero() && other.is_zero() {
                    Self::zero(Ring::Rationals)
                } else {
                    Self::one(Ring::Rationals)
                }
            }
            _ => {
                let (mut a, mut b) = (self.clone(), other.clone());
                while !b.is_zero() {
                    let (_, r) = a.euclid_div_rem(&b);
                    a = b;
                    b = r;
                }
                a.normalized_associate()
            }
        }
    }

    /// Canonical associate: positive integers; Gaussian integers with
    /// `re > 0, im >= 0`; rationals unchanged.
    pub fn normalized_associate(&self) -> Self {
        match self {
            RingElement::Int(n) => RingElement::Int(n.abs()),
            RingElement::Gauss(a, b) => {
                if a.is_zero() && b.is_zero() {
                    return self.clone();
                }
                let (mut re, mut im) = (a.clone(), b.clone());
                // rotate by i until re > 0 and im >= 0
                for _ in 0..4 {
                    if re.is_positive() && !im.is_negative() {
                        break;
                    }
                    let nr = -im.clone();
                    im = re;
                    re = nr;
                }
                RingElement::Gauss(re, im)
            }
            RingElement::Rat(_) => self.clone(),
        }
    }

    pub fn to_rational_parts(&self) -> (Rational, Rational) {
        match self {
            RingElement::Int(n) => (BigRational::from_integer(n.clone()), BigRational::zero()),
            RingElement::Gauss(a, b) => {
                (BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()))
            }
            RingElement::Rat(q) => (q.clone(), BigRational::zero()),
        }
    }

    /// Parse a coefficient literal: `3`, `-2`, `i`, `2i`, `1+i`, `(1-2i)`, `3/4`, `0.5`.
    pub fn parse(ring: Ring, text: &str) -> Result<Self, AlgebraError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.trim_start_matches('(').trim_end_matches(')');
        let bad = || AlgebraError::Parse(format!("invalid {ring} literal `{text}`"));
        match ring {
            Ring::Integers => s.parse::<BigInt>().map(RingElement::Int).map_err(|_| bad()),
            Ring::Rationals => parse_rational(s).map(RingElement::Rat).map_err(|_| bad()),
            Ring::GaussianIntegers => {
                if !s.ends_with('i') {
                    return s.parse::<BigInt>().map(|n| RingElement::Gauss(n, BigInt::zero())).map_err(|_| bad());
                }
                let body = &s[..s.len() - 1];
                // split at the last sign that is not the leading one
                let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
                let (re_txt, im_txt) = match split {
                    Some(i) => (&body[..i], &body[i..]),
                    None => ("0", body),
                };
                let im = match im_txt {
                    "" | "+" => BigInt::one(),
                    "-" => -BigInt::one(),
                    t => t.parse::<BigInt>().map_err(|_| bad())?,
                };
                let re = re_txt.parse::<BigInt>().map_err(|_| bad())?;
                Ok(RingElement::Gauss(re, im))
            }
        }
    }
}

fn assert_same_ring(a: &RingElement, b: &RingElement) {
    assert_eq!(a.ring(), b.ring(), "ring mismatch: {a} vs {b}");
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Int(n) => write!(f, "{n}"),
            RingElement::Rat(q) => f.write_str(&display_rational(q)),
            RingElement::Gauss(a, b) => {
                if b.is_zero() {
                    return write!(f, "{a}");
                }
                let im = if b.is_one() {
                    "i".to_string()
                } else if *b == -BigInt::one() {
                    "-i".to_string()
                } else {
                    format!("{b}i")
                };
                if a.is_zero() {
                    f.write_str(&im)
                } else if b.is_negative() {
                    write!(f, "{a}{im}")
                } else {
                    write!(f, "{a}+{im}")
                }
            }
        }
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a + b),
            (RingElement::Gauss(a, b), RingElement::Gauss(c, d)) => RingElement::Gauss(a + c, b + d),
            (RingElement::Rat(a), RingElement::Rat(b)) => RingElement::Rat(a + b),
            _ => panic!("ring mismatch: {self} + {rhs}"),
        }
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a - b),
            (RingElement::Gauss(a, b), RingElement::Gauss(c, d)) => RingElement::Gauss(a - c, b - d),
            (RingElement::Rat(a), RingElement::Rat(b)) => RingElement::Rat(a - b),
            _ => panic!("ring mismatch: {self} - {rhs}"),
        }
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        match (self, rhs) {
            (RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a * b),
            (RingElement::Gauss(a, b), RingElement::Gauss(c, d)) => {
                RingElement::Gauss(a * c - b * d, a * d + b * c)
            }
            (RingElement::Rat(a), RingElement::Rat(b)) => RingElement::Rat(a * b),
            _ => panic!("ring mismatch: {self} * {rhs}"),
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        match self {
            RingElement::Int(a) => RingElement::Int(-a),
            RingElement::Gauss(a, b) => RingElement::Gauss(-a, -b),
            RingElement::Rat(a) => RingElement::Rat(-a),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_square_of_one_plus_i() {
        let z = RingElement::gaussian(1, 1);
        assert_eq!(&z * &z, RingElement::gaussian(0, 2));
    }

    #[test]
    fn rationals_are_reduced() {
        let q = RingElement::rational(6, -4);
        assert_eq!(q, RingElement::rational(-3, 2));
        if let RingElement::Rat(r) = q {
            assert!(r.denom().is_positive());
        }
    }

    #[test]
    fn exact_division() {
        let a = RingElement::gaussian(2, 0);
        let b = RingElement::gaussian(1, 1);
        assert_eq!(a.checked_div(&b), Some(RingElement::gaussian(1, -1)));
        assert_eq!(RingElement::gaussian(1, 0).checked_div(&b), None);
        assert_eq!(RingElement::from_int(Ring::Integers, 7).checked_div(&RingElement::from_int(Ring::Integers, 2)), None);
    }

    #[test]
    fn gaussian_gcd_is_normalised() {
        let a = RingElement::gaussian(4, 2); // 2(2+i)
        let b = RingElement::gaussian(3, 4); // (2+i)^2
        let g = a.gcd(&b);
        assert_eq!(g.norm().unwrap(), BigInt::from(5));
        assert_eq!(g, g.normalized_associate());
    }

    #[test]
    fn parse_and_display_gaussian() {
        for (s, want) in [("1+i", (1, 1)), ("(2-3i)", (2, -3)), ("-i", (0, -1)), ("5", (5, 0)), ("2i", (0, 2))] {
            let z = RingElement::parse(Ring::GaussianIntegers, s).unwrap();
            assert_eq!(z, RingElement::gaussian(want.0, want.1));
            assert_eq!(RingElement::parse(Ring::GaussianIntegers, &z.to_string()).unwrap(), z);
        }
    }

    #[test]
    fn characteristic_zero() {
        for ring in [Ring::Integers, Ring::GaussianIntegers, Ring::Rationals] {
            let one = RingElement::one(ring);
            let mut acc = RingElement::zero(ring);
            for _ in 0..1000 {
                acc = &acc + &one;
                assert!(!acc.is_zero());
            }
        }
    }
}
