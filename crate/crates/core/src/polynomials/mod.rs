//! Multivariate polynomials over `Z`, `Z[i]` and `Q`.
//!
//! A polynomial is a sparse map from exponent vectors to nonzero ring
//! coefficients. Variables are positional; names only matter for parsing and
//! display.

mod linalg;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{AlgebraError, Ring, RingElement};

pub use linalg::{is_independent, Independence};
pub use parse::parse_polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("expected {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("empty polynomial system")]
    EmptySystem,
    #[error("polynomials disagree on ring or variable count")]
    Mismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Total degree; the zero polynomial sits below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingPolynomial {
    ring: Ring,
    nvars: usize,
    terms: BTreeMap<Exponent, RingElement>,
}

impl RingPolynomial {
    pub fn zero(ring: Ring, nvars: usize) -> Self {
        Self { ring, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: RingElement, nvars: usize) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn monomial(c: RingElement, exps: Exponent) -> Self {
        let mut p = Self::zero(c.ring(), exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(ring: Ring, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(RingElement::one(ring), e)
    }

    /// Build from `(exponent, coefficient)` pairs, merging repeats and
    /// dropping zeros.
    pub fn from_terms(
        ring: Ring,
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponent, RingElement)>,
    ) -> Self {
        let mut p = Self::zero(ring, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length differs from variable count");
            assert_eq!(c.ring(), ring, "coefficient from another ring");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: RingElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, RingElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| Degree::Finite(e.iter().sum()))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// Degree counting only the variables flagged in `mask`.
    pub fn degree_in(&self, mask: &[bool]) -> Degree {
        self.terms
            .keys()
            .map(|e| Degree::Finite(partial(e, mask)))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    /// Terms whose `mask`-degree equals `deg`.
    pub fn homogeneous_part_in(&self, mask: &[bool], deg: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| partial(e, mask) == deg);
        Self { ring: self.ring, nvars: self.nvars, terms: terms.map(|(e, c)| (e.clone(), c.clone())).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> RingElement {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(|| RingElement::zero(self.ring))
    }

    /// The polynomial with its constant term removed.
    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&vec![0; self.nvars]);
        p
    }

    pub fn coefficient(&self, e: &[u32]) -> RingElement {
        self.terms.get(e).cloned().unwrap_or_else(|| RingElement::zero(self.ring))
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        Self::from_terms(self.ring, self.nvars, self.terms.iter().map(|(e, a)| (e.clone(), a * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(RingElement::one(self.ring), self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact evaluation at a point.
    pub fn evaluate(&self, g: &[RingElement]) -> Result<RingElement, PolyError> {
        if g.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, found: g.len() });
        }
        if g.iter().any(|x| x.ring() != self.ring) {
            return Err(PolyError::Mismatch);
        }
        // Powers are shared across terms, which is the multivariate analogue
        // of Horner's rule for sparse polynomials.
        let mut powers: Vec<Vec<RingElement>> = g.iter().map(|x| vec![RingElement::one(self.ring), x.clone()]).collect();
        let mut acc = RingElement::zero(self.ring);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= k as usize {
                    let next = table.last().expect("nonempty") * &g[i];
                    table.push(next);
                }
                t = &t * &table[k as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Replace variable `i` with `subs[i]`; every substitute must share one
    /// variable count, which becomes the result's.
    pub fn substitute(&self, subs: &[RingPolynomial]) -> Result<Self, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, found: subs.len() });
        }
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        if subs.iter().any(|s| s.nvars != target || s.ring != self.ring) {
            return Err(PolyError::Mismatch);
        }
        let mut cache: Vec<Vec<RingPolynomial>> =
            subs.iter().map(|s| vec![RingPolynomial::constant(RingElement::one(self.ring), target), s.clone()]).collect();
        let mut out = Self::zero(self.ring, target);
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone(), target);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let table = &mut cache[i];
                while table.len() <= k as usize {
                    let next = table.last().expect("nonempty") * &subs[i];
                    table.push(next);
                }
                t = &t * &table[k as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// `n ↦ p(n + h)` for a constant shift.
    pub fn shift(&self, h: &[RingElement]) -> Result<Self, PolyError> {
        if h.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, found: h.len() });
        }
        let subs: Vec<_> = h
            .iter()
            .enumerate()
            .map(|(i, hi)| &Self::variable(self.ring, self.nvars, i) + &Self::constant(hi.clone(), self.nvars))
            .collect();
        self.substitute(&subs)
    }

    /// `Δ_h p(n) = p(n + h) − p(n)`.
    pub fn difference(&self, h: &[RingElement]) -> Result<Self, PolyError> {
        Ok(&self.shift(h)? - self)
    }

    /// Substitute `x_i ↦ x_i + x_{shift[i]}` for every `i` with a target, in a
    /// space of `nvars_out ≥ nvars` variables. Expands binomially instead of
    /// multiplying polynomials.
    pub fn shift_by_variables(&self, shift: &[Option<usize>], nvars_out: usize) -> Self {
        assert_eq!(shift.len(), self.nvars, "one shift entry per variable");
        assert!(nvars_out >= self.nvars);
        let ring = self.ring;
        let binom = binomial_rows(self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0));
        let mut acc: std::collections::HashMap<Exponent, RingElement> = std::collections::HashMap::new();
        for (e, c) in &self.terms {
            let mut base = e.clone();
            base.resize(nvars_out, 0);
            // Expand one shifted variable at a time.
            let mut partial: Vec<(Exponent, RingElement)> = vec![(base, c.clone())];
            for (i, target) in shift.iter().enumerate() {
                let (Some(j), a) = (*target, e[i]) else { continue };
                if a == 0 {
                    continue;
                }
                let mut next = Vec::with_capacity(partial.len() * (a as usize + 1));
                for (pe, pc) in &partial {
                    for k in 0..=a {
                        let mut ne = pe.clone();
                        ne[i] -= k;
                        ne[j] += k;
                        let coeff = &RingElement::from_int(ring, binom[a as usize][k as usize]) * pc;
                        next.push((ne, coeff));
                    }
                }
                partial = next;
            }
            for (pe, pc) in partial {
                match acc.entry(pe) {
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let sum = &*o.get() + &pc;
                        *o.get_mut() = sum;
                    }
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(pc);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { ring, nvars: nvars_out, terms }
    }

    /// Append `extra` unused variables at the end.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e = e.clone();
            e.extend(std::iter::repeat(0).take(extra));
            (e, c.clone())
        });
        Self { ring: self.ring, nvars: self.nvars + extra, terms: terms.collect() }
    }

    /// Render with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // Highest total degree first, then reverse lexicographic exponent.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            let (neg, coeff) = split_sign(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), coeff.as_str()) {
                (true, _) => out.push_str(&coeff),
                (false, "1") => out.push_str(&mono.join("*")),
                (false, _) => {
                    out.push_str(&coeff);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        if nvars == 1 {
            vec!["n".to_string()]
        } else {
            (1..=nvars).map(|i| format!("g{i}")).collect()
        }
    }
}

fn binomial_rows(n: u32) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = vec![vec![1]];
    for a in 1..=n as usize {
        let prev = &rows[a - 1];
        let mut row = vec![1i64; a + 1];
        for k in 1..a {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

fn partial(e: &[u32], mask: &[bool]) -> u32 {
    e.iter().zip(mask).filter(|(_, m)| **m).map(|(k, _)| *k).sum()
}

/// Split a coefficient into a sign and a magnitude string that parses back.
fn split_sign(c: &RingElement) -> (bool, String) {
    match c {
        RingElement::Gauss(re, im) if !im.is_zero() && !re.is_zero() => (false, format!("({c})")),
        _ => {
            let s = c.to_string();
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        }
    }
}

impl fmt::Display for RingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars)))
    }
}

fn check_compatible(a: &RingPolynomial, b: &RingPolynomial) {
    assert!(a.ring == b.ring && a.nvars == b.nvars, "incompatible polynomials");
}

impl<'a> std::ops::Add<&'a RingPolynomial> for &'a RingPolynomial {
    type Output = RingPolynomial;
    fn add(self, rhs: &'a RingPolynomial) -> RingPolynomial {
        check_compatible(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a RingPolynomial> for &'a RingPolynomial {
    type Output = RingPolynomial;
    fn sub(self, rhs: &'a RingPolynomial) -> RingPolynomial {
        check_compatible(self, rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a RingPolynomial> for &'a RingPolynomial {
    type Output = RingPolynomial;
    fn mul(self, rhs: &'a RingPolynomial) -> RingPolynomial {
        check_compatible(self, rhs);
        let mut out = RingPolynomial::zero(self.ring, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &RingPolynomial {
    type Output = RingPolynomial;
    fn neg(self) -> RingPolynomial {
        RingPolynomial {
            ring: self.ring,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// An ordered list of polynomials sharing a ring and variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    polys: Vec<RingPolynomial>,
}

impl PolySystem {
    pub fn new(polys: Vec<RingPolynomial>) -> Result<Self, PolyError> {
        let Some(first) = polys.first() else {
            return Err(PolyError::EmptySystem);
        };
        if polys.iter().any(|p| p.ring != first.ring || p.nvars != first.nvars) {
            return Err(PolyError::Mismatch);
        }
        Ok(Self { polys })
    }

    /// Parse each string with the default variable names for `nvars`.
    pub fn parse(ring: Ring, nvars: usize, texts: &[&str]) -> Result<Self, PolyError> {
        let names = RingPolynomial::default_names(nvars);
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let polys = texts.iter().map(|t| parse_polynomial(ring, t, &names)).collect::<Result<Vec<_>, _>>()?;
        Self::new(polys)
    }

    pub fn polys(&self) -> &[RingPolynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn ring(&self) -> Ring {
        self.polys[0].ring
    }

    pub fn nvars(&self) -> usize {
        self.polys[0].nvars
    }

    pub fn all_nonconstant(&self) -> bool {
        self.polys.iter().all(|p| !p.is_constant())
    }
}

/// All pairwise differences are nonconstant.
pub fn is_essentially_distinct(system: &PolySystem) -> bool {
    let ps = system.polys();
    ps.iter().enumerate().all(|(i, p)| ps[i + 1..].iter().all(|q| !(p - q).is_constant()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> RingElement {
        RingElement::from_int(Ring::Integers, n)
    }

    fn zpoly(s: &str) -> RingPolynomial {
        parse_polynomial(Ring::Integers, s, &["n"]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(zpoly("n^2").evaluate(&[z(3)]).unwrap(), z(9));
        let p = parse_polynomial(Ring::GaussianIntegers, "n^2", &["n"]).unwrap();
        assert_eq!(p.evaluate(&[RingElement::gaussian(1, 1)]).unwrap(), RingElement::gaussian(0, 2));
        assert_eq!(RingPolynomial::zero(Ring::Integers, 1).evaluate(&[z(5)]).unwrap(), z(0));
        assert!(matches!(zpoly("n").evaluate(&[]), Err(PolyError::Arity { expected: 1, found: 0 })));
    }

    #[test]
    fn difference_examples() {
        assert_eq!(zpoly("n^2").difference(&[z(1)]).unwrap(), zpoly("2*n + 1"));
        let d = zpoly("n^3").difference(&[z(1)]).unwrap().difference(&[z(1)]).unwrap();
        assert_eq!(d, zpoly("6*n + 6"));
        assert_eq!(zpoly("5*n").difference(&[z(3)]).unwrap(), zpoly("15"));
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(RingPolynomial::zero(Ring::Integers, 1).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(zpoly("7").degree(), Degree::Finite(0));
        assert_eq!(zpoly("n^3 - n").degree(), Degree::Finite(3));
    }

    #[test]
    fn essential_distinctness() {
        let sys = |v: &[&str]| PolySystem::parse(Ring::Integers, 1, v).unwrap();
        assert!(!is_essentially_distinct(&sys(&["n", "n+1"])));
        assert!(is_essentially_distinct(&sys(&["n", "n^2"])));
        assert!(is_essentially_distinct(&sys(&["n^2+n", "n^2"])));
    }

    #[test]
    fn display_round_trips() {
        for (ring, s) in [
            (Ring::Integers, "3*n^2 - n + 7"),
            (Ring::GaussianIntegers, "(1+i)*n^2 - i*n - 2"),
            (Ring::Rationals, "1/2*n^2 + 0.25*n"),
        ] {
            let p = parse_polynomial(ring, s, &["n"]).unwrap();
            let back = parse_polynomial(ring, &p.to_string(), &["n"]).unwrap();
            assert_eq!(p, back, "{s} -> {p}");
        }
    }

    #[test]
    fn binomial_shift_matches_substitution() {
        let names = ["x", "y", "a", "b"];
        let p = parse_polynomial(Ring::GaussianIntegers, "(2+i)*x^3*y - x*y^2 + 5*x + i", &names[..2]).unwrap();
        let fast = p.shift_by_variables(&[Some(2), Some(3)], 4);
        let subs: Vec<_> = ["x + a", "y + b"]
            .iter()
            .map(|t| parse_polynomial(Ring::GaussianIntegers, t, &names).unwrap())
            .collect();
        assert_eq!(fast, p.substitute(&subs).unwrap());
    }

    #[test]
    fn multivariate_shift() {
        let names = ["g1", "g2"];
        let p = parse_polynomial(Ring::Integers, "g1*g2", &names).unwrap();
        let shifted = p.shift(&[z(1), z(2)]).unwrap();
        assert_eq!(shifted, parse_polynomial(Ring::Integers, "g1*g2 + 2*g1 + g2 + 2", &names).unwrap());
    }
}
