//! Trigonometric polynomials on the torus `T^m`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::algebra::{to_f64, parse_rational, unit_f64};

use super::SystemError;

pub type Frequency = Vec<i64>;

/// Default cap on the support of a product.
pub const DEFAULT_SUPPORT_BUDGET: usize = 1 << 16;

/// `f(x) = Σ c_κ e(κ·x)` with finitely many nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigObservable {
    dim: usize,
    coeffs: BTreeMap<Frequency, Complex64>,
}

impl TrigObservable {
    pub fn zero(dim: usize) -> Self {
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::from_coeffs(dim, [(vec![0; dim], c)])
    }

    /// The character `e(κ·x)`.
    pub fn exponential(kappa: Frequency) -> Self {
        let dim = kappa.len();
        Self::from_coeffs(dim, [(kappa, Complex64::new(1.0, 0.0))])
    }

    /// Repeated frequencies are summed and exact zeros dropped.
    pub fn from_coeffs(dim: usize, coeffs: impl IntoIterator<Item = (Frequency, Complex64)>) -> Self {
        let mut out = Self::zero(dim);
        for (k, c) in coeffs {
            assert_eq!(k.len(), dim, "frequency of the wrong dimension");
            *out.coeffs.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &BTreeMap<Frequency, Complex64> {
        &self.coeffs
    }

    pub fn coefficient(&self, kappa: &[i64]) -> Complex64 {
        self.coeffs.get(kappa).copied().unwrap_or_default()
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    /// `∫ f dμ = c_0`.
    pub fn integral(&self) -> Complex64 {
        self.coefficient(&vec![0; self.dim])
    }

    /// `‖f‖₂² = Σ |c_κ|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().fold(0.0, |acc, c| acc + c.norm_sqr())
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `‖f‖_∞ ≤ Σ |c_κ|`.
    pub fn sup_bound(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Largest `|κ_j|` over the support.
    pub fn max_frequency(&self) -> i64 {
        self.coeffs.keys().flat_map(|k| k.iter().map(|v| v.abs())).max().unwrap_or(0)
    }

    /// `f̄` has coefficients `conj(c_{−κ})`.
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(k, c)| (k.iter().map(|v| -v).collect(), c.conj())).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_coeffs(self.dim, self.coeffs.iter().map(|(k, c)| (k.clone(), c * s)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SystemError> {
        self.check_dim(other)?;
        Ok(Self::from_coeffs(self.dim, self.coeffs.iter().chain(&other.coeffs).map(|(k, c)| (k.clone(), *c))))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SystemError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `f` with its mean removed.
    pub fn centered(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.remove(&vec![0; self.dim]);
        out
    }

    fn check_dim(&self, other: &Self) -> Result<(), SystemError> {
        if self.dim != other.dim {
            return Err(SystemError::DimMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Pointwise product by convolution of coefficients.
    pub fn multiply(&self, other: &Self, support_budget: usize) -> Result<Self, SystemError> {
        self.check_dim(other)?;
        let bound = self.coeffs.len().saturating_mul(other.coeffs.len());
        if bound > support_budget {
            return Err(SystemError::Budget(format!(
                "product support may reach {bound} frequencies (budget {support_budget}); use the grid path"
            )));
        }
        let mut out: BTreeMap<Frequency, Complex64> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let k: Frequency = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        out.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { dim: self.dim, coeffs: out })
    }

    /// Value at a point of `[0,1)^m`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim);
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let t: f64 = k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum();
                c * unit_f64(t)
            })
            .sum()
    }

    /// `∫|f|²` by the uniform grid with `points` nodes per axis, which is
    /// exact once `points > 2·max_frequency`.
    pub fn grid_l2_norm_sq(&self, points: usize) -> f64 {
        let total = points.pow(self.dim as u32);
        let mut acc = 0.0;
        let mut x = vec![0.0; self.dim];
        for idx in 0..total {
            let mut rest = idx;
            for xj in x.iter_mut() {
                *xj = (rest % points) as f64 / points as f64;
                rest /= points;
            }
            acc += self.eval(&x).norm_sqr();
        }
        acc / total as f64
    }

    /// `"1*e(1) + 0.5*e(2)"`, `"(0.5-2i)*e(1,-1) + 3"`, `"-e(2)"`.
    pub fn parse(text: &str, dim: usize) -> Result<Self, SystemError> {
        ObservableParser { text, pos: 0, dim }.parse()
    }
}

impl fmt::Display for TrigObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let freq: Vec<String> = k.iter().map(i64::to_string).collect();
                format!("({}{:+}i)*e({})", c.re, c.im, freq.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

struct ObservableParser<'a> {
    text: &'a str,
    pos: usize,
    dim: usize,
}

impl ObservableParser<'_> {
    fn err(&self, message: impl Into<String>) -> SystemError {
        SystemError::Parse { pos: self.pos, message: message.into() }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<TrigObservable, SystemError> {
        let mut terms: Vec<(Frequency, Complex64)> = Vec::new();
        let mut sign = if self.eat('-') {
            -1.0
        } else {
            self.eat('+');
            1.0
        };
        loop {
            let (k, c) = self.term()?;
            terms.push((k, c * sign));
            self.skip_ws();
            if self.rest().is_empty() {
                break;
            }
            sign = if self.eat('+') {
                1.0
            } else if self.eat('-') {
                -1.0
            } else {
                return Err(self.err("expected `+` or `-`"));
            };
        }
        Ok(TrigObservable::from_coeffs(self.dim, terms))
    }

    fn term(&mut self) -> Result<(Frequency, Complex64), SystemError> {
        self.skip_ws();
        if self.rest().starts_with("e(") {
            return Ok((self.exponential()?, Complex64::new(1.0, 0.0)));
        }
        let c = self.coefficient()?;
        if self.eat('*') {
            self.skip_ws();
            if !self.rest().starts_with("e(") {
                return Err(self.err("expected `e(...)` after `*`"));
            }
            return Ok((self.exponential()?, c));
        }
        Ok((vec![0; self.dim], c))
    }

    fn exponential(&mut self) -> Result<Frequency, SystemError> {
        self.pos += 2;
        let close = self.rest().find(')').ok_or_else(|| self.err("unclosed `e(`"))?;
        let inner = &self.text[self.pos..self.pos + close];
        let start = self.pos;
        let k: Result<Vec<i64>, _> = inner.split(',').map(|s| s.trim().parse::<i64>()).collect();
        let k = k.map_err(|_| SystemError::Parse { pos: start, message: format!("bad frequency `{inner}`") })?;
        if k.len() != self.dim {
            return Err(SystemError::Parse {
                pos: start,
                message: format!("frequency has {} entries, torus has dimension {}", k.len(), self.dim),
            });
        }
        self.pos += close + 1;
        Ok(k)
    }

    /// A real literal, `i`, or a parenthesised `a+bi`.
    fn coefficient(&mut self) -> Result<Complex64, SystemError> {
        self.skip_ws();
        if self.eat('(') {
            let close = self.rest().find(')').ok_or_else(|| self.err("unclosed `(`"))?;
            let inner = self.text[self.pos..self.pos + close].to_string();
            let start = self.pos;
            let value = parse_complex(&inner)
                .ok_or_else(|| SystemError::Parse { pos: start, message: format!("bad complex `{inner}`") })?;
            self.pos += close + 1;
            return Ok(value);
        }
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '.' || c == '/'))
            .unwrap_or(self.rest().len());
        let lit = &self.rest()[..len];
        if lit.is_empty() {
            return Err(self.err("expected a coefficient"));
        }
        let value = parse_complex(lit).ok_or_else(|| self.err(format!("bad coefficient `{lit}`")))?;
        self.pos += len;
        Ok(value)
    }
}

/// Complex literal from exact real parts, e.g. `0.5`, `-2i`, `1-0.25i`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let real = |t: &str| parse_rational(t).ok().map(|q| to_f64(&q));
    let Some(body) = s.strip_suffix('i') else {
        return real(&s).map(|r| Complex64::new(r, 0.0));
    };
    // Split at the last sign that is not at the start or after an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&j| {
        (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E')
    });
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    Some(Complex64::new(real(re)?, im))
}
