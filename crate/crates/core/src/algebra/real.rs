//! Exact real numbers used for rotation frequencies.
//!
//! Frequencies are decimal (or fractional) literals, which are exact
//! rationals. Phases are reduced modulo one exactly and only converted to
//! floating point at the final `e(x) = exp(2πix)` evaluation.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

pub type Rational = BigRational;

/// Parse `"0.4142135623"`, `"-3"`, `"1/3"`, `"2.5e-3"` or small expressions
/// such as `"sqrt(2)-1"` and `"(1+sqrt(5))/2"` into an exact rational.
///
/// `sqrt(x)` denotes the exact binary value of the nearest double, so later
/// phase arithmetic stays exact.
pub fn parse_rational(text: &str) -> Result<Rational, AlgebraError> {
    let mut p = RealParser { src: text.as_bytes(), pos: 0, text };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.bad());
    }
    Ok(v)
}

struct RealParser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl RealParser<'_> {
    fn bad(&self) -> AlgebraError {
        AlgebraError::Parse(format!("invalid real literal `{}`", self.text))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Rational, AlgebraError> {
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negative {
            acc = -acc;
        }
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Rational, AlgebraError> {
        let mut acc = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            if op == b'*' {
                acc *= f;
            } else {
                if f.is_zero() {
                    return Err(AlgebraError::Parse(format!("zero denominator in `{}`", self.text)));
                }
                acc /= f;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Rational, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return Err(self.bad());
                }
                self.pos += 4;
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                let radicand = to_f64(&inner);
                if radicand < 0.0 {
                    return Err(AlgebraError::Parse(format!("negative radicand in `{}`", self.text)));
                }
                BigRational::from_float(radicand.sqrt()).ok_or_else(|| self.bad())
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.bad()),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.bad())
        }
    }

    fn number(&mut self) -> Result<Rational, AlgebraError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit() || *c == b'.') {
            self.pos += 1;
        }
        let mantissa = &self.text[start..self.pos];
        let mut exponent = 0i32;
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mut end = self.pos + 1;
            if matches!(self.src.get(end), Some(b'+' | b'-')) {
                end += 1;
            }
            let digits_start = end;
            while self.src.get(end).is_some_and(u8::is_ascii_digit) {
                end += 1;
            }
            if end == digits_start {
                return Err(self.bad());
            }
            exponent = self.text[self.pos + 1..end].parse().map_err(|_| self.bad())?;
            self.pos = end;
        }
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if (int_part.is_empty() && frac_part.is_empty()) || frac_part.contains('.') {
            return Err(self.bad());
        }
        let all = format!("{int_part}{frac_part}");
        let numer: BigInt = all.parse().map_err(|_| self.bad())?;
        let scale = exponent - frac_part.len() as i32;
        let ten = BigInt::from(10);
        Ok(if scale >= 0 {
            BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
        })
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 can fail on huge operands; fall back to a scaled quotient.
        let shift = x.denom().bits().max(x.numer().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `e(x) = exp(2πix)` for an exact phase, reducing modulo one first.
pub fn unit(x: &Rational) -> Complex64 {
    unit_from_frac(&frac(x))
}

/// `e(t)` for `t` already in `[0, 1)`.
pub fn unit_from_frac(t: &Rational) -> Complex64 {
    if t.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    unit_f64(to_f64(t))
}

/// Exact values at quarter turns, `cis(2πt)` otherwise.
pub fn unit_f64(t: f64) -> Complex64 {
    let t = t - t.floor();
    match t {
        x if x == 0.0 => Complex64::new(1.0, 0.0),
        x if x == 0.25 => Complex64::new(0.0, 1.0),
        x if x == 0.5 => Complex64::new(-1.0, 0.0),
        x if x == 0.75 => Complex64::new(0.0, -1.0),
        _ => {
            let (s, c) = (TAU * t).sin_cos();
            Complex64::new(c, s)
        }
    }
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn rational_from_int(n: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(n.into())
}

/// Terminating decimals are printed as decimals; anything else such as `1/3`
/// keeps its fractional form so that configs round-trip.
pub fn display_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        return x.numer().to_string();
    }
    // Terminating decimal iff the reduced denominator is 2^a 5^b.
    let mut d = x.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut a, mut b) = (0usize, 0usize);
    while d.is_multiple_of(&two) {
        d /= &two;
        a += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let places = a.max(b);
    let scaled = x * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = places + 1);
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}
