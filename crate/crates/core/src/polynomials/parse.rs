//! Surface syntax such as `3*n^2 + (1+i)*n` or `g1*g2 - 1/2*g1`.
//!
//! Grammar: sums of products of powers of atoms; atoms are numbers, the
//! imaginary unit `i` (on `Z[i]`), variable names and parenthesised
//! expressions. Division is allowed by constants that divide exactly.

use crate::algebra::{parse_rational, Ring, RingElement};

use super::{PolyError, RingPolynomial};

pub fn parse_polynomial(ring: Ring, text: &str, vars: &[&str]) -> Result<RingPolynomial, PolyError> {
    let mut p = Parser { ring, text, bytes: text.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: Ring,
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn constant(&self, c: RingElement) -> RingPolynomial {
        RingPolynomial::constant(c, self.nvars())
    }

    fn expr(&mut self) -> Result<RingPolynomial, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RingPolynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        self.pos = at;
                        return Err(self.error("can only divide by a nonzero constant"));
                    }
                    let d = d.constant_term();
                    let mut terms = Vec::new();
                    for (e, c) in acc.terms() {
                        match c.checked_div(&d) {
                            Some(q) => terms.push((e.clone(), q)),
                            None => {
                                self.pos = at;
                                return Err(self.error(format!("{c} is not divisible by {d} in {}", self.ring)));
                            }
                        }
                    }
                    acc = RingPolynomial::from_terms(self.ring, self.nvars(), terms);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RingPolynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let k: u32 = self.text[start..self.pos].parse().map_err(|_| {
                PolyError::Parse { pos: start, message: "exponent too large".into() }
            })?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RingPolynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || matches!(self.bytes[self.pos], b'_' | b'\''))
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(RingPolynomial::variable(self.ring, self.nvars(), i));
                }
                if name == "i" {
                    return match RingElement::imaginary_unit(self.ring) {
                        Some(u) => Ok(self.constant(u)),
                        None => Err(PolyError::Parse {
                            pos: start,
                            message: format!("`i` is not an element of {}", self.ring),
                        }),
                    };
                }
                Err(PolyError::Parse { pos: start, message: format!("unknown variable `{name}`") })
            }
            Some(_) => Err(self.error("expected a number, variable or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<RingPolynomial, PolyError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && (self.bytes[self.pos].is_ascii_digit() || self.bytes[self.pos] == b'.') {
            self.pos += 1;
        }
        let literal = &self.text[start..self.pos];
        let value = parse_rational(literal)
            .map_err(|_| PolyError::Parse { pos: start, message: format!("bad number `{literal}`") })?;
        let elem = match self.ring {
            Ring::Rationals => RingElement::Rat(value),
            _ if value.is_integer() => RingElement::from_int(self.ring, value.to_integer()),
            _ => {
                return Err(PolyError::Parse {
                    pos: start,
                    message: format!("`{literal}` is not an element of {}", self.ring),
                })
            }
        };
        // `2i` is shorthand for `2*i`.
        let glued_i = self.bytes.get(self.pos) == Some(&b'i')
            && !self.bytes.get(self.pos + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
        if glued_i {
            let unit = RingElement::imaginary_unit(self.ring).ok_or_else(|| PolyError::Parse {
                pos: self.pos,
                message: format!("`i` is not an element of {}", self.ring),
            })?;
            self.pos += 1;
            return Ok(self.constant(&elem * &unit));
        }
        Ok(self.constant(elem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_style_input() {
        let p = parse_polynomial(Ring::GaussianIntegers, "3*n^2 + (1+i)*n", &["n"]).unwrap();
        assert_eq!(p.coefficient(&[2]), RingElement::from_int(Ring::GaussianIntegers, 3));
        assert_eq!(p.coefficient(&[1]), RingElement::gaussian(1, 1));
        let q = parse_polynomial(Ring::GaussianIntegers, "2i*n - i", &["n"]).unwrap();
        assert_eq!(q.coefficient(&[1]), RingElement::gaussian(0, 2));
        assert_eq!(q.coefficient(&[0]), RingElement::gaussian(0, -1));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_polynomial(Ring::Integers, "n^2 + m", &["n"]).unwrap_err();
        assert_eq!(err, PolyError::Parse { pos: 6, message: "unknown variable `m`".into() });
        let err = parse_polynomial(Ring::Integers, "n +", &["n"]).unwrap_err();
        assert!(matches!(err, PolyError::Parse { pos: 3, .. }));
        let err = parse_polynomial(Ring::Integers, "i*n", &["n"]).unwrap_err();
        assert!(matches!(err, PolyError::Parse { pos: 0, .. }));
        let err = parse_polynomial(Ring::Integers, "n/2", &["n"]).unwrap_err();
        assert!(matches!(err, PolyError::Parse { pos: 2, .. }));
        let err = parse_polynomial(Ring::Integers, "(n", &["n"]).unwrap_err();
        assert!(matches!(err, PolyError::Parse { pos: 2, .. }));
    }

    #[test]
    fn rational_coefficients() {
        let p = parse_polynomial(Ring::Rationals, "n^2/2 - 0.5*n", &["n"]).unwrap();
        let x = RingElement::rational(3, 1);
        assert_eq!(p.evaluate(&[x]).unwrap(), RingElement::rational(3, 1));
        let q = parse_polynomial(Ring::Integers, "(4*n^2 + 2*n)/2", &["n"]).unwrap();
        assert_eq!(q, parse_polynomial(Ring::Integers, "2*n^2 + n", &["n"]).unwrap());
    }

    #[test]
    fn primed_names() {
        let vars = ["g", "h", "h'"];
        let p = parse_polynomial(Ring::Integers, "g*h' - h", &vars).unwrap();
        assert_eq!(p.nvars(), 3);
        assert_eq!(p.coefficient(&[1, 0, 1]), RingElement::from_int(Ring::Integers, 1));
    }
}
