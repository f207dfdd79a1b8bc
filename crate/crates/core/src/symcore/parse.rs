//! Parser for the polynomial strings used in reports and algebra files.
//!
//! Grammar: sums and differences of products of factors; a factor is a rational literal
//! (`3`, `7/2` when written as a quotient of integers), a registered symbol, or a parenthesized
//! expression, optionally raised to an integer power with `^` (negative powers allowed for
//! single-term bases). Juxtaposition is not multiplication; use `*`.

use num_bigint::BigInt;

use super::poly::{int, MultiPoly};
use super::symbol::Symbol;
use super::{Rational, SymError};

pub fn parse_poly(input: &str) -> Result<MultiPoly, SymError> {
    let mut p = Parser {
        chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let out = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> SymError {
        SymError::Parse(format!("{} at offset {}", msg, self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, SymError> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc += &self.term()?;
            } else if self.eat('-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, SymError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                acc = match d.as_constant() {
                    Some(c) if c != int(0) => acc.scale(&c.recip()),
                    Some(_) => return Err(SymError::DivisionByZero),
                    None => acc.div_monomial(&d)?,
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly, SymError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent out of range"))?;
            if neg {
                let inv = base.inverse_monomial().ok_or(SymError::NotAUnit)?;
                Ok(inv.pow(e))
            } else {
                Ok(base.pow(e))
            }
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt, SymError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn atom(&mut self) -> Result<MultiPoly, SymError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some('.') || self.peek() == Some('e') {
                    return Err(self.err("floating-point literals are not accepted"));
                }
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                let sym: Symbol = name
                    .parse()
                    .map_err(|_| SymError::Parse(format!("unknown symbol `{}`", name)))?;
                Ok(MultiPoly::var(sym))
            }
            _ => Err(self.err("unexpected character")),
        }
    }
}

/// Parses `"7/2"`, `"-3"`; rejects decimal notation.
pub fn parse_rational(s: &str) -> Result<Rational, SymError> {
    let s = s.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(SymError::Parse(format!(
            "`{}` looks like a float; write it as an exact fraction such as 1/2",
            s
        )));
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| SymError::Parse(format!("bad rational `{}`", s)))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| SymError::Parse(format!("bad rational `{}`", s)))?;
    if d == BigInt::from(0) {
        return Err(SymError::DivisionByZero);
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::poly::rat;
    use Symbol::*;

    #[test]
    fn parses_what_display_prints() {
        let p = parse_poly("-3/2*E^2*hbar^2*alpha^-1 + 7 - x").unwrap();
        let q = parse_poly(&p.to_string()).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.coeff(E, 2).coeff(Alpha, -1).coeff(Hbar, 2).as_constant(), Some(rat(-3, 2)));
    }

    #[test]
    fn parentheses_and_powers() {
        let p = parse_poly("(x + 1)^2").unwrap();
        assert_eq!(p, parse_poly("x^2 + 2*x + 1").unwrap());
    }

    #[test]
    fn rejects_floats_and_unknown_symbols() {
        assert!(parse_poly("1.5*x").is_err());
        assert!(parse_poly("zeta").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
    }
}
