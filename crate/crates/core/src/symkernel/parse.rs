//! Recursive-descent parser for the ASCII expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' nonneg-integer)?
//! base   := identifier | integer | '(' expr ')' | '-' base
//! ```
//!
//! Note that `-x^2` parses as `(-x)^2` under this grammar; the printer
//! never emits that shape.

use num_bigint::BigInt;
use num_traits::Zero;

use super::ratfun::RatFun;
use super::{Rational, SymError};

struct Parser<'a, F: Fn(&str) -> bool> {
    src: &'a [u8],
    pos: usize,
    allowed: F,
}

impl<'a, F: Fn(&str) -> bool> Parser<'a, F> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: &str) -> Result<T, SymError> {
        Err(SymError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<RatFun, SymError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, SymError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    acc = acc.div(&d).map_err(|_| SymError::Syntax {
                        offset: at,
                        message: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun, SymError> {
        let b = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected a nonnegative integer exponent");
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = match text.parse() {
                Ok(e) => e,
                Err(_) => {
                    self.pos = start;
                    return self.err("exponent too large");
                }
            };
            return b.pow(e as i32);
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<RatFun, SymError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'-') => {
                self.pos += 1;
                Ok(self.base()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = text.parse().unwrap();
                Ok(RatFun::from_rational(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if !(self.allowed)(name) {
                    return Err(SymError::UnknownParameter(name.to_string()));
                }
                Ok(RatFun::var(name))
            }
            Some(_) => self.err("unexpected character"),
        }
    }
}

fn run<F: Fn(&str) -> bool>(text: &str, allowed: F) -> Result<RatFun, SymError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        allowed,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse against an explicit parameter universe.
pub fn parse_expr(text: &str, universe: &[&str]) -> Result<RatFun, SymError> {
    run(text, |n| universe.contains(&n))
}

/// Parse accepting any identifier.
pub fn parse_expr_free(text: &str) -> Result<RatFun, SymError> {
    run(text, |_| true)
}

/// Exact rational from "p/q", an integer, or a finite decimal such as
/// "-1.25" or "3e-2".
pub fn parse_rational(text: &str) -> Result<Rational, SymError> {
    let bad = || SymError::Syntax {
        offset: 0,
        message: format!("not an exact rational: '{text}'"),
    };
    let t = text.trim();
    if let Some((a, b)) = t.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if scale >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial() {
        let r = parse_expr("q^2*k1", &["q", "k1"]).unwrap();
        assert_eq!(r.to_string(), "k1*q^2");
    }

    #[test]
    fn rational_sum() {
        let r = parse_expr_free("1/2 + 1/3").unwrap();
        assert_eq!(r.as_constant().unwrap(), Rational::new(5.into(), 6.into()));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_expr_free("a + * b") {
            Err(SymError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_expr("a + zz", &["a"]),
            Err(SymError::UnknownParameter("zz".into()))
        );
        assert!(parse_expr_free("x^-1").is_err());
        assert!(parse_expr_free("(a").is_err());
    }

    #[test]
    fn unary_minus_binds_to_base() {
        let r = parse_expr_free("-x^2").unwrap();
        assert_eq!(r.to_string(), "x^2");
        let s = parse_expr_free("2*-x").unwrap();
        assert_eq!(s.to_string(), "-2*x");
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-3/9").unwrap(), Rational::new((-1).into(), 3.into()));
        assert_eq!(parse_rational("2e-1").unwrap(), Rational::new(1.into(), 5.into()));
        assert_eq!(parse_rational("7").unwrap(), Rational::from_integer(7.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
