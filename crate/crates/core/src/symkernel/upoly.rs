//! Dense univariate polynomials whose coefficients are rational functions of
//! the remaining parameters. Division here is over a field, so exactness
//! questions that are awkward for `RatFun` (is this a polynomial in `x`?)
//! become plain remainder checks.

use std::fmt;

use super::mpoly::MPoly;
use super::ratfun::RatFun;
use super::var::Var;
use super::{Rational, SymError};

#[derive(Clone, Debug, Default)]
pub struct UPoly {
    c: Vec<RatFun>,
}

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly { c: Vec::new() }
    }

    pub fn constant(r: RatFun) -> UPoly {
        UPoly::from_coeffs(vec![r])
    }

    pub fn monomial(r: RatFun, k: usize) -> UPoly {
        let mut c = vec![RatFun::zero(); k + 1];
        c[k] = r;
        UPoly::from_coeffs(c)
    }

    /// `a*x + b`
    pub fn linear(a: RatFun, b: RatFun) -> UPoly {
        UPoly::from_coeffs(vec![b, a])
    }

    pub fn from_coeffs(mut c: Vec<RatFun>) -> UPoly {
        while c.last().map(|r| r.is_zero()).unwrap_or(false) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<RatFun> {
        self.c
    }

    pub fn coeff(&self, k: usize) -> RatFun {
        self.c.get(k).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> Option<&RatFun> {
        self.c.last()
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::from_coeffs((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        UPoly::from_coeffs((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            c: self.c.iter().map(|r| r.neg()).collect(),
        }
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![RatFun::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn scale(&self, r: &RatFun) -> UPoly {
        UPoly::from_coeffs(self.c.iter().map(|a| a.mul(r)).collect())
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut out = UPoly::constant(RatFun::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division over the coefficient field.
    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly), SymError> {
        let dd = d.degree().ok_or(SymError::DivisionByZero)?;
        let lead_inv = d.c[dd].inv()?;
        let mut rem = self.c.clone();
        let mut quot = vec![RatFun::zero(); self.c.len().saturating_sub(dd).max(1)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let top = rem[k].clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let f = top.mul(&lead_inv);
            for j in 0..=dd {
                rem[k - dd + j] = rem[k - dd + j].sub(&f.mul(&d.c[j]));
            }
            quot[k - dd] = f;
            rem.pop();
        }
        Ok((UPoly::from_coeffs(quot), UPoly::from_coeffs(rem)))
    }

    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn monic(&self) -> UPoly {
        match self.lead() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// `p(c*x)`
    pub fn scale_arg(&self, c: &RatFun) -> UPoly {
        let mut f = RatFun::one();
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            out.push(a.mul(&f));
            f = f.mul(c);
        }
        UPoly::from_coeffs(out)
    }

    pub fn eval(&self, x: &RatFun) -> RatFun {
        let mut acc = RatFun::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// Read a rational function as a polynomial in `v`.
    pub fn from_ratfun(r: &RatFun, v: Var) -> Result<UPoly, SymError> {
        let num: Vec<RatFun> = r.numer().coeffs_in(v).into_iter().map(RatFun::from_poly).collect();
        let den: Vec<RatFun> = r.denom().coeffs_in(v).into_iter().map(RatFun::from_poly).collect();
        let den = UPoly::from_coeffs(den);
        let num = UPoly::from_coeffs(num);
        if den.degree() == Some(0) {
            let inv = den.c[0].inv()?;
            return Ok(num.scale(&inv));
        }
        num.exact_div(&den)
            .ok_or_else(|| SymError::NotPolynomial(v.name().to_string()))
    }

    pub fn to_ratfun(&self, v: Var) -> RatFun {
        self.eval(&RatFun::from_poly(MPoly::var(v)))
    }

    pub fn map(&self, f: impl Fn(&RatFun) -> Result<RatFun, SymError>) -> Result<UPoly, SymError> {
        Ok(UPoly::from_coeffs(
            self.c.iter().map(f).collect::<Result<Vec<_>, _>>()?,
        ))
    }

    pub fn eval_numeric(
        &self,
        bindings: &std::collections::HashMap<Var, Rational>,
    ) -> Result<Vec<Rational>, SymError> {
        self.c.iter().map(|r| r.eval(bindings)).collect()
    }
}

impl PartialEq for UPoly {
    fn eq(&self, other: &Self) -> bool {
        self.c.len() == other.c.len() && self.c.iter().zip(&other.c).all(|(a, b)| a.ratfun_eq(b))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(k, r)| format!("[{r}]*X^{k}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_readback_through_parameter_denominator() {
        let x = RatFun::var("x");
        let l = RatFun::var("l");
        let m = RatFun::var("m");
        // (x^2 - l^2) / ((x - l) * m) is x/m + l/m
        let r = (&x * &x - &l * &l) / ((&x - &l) * &m);
        let p = UPoly::from_ratfun(&r, Var::new("x")).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeff(1), RatFun::one() / &m);
        assert_eq!(p.coeff(0), &l / &m);
        let bad = RatFun::one() / (&x - &l);
        assert!(UPoly::from_ratfun(&bad, Var::new("x")).is_err());
    }

    #[test]
    fn gcd_finds_shared_linear_factor() {
        let a = RatFun::var("a");
        let f1 = UPoly::linear(RatFun::one(), a.neg());
        let f2 = UPoly::linear(RatFun::one(), RatFun::from_int(2));
        let g = f1.mul(&f2).gcd(&f1.mul(&f1));
        assert_eq!(g, f1);
    }
}
