//! Dense univariate polynomials with rational coefficients, for operators
//! whose parameters are already numbers.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly { c: Vec::new() }
    }

    pub fn constant(r: Rational) -> QPoly {
        QPoly::from_coeffs(vec![r])
    }

    /// `r x^k`
    pub fn monomial(r: Rational, k: usize) -> QPoly {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = r;
        QPoly::from_coeffs(c)
    }

    pub fn x() -> QPoly {
        QPoly::monomial(Rational::one(), 1)
    }

    /// Coefficients from the constant term up.
    pub fn from_coeffs(mut c: Vec<Rational>) -> QPoly {
        while c.last().map(Zero::is_zero).unwrap_or(false) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.c.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.c.last()
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::from_coeffs((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, r: &Rational) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|a| a * r).collect())
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    /// Quotient and remainder; `None` for a zero divisor.
    pub fn divrem(&self, d: &QPoly) -> Option<(QPoly, QPoly)> {
        let dl = d.lead()?.clone();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Some((QPoly::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &dl;
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &f * b;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        Some((QPoly::from_coeffs(q), QPoly::from_coeffs(r)))
    }

    pub fn exact_div(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// `p(c x)`
    pub fn scale_arg(&self, c: &Rational) -> QPoly {
        let mut f = Rational::one();
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            out.push(a * &f);
            f *= c;
        }
        QPoly::from_coeffs(out)
    }

    /// `p(x + h)`
    pub fn shift_arg(&self, h: &Rational) -> QPoly {
        let lin = QPoly::from_coeffs(vec![h.clone(), Rational::one()]);
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(a.clone()));
        }
        acc
    }

    /// Order of vanishing at `x = 0`.
    pub fn low_order(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    /// Squarefree factors `(f, i)` with `self = lead * prod f^i` (Yun).
    pub fn squarefree(&self) -> Vec<(QPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let b = f.gcd(&df);
        let mut c = f.exact_div(&b).expect("gcd divides");
        let mut d = df.exact_div(&b).expect("gcd divides").sub(&c.derivative());
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            c = c.exact_div(&a).expect("gcd divides");
            d = d.exact_div(&a).expect("gcd divides").sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Rational roots of a polynomial of degree at most two; `None` when a
    /// root is irrational or the degree is higher.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        match self.degree()? {
            0 => Some(Vec::new()),
            1 => Some(vec![-&self.c[0] / &self.c[1]]),
            2 => {
                let (a, b, c) = (&self.c[2], &self.c[1], &self.c[0]);
                let disc = b * b - Rational::from_integer(4.into()) * a * c;
                let r = rational_sqrt(&disc)?;
                let two_a = a * Rational::from_integer(2.into());
                let mut v = vec![(-b - &r) / &two_a, (-b + &r) / &two_a];
                v.sort();
                v.dedup();
                Some(v)
            }
            _ => None,
        }
    }
}

pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&(&n * &n) == r.numer() && &(&d * &d) == r.denom()).then(|| Rational::new(n, d))
}

/// Rational cube root, when there is one.
pub fn rational_cbrt(r: &Rational) -> Option<Rational> {
    let n = r.numer().cbrt();
    let d = r.denom().cbrt();
    (&(&n * &n * &n) == r.numer() && &(&d * &d * &d) == r.denom()).then(|| Rational::new(n, d))
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let c = fmt_rational(&mag);
            let c = if c.contains('/') { format!("({c})") } else { c };
            match k {
                0 => f.write_str(&c)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{c}*")?;
                    }
                    f.write_str("x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symkernel::{rat, ratio};

    fn p(v: &[i64]) -> QPoly {
        QPoly::from_coeffs(v.iter().map(|&n| rat(n)).collect())
    }

    #[test]
    fn squarefree_splits_multiplicities() {
        // x^2 (x - 1)^3 (x + 2)
        let f = p(&[0, 1]).pow(2).mul(&p(&[-1, 1]).pow(3)).mul(&p(&[2, 1]));
        let sf = f.squarefree();
        let back = sf.iter().fold(QPoly::constant(rat(1)), |acc, (g, i)| acc.mul(&g.pow(*i)));
        assert_eq!(back, f.monic());
        let mults: Vec<u32> = sf.iter().map(|(_, i)| *i).collect();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn shift_and_roots() {
        let f = p(&[2, -3, 1]);
        assert_eq!(f.rational_roots(), Some(vec![rat(1), rat(2)]));
        assert_eq!(f.shift_arg(&rat(1)), p(&[0, -1, 1]));
        assert_eq!(p(&[-2, 0, 1]).rational_roots(), None);
        assert_eq!(rational_cbrt(&ratio(-8, 27)), Some(ratio(-2, 3)));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 0, -2]).to_string(), "-2*x^2 + 1");
        assert_eq!(QPoly::from_coeffs(vec![ratio(1, 2), rat(1)]).to_string(), "x + (1/2)");
    }
}
