//! Unreduced rational functions over the rationals.
//!
//! No multivariate gcd is ever computed. Construction still performs a few
//! cheap cancellations (common monomial factors, exact division of the
//! numerator by the denominator, shared denominator factors in sums) which
//! keeps elimination intermediates small without changing the value.

use std::collections::HashMap;
use std::fmt;
use std::ops;

use num_traits::{One, Zero};

use super::mpoly::{MPoly, Monomial};
use super::var::Var;
use super::{Rational, SymError};

#[derive(Clone)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFun, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(RatFun::make(num, den))
    }

    fn make(num: MPoly, den: MPoly) -> RatFun {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g), den.div_monomial(&g))
        };
        if let Some(c) = den.as_constant() {
            return RatFun {
                num: num.scale(&(Rational::one() / c)),
                den: MPoly::one(),
            };
        }
        if let Some(q) = num.exact_div(&den) {
            return RatFun {
                num: q,
                den: MPoly::one(),
            };
        }
        let lc = den.leading().unwrap().1.clone();
        if lc.is_one() {
            RatFun { num, den }
        } else {
            let inv = Rational::one() / lc;
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> RatFun {
        RatFun {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn from_rational(c: Rational) -> RatFun {
        RatFun::from_poly(MPoly::constant(c))
    }

    pub fn from_int(n: i64) -> RatFun {
        RatFun::from_poly(MPoly::from_int(n))
    }

    pub fn var(name: &str) -> RatFun {
        RatFun::from_poly(MPoly::var(Var::new(name)))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn variables(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.variables();
        s.extend(self.den.variables());
        s
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFun, SymError> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFun::make(self.num.add(&other.num), self.den.clone());
        }
        let (ma, ra) = split_monomial(&self.den);
        let (mb, rb) = split_monomial(&other.den);
        let lm = ma.lcm(&mb);
        let fa_m = lm.div(&ma).unwrap();
        let fb_m = lm.div(&mb).unwrap();
        // common multiple of the non-monomial parts
        let (lr, fa_r, fb_r) = if ra == rb {
            (ra.clone(), MPoly::one(), MPoly::one())
        } else if let Some(k) = rb.exact_div(&ra) {
            (rb.clone(), k, MPoly::one())
        } else if let Some(k) = ra.exact_div(&rb) {
            (ra.clone(), MPoly::one(), k)
        } else {
            (ra.mul(&rb), rb.clone(), ra.clone())
        };
        let one = Rational::one();
        let na = self.num.mul(&fa_r).mul_monomial(&fa_m, &one);
        let nb = other.num.mul(&fb_r).mul_monomial(&fb_m, &one);
        let den = lr.mul_monomial(&lm, &one);
        RatFun::make(na.add(&nb), den)
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero();
        }
        let mut n1 = self.num.clone();
        let mut d1 = self.den.clone();
        let mut n2 = other.num.clone();
        let mut d2 = other.den.clone();
        if !d2.is_one() {
            if let Some(q) = n1.exact_div(&d2) {
                n1 = q;
                d2 = MPoly::one();
            }
        }
        if !d1.is_one() {
            if let Some(q) = n2.exact_div(&d1) {
                n2 = q;
                d1 = MPoly::one();
            }
        }
        RatFun::make(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun, SymError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        RatFun::make(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Result<RatFun, SymError> {
        if e >= 0 {
            Ok(RatFun::make(self.num.pow(e as u32), self.den.pow(e as u32)))
        } else {
            self.inv()?.pow(-e)
        }
    }

    /// Cross-multiplication equality.
    pub fn ratfun_eq(&self, other: &RatFun) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Simultaneous substitution of parameters by rational functions.
    pub fn substitute(&self, bindings: &HashMap<Var, RatFun>) -> Result<RatFun, SymError> {
        let n = substitute_poly(&self.num, bindings);
        let d = substitute_poly(&self.den, bindings);
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        n.div(&d)
    }

    pub fn substitute_one(&self, v: Var, value: &RatFun) -> Result<RatFun, SymError> {
        let mut b = HashMap::new();
        b.insert(v, value.clone());
        self.substitute(&b)
    }

    /// Limit as `v -> 0`, reading off the lowest-order terms in `v`.
    pub fn limit_at_zero(&self, v: Var) -> Result<RatFun, SymError> {
        let (on, cn) = match self.num.lowest_in(v) {
            None => return Ok(RatFun::zero()),
            Some(x) => x,
        };
        let (od, cd) = self.den.lowest_in(v).expect("nonzero denominator");
        if on > od {
            Ok(RatFun::zero())
        } else if on == od {
            Ok(RatFun::make(cn, cd))
        } else {
            Err(SymError::DivergesAtZero(v.name().to_string()))
        }
    }

    pub fn eval(&self, bindings: &HashMap<Var, Rational>) -> Result<Rational, SymError> {
        let unbound = |p: &MPoly| {
            p.variables()
                .into_iter()
                .find(|v| !bindings.contains_key(v))
                .map(|v| SymError::Unbound(v.name().to_string()))
        };
        let n = match self.num.eval(bindings) {
            Some(n) => n,
            None => return Err(unbound(&self.num).unwrap()),
        };
        let d = match self.den.eval(bindings) {
            Some(d) => d,
            None => return Err(unbound(&self.den).unwrap()),
        };
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(n / d)
    }

    pub fn partial_eval(&self, bindings: &HashMap<Var, Rational>) -> Result<RatFun, SymError> {
        RatFun::new(self.num.partial_eval(bindings), self.den.partial_eval(bindings))
    }

    /// Rescale a variable, `v -> c*v`.
    pub fn scale_var(&self, v: Var, c: &Rational) -> RatFun {
        RatFun::make(self.num.scale_var(v, c), self.den.scale_var(v, c))
    }
}

/// Split `p = m * r` with `m` the monomial content.
fn split_monomial(p: &MPoly) -> (Monomial, MPoly) {
    let m = p.monomial_content();
    if m.is_one() {
        (m, p.clone())
    } else {
        let r = p.div_monomial(&m);
        (m, r)
    }
}

/// Substitute into a polynomial, collecting all binding denominators into one
/// common power product instead of adding term fractions pairwise.
pub fn substitute_poly(p: &MPoly, bindings: &HashMap<Var, RatFun>) -> RatFun {
    let bound: Vec<Var> = p
        .variables()
        .into_iter()
        .filter(|v| bindings.contains_key(v))
        .collect();
    if bound.is_empty() {
        return RatFun::from_poly(p.clone());
    }
    let mut max_e: HashMap<Var, u32> = HashMap::new();
    for &v in &bound {
        max_e.insert(v, p.degree_in(v));
    }
    let mut num_pows: HashMap<Var, Vec<MPoly>> = HashMap::new();
    let mut den_pows: HashMap<Var, Vec<MPoly>> = HashMap::new();
    for &v in &bound {
        let b = &bindings[&v];
        let e = max_e[&v] as usize;
        let mut np = vec![MPoly::one()];
        let mut dp = vec![MPoly::one()];
        for k in 1..=e {
            np.push(np[k - 1].mul(&b.num));
            dp.push(dp[k - 1].mul(&b.den));
        }
        num_pows.insert(v, np);
        den_pows.insert(v, dp);
    }
    let mut total = MPoly::zero();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut factor = MPoly::one();
        let mut seen: Vec<Var> = Vec::new();
        for &(v, e) in m.pairs() {
            if let Some(np) = num_pows.get(&v) {
                let dp = &den_pows[&v];
                let top = max_e[&v];
                factor = factor.mul(&np[e as usize]).mul(&dp[(top - e) as usize]);
                seen.push(v);
            } else {
                rest.push((v, e));
            }
        }
        for &v in &bound {
            if !seen.contains(&v) {
                factor = factor.mul(&den_pows[&v][max_e[&v] as usize]);
            }
        }
        total = total.add(&factor.mul_monomial(&Monomial::from_pairs(rest), c));
    }
    let mut den = MPoly::one();
    for &v in &bound {
        den = den.mul(&den_pows[&v][max_e[&v] as usize]);
    }
    RatFun::make(total, den)
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.ratfun_eq(other)
    }
}

impl From<MPoly> for RatFun {
    fn from(p: MPoly) -> RatFun {
        RatFun::from_poly(p)
    }
}

impl From<Rational> for RatFun {
    fn from(c: Rational) -> RatFun {
        RatFun::from_rational(c)
    }
}

impl From<i64> for RatFun {
    fn from(n: i64) -> RatFun {
        RatFun::from_int(n)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl ops::$tr<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                $body(self, rhs)
            }
        }
        impl ops::$tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                $body(&self, &rhs)
            }
        }
        impl ops::$tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                $body(&self, rhs)
            }
        }
        impl ops::$tr<RatFun> for &RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &RatFun, b: &RatFun| a.add(b));
binop!(Sub, sub, |a: &RatFun, b: &RatFun| a.sub(b));
binop!(Mul, mul, |a: &RatFun, b: &RatFun| a.mul(b));
binop!(Div, div, |a: &RatFun, b: &RatFun| a
    .div(b)
    .expect("division by the zero rational function"));

impl ops::Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(&self)
    }
}

impl ops::Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun::neg(self)
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> RatFun {
        RatFun::var(n)
    }

    #[test]
    fn common_factor_equality() {
        let x = v("x");
        let one = RatFun::one();
        let a = (&x * &x - &one) / (&x - &one);
        assert!(a.ratfun_eq(&(&x + &one)));
        assert!(a.is_polynomial());
    }

    #[test]
    fn mu1_times_denominator() {
        let (l, a1, a2, t, q, k1, m) = (v("l"), v("a1"), v("a2"), v("t"), v("q"), v("k1"), v("m"));
        let mu1 = (&l - &a1 * &t) * (&l - &a2 * &t) / (&q * &k1 * &m);
        let back = &mu1 * &(&q * &k1 * &m);
        assert_eq!(back, (&l - &a1 * &t) * (&l - &a2 * &t));
        assert!(back.is_polynomial());
    }

    #[test]
    fn substitution_root() {
        let (l, a1, t) = (v("l"), v("a1"), v("t"));
        let e = &l - &a1 * &t;
        let r = e.substitute_one(Var::new("l"), &(&a1 * &t)).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn substitution_inverse_variable() {
        let x = v("x");
        let p = &x * &x + RatFun::from_int(3) * &x + RatFun::one();
        let inv = p.substitute_one(Var::new("x"), &(RatFun::one() / &x)).unwrap();
        let cleared = &inv * &(&x * &x);
        assert_eq!(cleared, RatFun::one() + RatFun::from_int(3) * &x + &x * &x);
    }

    #[test]
    fn limits() {
        let (l, k) = (v("l"), v("k"));
        let lv = Var::new("l");
        let a = (&k * &l * &l) / (&l * &l);
        assert_eq!(a.limit_at_zero(lv).unwrap(), k);
        let b = RatFun::new(MPoly::var(lv), MPoly::var(lv).pow(2)).unwrap();
        assert_eq!(b.limit_at_zero(lv), Err(SymError::DivergesAtZero("l".into())));
        let c = (&l + &k) / (RatFun::one() + &l);
        assert_eq!(c.limit_at_zero(lv).unwrap(), k);
    }

    #[test]
    fn scaled_fraction_equality() {
        let (p, q) = (v("p") + RatFun::one(), v("q") - RatFun::from_int(2));
        let seven = RatFun::from_int(7);
        let a = RatFun::new(p.numer().clone(), q.numer().clone()).unwrap();
        let b = RatFun::new(p.numer().mul(seven.numer()), q.numer().mul(seven.numer())).unwrap();
        assert!(a.ratfun_eq(&b));
    }
}
