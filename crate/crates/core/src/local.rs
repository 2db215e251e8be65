//! Local analysis at `x = 0` and `x = infinity`: characteristic polynomials
//! in `s = q^rho`, series solutions by recurrence, and residuals.
//!
//! Exponents are carried as `s` only. Series are computed either in exact
//! rationals or in `Complex64`, through the [`Scalar`] trait.

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::qdiff::{QDiffEq, Shift};
use crate::symkernel::{RatFun, Rational, SymError, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalError {
    #[error("the extreme coefficients at {0:?} all vanish")]
    DegenerateEquation(Location),
    #[error("resonance: the recurrence denominator vanishes at order {0}")]
    Resonance(usize),
    #[error("parameter '{0}' is unbound")]
    UnboundParameter(String),
    #[error("no characteristic root with index {index} ({available} nonzero roots)")]
    NoRoot { index: usize, available: usize },
    #[error("the characteristic roots are not rational; use float mode")]
    IrrationalRoot,
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Zero,
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    RegularLike,
    IrregularLike,
}

/// Numbers a series can be computed in.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Treated as zero relative to `scale` (exactly zero for rationals).
    fn negligible(&self, scale: f64) -> bool;
    fn sqrt(&self) -> Option<Self>;
    fn magnitude(&self) -> f64;
    /// Sort key for listing roots.
    fn order_key(&self) -> (f64, f64);

    fn is_zero_exact(&self) -> bool {
        *self == Self::zero()
    }

    fn powi(&self, e: i64) -> Self {
        let mut out = Self::one();
        let base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        for _ in 0..e.unsigned_abs() {
            out = out * base.clone();
        }
        out
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn order_key(&self) -> (f64, f64) {
        (self.to_f64().unwrap_or(0.0), 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE)
    }

    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn order_key(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// Characteristic data `c2 s^2 + c1 s + c0 = 0` at one end.
#[derive(Clone, Debug)]
pub struct CharData {
    pub location: Location,
    /// `[c2, c1, c0]`.
    pub coeffs: [RatFun; 3],
    pub regularity: Regularity,
}

/// Roots that can be written without a square root.
#[derive(Clone, Debug)]
pub enum CharRoots {
    None,
    One(RatFun),
    Quadratic,
}

impl CharData {
    pub fn polynomial(&self, s: Var) -> RatFun {
        let sv = RatFun::from_poly(crate::symkernel::MPoly::var(s));
        let c2s2 = RatFun::mul(&RatFun::mul(&self.coeffs[0], &sv), &sv);
        let c1s = RatFun::mul(&self.coeffs[1], &sv);
        RatFun::add(&RatFun::add(&c2s2, &c1s), &self.coeffs[2])
    }

    /// Number of nonzero roots, read from the vanishing pattern.
    pub fn root_count(&self) -> usize {
        let [c2, c1, c0] = &self.coeffs;
        match (c2.is_zero(), c0.is_zero()) {
            (false, false) => 2,
            (true, true) => 0,
            _ if c1.is_zero() => 0,
            _ => 1,
        }
    }

    pub fn symbolic_roots(&self) -> Result<CharRoots, LocalError> {
        let [c2, c1, c0] = &self.coeffs;
        Ok(match self.root_count() {
            0 => CharRoots::None,
            2 => CharRoots::Quadratic,
            _ if c2.is_zero() => CharRoots::One(RatFun::div(&RatFun::neg(c0), c1)?),
            _ => CharRoots::One(RatFun::div(&RatFun::neg(c1), c2)?),
        })
    }

    /// Nonzero roots under a full numeric binding, sorted by real part then
    /// imaginary part.
    pub fn numeric_roots<S: Scalar>(
        &self,
        bindings: &HashMap<Var, Rational>,
    ) -> Result<Vec<S>, LocalError> {
        let c: Vec<S> = self
            .coeffs
            .iter()
            .map(|r| eval_scalar(r, bindings))
            .collect::<Result<_, _>>()?;
        let (c2, c1, c0) = (c[0].clone(), c[1].clone(), c[2].clone());
        let scale = c2.magnitude() + c1.magnitude() + c0.magnitude();
        let z2 = c2.negligible(scale);
        let z0 = c0.negligible(scale);
        let mut roots = match (z2, z0) {
            (false, false) => {
                let four = S::from_rational(&Rational::from_integer(4.into()));
                let two = S::one() + S::one();
                let disc = c1.clone() * c1.clone() - four * c2.clone() * c0;
                let r = disc.sqrt().ok_or(LocalError::IrrationalRoot)?;
                vec![
                    (-c1.clone() - r.clone()) / (two.clone() * c2.clone()),
                    (-c1 + r) / (two * c2),
                ]
            }
            _ if c1.negligible(scale) => Vec::new(),
            (true, false) => vec![-c0 / c1],
            (false, true) => vec![-c1 / c2],
            (true, true) => Vec::new(),
        };
        roots.sort_by(|a, b| {
            a.order_key()
                .partial_cmp(&b.order_key())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(roots)
    }
}

pub(crate) fn eval_scalar<S: Scalar>(
    r: &RatFun,
    bindings: &HashMap<Var, Rational>,
) -> Result<S, LocalError> {
    match r.eval(bindings) {
        Ok(v) => Ok(S::from_rational(&v)),
        Err(SymError::Unbound(name)) => Err(LocalError::UnboundParameter(name)),
        Err(e) => Err(e.into()),
    }
}

/// Characteristic polynomial in `s = q^rho`: `P0 s^2 + Z0 s + M0` at zero
/// (from `f = x^rho (c0 + c1 x + ...)`), `M_D s^2 + Z_D s + P_D` at infinity
/// (from `f = x^-rho (c0 + c1/x + ...)`, `D` the top degree).
pub fn char_exponents(eq: &QDiffEq, at: Location) -> Result<CharData, LocalError> {
    let coeffs = match at {
        Location::Zero => [
            eq.coeff(Shift::P, 0),
            eq.coeff(Shift::Z, 0),
            eq.coeff(Shift::M, 0),
        ],
        Location::Infinity => {
            let d = eq.degree();
            [
                eq.coeff(Shift::M, d),
                eq.coeff(Shift::Z, d),
                eq.coeff(Shift::P, d),
            ]
        }
    };
    if coeffs.iter().all(RatFun::is_zero) {
        return Err(LocalError::DegenerateEquation(at));
    }
    let regularity = if !coeffs[0].is_zero() && !coeffs[2].is_zero() {
        Regularity::RegularLike
    } else {
        Regularity::IrregularLike
    };
    Ok(CharData {
        location: at,
        coeffs,
        regularity,
    })
}

/// `x^rho (c0 + c1 x + ... + cN x^N)` at `x = 0`, with `c0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution<S> {
    pub location: Location,
    pub s: S,
    pub q: S,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> SeriesSolution<S> {
    /// The power-series factor `c0 + c1 y + ...` at `y`.
    pub fn eval_series(&self, y: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y.clone() + c.clone();
        }
        acc
    }
}

/// Coefficient values `(P_k, Z_k, M_k)` of a fully bound equation.
pub(crate) struct BoundEq<S> {
    pub p: Vec<S>,
    pub z: Vec<S>,
    pub m: Vec<S>,
    pub q: S,
}

impl<S: Scalar> BoundEq<S> {
    pub fn new(eq: &QDiffEq, bindings: &HashMap<Var, Rational>) -> Result<BoundEq<S>, LocalError> {
        let q = bindings
            .get(&Var::new("q"))
            .ok_or_else(|| LocalError::UnboundParameter("q".into()))?;
        let get = |s: Shift| -> Result<Vec<S>, LocalError> {
            eq.poly(s)
                .coeffs()
                .iter()
                .map(|c| eval_scalar(c, bindings))
                .collect()
        };
        Ok(BoundEq {
            p: get(Shift::P)?,
            z: get(Shift::Z)?,
            m: get(Shift::M)?,
            q: S::from_rational(q),
        })
    }

    fn at(v: &[S], k: usize) -> S {
        v.get(k).cloned().unwrap_or_else(S::zero)
    }

    fn eval_poly(v: &[S], x: &S) -> S {
        let mut acc = S::zero();
        for c in v.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    fn degree(&self) -> usize {
        self.p.len().max(self.z.len()).max(self.m.len()).saturating_sub(1)
    }

    /// Sum of the magnitudes of the three parts of [`Self::weight`].
    fn weight_scale(&self, k: usize, s: &S, n: usize) -> f64 {
        let qn = self.q.powi(n as i64);
        (Self::at(&self.p, k) * s.clone() * qn.clone()).magnitude()
            + Self::at(&self.z, k).magnitude()
            + (Self::at(&self.m, k) / (s.clone() * qn)).magnitude()
    }

    /// Coefficient of `x^(rho+n+k)` produced by `x^(rho+n)`, from degree `k`.
    fn weight(&self, k: usize, s: &S, n: usize) -> S {
        let qn = self.q.powi(n as i64);
        Self::at(&self.p, k) * s.clone() * qn.clone()
            + Self::at(&self.z, k)
            + Self::at(&self.m, k) / (s.clone() * qn)
    }
}

/// Series at zero for the `root_index`-th nonzero root of the zero
/// characteristic polynomial (roots ordered as in
/// [`CharData::numeric_roots`]).
pub fn series_solution<S: Scalar>(
    eq: &QDiffEq,
    bindings: &HashMap<Var, Rational>,
    root_index: usize,
    n: usize,
) -> Result<SeriesSolution<S>, LocalError> {
    let cd = char_exponents(eq, Location::Zero)?;
    let roots = cd.numeric_roots::<S>(bindings)?;
    let s = roots.get(root_index).cloned().ok_or(LocalError::NoRoot {
        index: root_index,
        available: roots.len(),
    })?;
    series_with_root(eq, bindings, s, n)
}

/// Series at zero for a given exponent `s`; `s` need not be a root, in
/// which case the recurrence fails at order 0.
pub fn series_with_root<S: Scalar>(
    eq: &QDiffEq,
    bindings: &HashMap<Var, Rational>,
    s: S,
    n: usize,
) -> Result<SeriesSolution<S>, LocalError> {
    let b = BoundEq::<S>::new(eq, bindings)?;
    let scale = |v: &[S]| v.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    let mag = scale(&b.p).max(scale(&b.z)).max(scale(&b.m)) * (1.0 + s.magnitude() + 1.0 / s.magnitude());
    let lead = b.weight(0, &s, 0);
    if !lead.negligible(mag) {
        return Err(LocalError::Resonance(0));
    }
    let d = b.degree();
    let mut c = vec![S::one()];
    for m in 1..=n {
        let den = b.weight(0, &s, m);
        if den.negligible(b.weight_scale(0, &s, m)) {
            return Err(LocalError::Resonance(m));
        }
        let mut num = S::zero();
        for k in 1..=d.min(m) {
            num = num + b.weight(k, &s, m - k) * c[m - k].clone();
        }
        c.push(-num / den);
    }
    Ok(SeriesSolution {
        location: Location::Zero,
        s,
        q: b.q,
        coeffs: c,
    })
}

/// `P(x) f(qx) + Z(x) f(x) + M(x) f(x/q)` on the truncated series, with the
/// common factor `x^rho` removed.
pub fn residual_value<S: Scalar>(
    eq: &QDiffEq,
    bindings: &HashMap<Var, Rational>,
    sol: &SeriesSolution<S>,
    x: &S,
) -> Result<(S, f64), LocalError> {
    let b = BoundEq::<S>::new(eq, bindings)?;
    let qx = b.q.clone() * x.clone();
    let xq = x.clone() / b.q.clone();
    let terms = [
        BoundEq::eval_poly(&b.p, x) * sol.s.clone() * sol.eval_series(&qx),
        BoundEq::eval_poly(&b.z, x) * sol.eval_series(x),
        BoundEq::eval_poly(&b.m, x) / sol.s.clone() * sol.eval_series(&xq),
    ];
    let scale = terms.iter().map(Scalar::magnitude).sum();
    let total = terms.into_iter().fold(S::zero(), |a, t| a + t);
    Ok((total, scale))
}

/// Absolute residual of the truncated series at `x`.
pub fn residual<S: Scalar>(
    eq: &QDiffEq,
    bindings: &HashMap<Var, Rational>,
    sol: &SeriesSolution<S>,
    x: &S,
) -> Result<f64, LocalError> {
    Ok(residual_value(eq, bindings, sol, x)?.0.magnitude())
}

/// Residual divided by the sum of the magnitudes of the three terms.
pub fn relative_residual<S: Scalar>(
    eq: &QDiffEq,
    bindings: &HashMap<Var, Rational>,
    sol: &SeriesSolution<S>,
    x: &S,
) -> Result<f64, LocalError> {
    let (v, scale) = residual_value(eq, bindings, sol, x)?;
    Ok(if scale == 0.0 { 0.0 } else { v.magnitude() / scale })
}
