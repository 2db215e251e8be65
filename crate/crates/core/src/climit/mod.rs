//! The `q -> 1` limit: an equation with `q = 1 + e` and the other
//! parameters tied to `e` turns into a second-order ODE, which is then
//! sorted into HE, CHE, BHE, DHE or their reduced forms.
//!
//! Writing `a[side][k]` for the `x^k` coefficient of `g(x/q)`, `g(x)` and
//! `g(qx)`, the limits are
//! `b_k = lim (a+ + a-)/2`, `b_k1 = lim (a+ - a-)/e` and
//! `b_k0 = lim (a- + a0 + a+)/e^2`, and the ODE is
//! `sum_k x^k [b_k x^2 g'' + (b_k1 + b_k) x g' + b_k0 g] = 0`.

pub mod presets;

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::local::{self, LocalError, Location};
use crate::qdiff::{QDiffEq, QDiffError, Shift};
use crate::symkernel::{rational_sqrt, QPoly, RatFun, Rational, SymError, Var};

pub use presets::{preset_family, Preset, PRESETS};

/// Name of the small parameter, `q = 1 + e`.
pub const EPS: &str = "e";

pub fn eps_var() -> Var {
    Var::new(EPS)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClimitError {
    #[error("limit of {what} for x^{k} diverges as e -> 0")]
    LimitDiverges { k: usize, what: &'static str },
    #[error("coefficient depends on parameters other than e: {0}")]
    NotNumeric(String),
    #[error("equation has degree {0}; at most 2 is supported")]
    DegreeTooHigh(usize),
    #[error("every limit coefficient vanishes")]
    AllZero,
    #[error("operator is not of the form x^2 B2 g'' + x B1 g' + B0 g with quadratic B's")]
    NotLimitShape,
    #[error("unclassifiable: {0}")]
    Unclassifiable(String),
    #[error("x = 0 is an irregular singular point")]
    IrregularAtZero,
    #[error("the gauge exponent is irrational; no exact series")]
    IrrationalExponent,
    #[error("{0} is not an exponent at x = 0")]
    NotAnExponent(String),
    #[error("resonance at order {0}")]
    Resonance(usize),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    QDiff(#[from] QDiffError),
    #[error(transparent)]
    Local(#[from] LocalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Zero,
    Plus,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::Minus, Side::Zero, Side::Plus];

    fn index(self) -> usize {
        match self {
            Side::Minus => 0,
            Side::Zero => 1,
            Side::Plus => 2,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Zero => "zero",
            Side::Plus => "plus",
        }
    }
}

/// Nine coefficients, each a rational function of `e` alone.
#[derive(Clone, Debug)]
pub struct EpsilonFamily {
    a: [[RatFun; 3]; 3],
}

impl EpsilonFamily {
    /// `a[side][k]`, sides ordered minus, zero, plus.
    pub fn new(a: [[RatFun; 3]; 3]) -> Result<EpsilonFamily, ClimitError> {
        let e = eps_var();
        for row in &a {
            for c in row {
                if let Some(v) = c.variables().into_iter().find(|v| *v != e) {
                    return Err(ClimitError::NotNumeric(v.name().to_string()));
                }
            }
        }
        Ok(EpsilonFamily { a })
    }

    /// Bind the parameters of a q-difference equation to expressions in
    /// `e` and set `q = 1 + e`.
    pub fn from_equation(
        eq: &QDiffEq,
        bindings: &HashMap<Var, RatFun>,
    ) -> Result<EpsilonFamily, ClimitError> {
        if eq.degree() > 2 {
            return Err(ClimitError::DegreeTooHigh(eq.degree()));
        }
        let mut b = bindings.clone();
        b.insert(Var::new("q"), RatFun::one().add(&RatFun::var(EPS)));
        let get = |s: Shift, k: usize| eq.coeff(s, k).substitute(&b);
        let row = |s: Shift| -> Result<[RatFun; 3], SymError> { Ok([get(s, 0)?, get(s, 1)?, get(s, 2)?]) };
        EpsilonFamily::new([row(Shift::M)?, row(Shift::Z)?, row(Shift::P)?])
    }

    pub fn coeff(&self, side: Side, k: usize) -> &RatFun {
        &self.a[side.index()][k]
    }

    /// The q-difference equation at a numeric `e`, in the variable `x`.
    pub fn at(&self, eps: &Rational) -> Result<QDiffEq, ClimitError> {
        let mut b = HashMap::new();
        b.insert(eps_var(), eps.clone());
        let poly = |side: Side| -> Result<QPoly, SymError> {
            Ok(QPoly::from_coeffs(
                (0..3)
                    .map(|k| self.coeff(side, k).eval(&b))
                    .collect::<Result<Vec<_>, _>>()?,
            ))
        };
        let up = |p: QPoly| {
            crate::symkernel::UPoly::from_coeffs(
                p.coeffs().iter().cloned().map(RatFun::from_rational).collect(),
            )
        };
        Ok(QDiffEq::new(
            Var::new("x"),
            up(poly(Side::Plus)?),
            up(poly(Side::Zero)?),
            up(poly(Side::Minus)?),
        )?)
    }
}

/// `q = 1 + e` as a binding map for the local series engine.
pub fn q_binding(eps: &Rational) -> HashMap<Var, Rational> {
    let mut b = HashMap::new();
    b.insert(Var::new("q"), Rational::one() + eps);
    b
}

/// Limit coefficients, indexed by the power `k` of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitData {
    /// `b_k`
    pub b: [Rational; 3],
    /// `b_{k,1}`
    pub b1: [Rational; 3],
    /// `b_{k,0}`
    pub b0: [Rational; 3],
}

impl LimitData {
    /// Read the nine numbers back from an operator `c2 g'' + c1 g' + c0 g`
    /// of the limit shape.
    pub fn from_operator(c2: &QPoly, c1: &QPoly, c0: &QPoly) -> Option<LimitData> {
        if c2.degree().unwrap_or(0) > 4 || c1.degree().unwrap_or(0) > 3 || c0.degree().unwrap_or(0) > 2 {
            return None;
        }
        if !c2.coeff(0).is_zero() || !c2.coeff(1).is_zero() || !c1.coeff(0).is_zero() {
            return None;
        }
        let b: [Rational; 3] = std::array::from_fn(|k| c2.coeff(k + 2));
        let b1 = std::array::from_fn(|k| c1.coeff(k + 1) - &b[k]);
        let b0 = std::array::from_fn(|k| c0.coeff(k));
        Some(LimitData { b, b1, b0 })
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().chain(&self.b1).chain(&self.b0).all(Zero::is_zero)
    }

    /// `(c2, c1, c0)` of the ODE.
    pub fn operator(&self) -> (QPoly, QPoly, QPoly) {
        let c2 = QPoly::from_coeffs(vec![
            Rational::zero(),
            Rational::zero(),
            self.b[0].clone(),
            self.b[1].clone(),
            self.b[2].clone(),
        ]);
        let c1 = QPoly::from_coeffs(
            std::iter::once(Rational::zero())
                .chain((0..3).map(|k| &self.b1[k] + &self.b[k]))
                .collect(),
        );
        let c0 = QPoly::from_coeffs(self.b0.to_vec());
        (c2, c1, c0)
    }

    /// Limit data of the ODE for `h` with `g = x^rho h`.
    pub fn gauged(&self, rho: &Rational) -> LimitData {
        let b1 = std::array::from_fn(|k| &self.b1[k] + Rational::from_integer(2.into()) * rho * &self.b[k]);
        let b0 = std::array::from_fn(|k| indicial(&self.b[k], &self.b1[k], &self.b0[k], rho));
        LimitData {
            b: self.b.clone(),
            b1,
            b0,
        }
    }

    fn complex(&self) -> [[Complex64; 3]; 3] {
        let c = |r: &Rational| Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
        std::array::from_fn(|k| [c(&self.b[k]), c(&self.b1[k]), c(&self.b0[k])])
    }

    fn exact(&self) -> [[Rational; 3]; 3] {
        std::array::from_fn(|k| [self.b[k].clone(), self.b1[k].clone(), self.b0[k].clone()])
    }
}

/// `F_k(r) = b_k r^2 + b_k1 r + b_k0`, the weight of `x^(r+k)` produced by
/// `x^r` from the degree-`k` part; `F_0` is the indicial polynomial.
fn indicial<S: local::Scalar>(b: &S, b1: &S, b0: &S, r: &S) -> S {
    b.clone() * r.clone() * r.clone() + b1.clone() * r.clone() + b0.clone()
}

impl fmt::Display for LimitData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::symkernel::fmt_rational as r;
        for k in (0..3).rev() {
            writeln!(
                f,
                "b{k} = {}, b{k}1 = {}, b{k}0 = {}",
                r(&self.b[k]),
                r(&self.b1[k]),
                r(&self.b0[k])
            )?;
        }
        Ok(())
    }
}

fn limit_of(r: &RatFun, k: usize, what: &'static str) -> Result<Rational, ClimitError> {
    let l = r
        .limit_at_zero(eps_var())
        .map_err(|_| ClimitError::LimitDiverges { k, what })?;
    l.as_constant()
        .ok_or_else(|| ClimitError::NotNumeric(l.to_string()))
}

pub fn limit_coefficients(fam: &EpsilonFamily) -> Result<LimitData, ClimitError> {
    let e = RatFun::var(EPS);
    let e2 = e.mul(&e);
    let half = RatFun::from_rational(Rational::new(1.into(), 2.into()));
    let mut out = LimitData {
        b: Default::default(),
        b1: Default::default(),
        b0: Default::default(),
    };
    for k in 0..3 {
        let p = fam.coeff(Side::Plus, k);
        let m = fam.coeff(Side::Minus, k);
        let z = fam.coeff(Side::Zero, k);
        out.b[k] = limit_of(&p.add(m).mul(&half), k, "(a+ + a-)/2")?;
        out.b1[k] = limit_of(&p.sub(m).div(&e)?, k, "(a+ - a-)/e")?;
        out.b0[k] = limit_of(&p.add(m).add(z).div(&e2)?, k, "(a- + a0 + a+)/e^2")?;
    }
    debug_assert!(corollary_holds(fam, &out));
    Ok(out)
}

/// `a+(0) = a-(0) = b_k` and `a0(0) = -2 b_k` for every `k`.
pub fn corollary_holds(fam: &EpsilonFamily, b: &LimitData) -> bool {
    let at0 = |r: &RatFun| r.limit_at_zero(eps_var()).ok().and_then(|l| l.as_constant());
    (0..3).all(|k| {
        let bk = Some(b.b[k].clone());
        at0(fam.coeff(Side::Plus, k)) == bk
            && at0(fam.coeff(Side::Minus, k)) == bk
            && at0(fam.coeff(Side::Zero, k)) == Some(-Rational::from_integer(2.into()) * &b.b[k])
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OdeClass {
    He,
    Che,
    ReducedChe,
    Bhe,
    Dhe,
    ReducedDhe,
    DoublyReducedDhe,
    The,
    Other,
}

impl OdeClass {
    pub fn id(self) -> &'static str {
        match self {
            OdeClass::He => "HE",
            OdeClass::Che => "CHE",
            OdeClass::ReducedChe => "ReducedCHE",
            OdeClass::Bhe => "BHE",
            OdeClass::Dhe => "DHE",
            OdeClass::ReducedDhe => "ReducedDHE",
            OdeClass::DoublyReducedDhe => "DoublyReducedDHE",
            OdeClass::The => "THE",
            OdeClass::Other => "Other",
        }
    }

    pub fn from_id(id: &str) -> Option<OdeClass> {
        [
            OdeClass::He,
            OdeClass::Che,
            OdeClass::ReducedChe,
            OdeClass::Bhe,
            OdeClass::Dhe,
            OdeClass::ReducedDhe,
            OdeClass::DoublyReducedDhe,
            OdeClass::The,
            OdeClass::Other,
        ]
        .into_iter()
        .find(|c| c.id() == id)
    }
}

/// Exponent `rho` of the gauge `g = x^rho h`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeExponent {
    pub exact: Option<Rational>,
    pub approx: Complex64,
}

/// `c2 g'' + c1 g' + c0 g = 0` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HeunODE {
    pub class: Option<OdeClass>,
    pub c2: QPoly,
    pub c1: QPoly,
    pub c0: QPoly,
    /// Limit data the operator was built from (after any exact gauge).
    pub limits: Option<LimitData>,
    /// Gauge applied by [`classify_ode`] to clear `b_00`.
    pub gauge: Option<GaugeExponent>,
    /// Accessory parameter: `B` of a standard form, `b_10` of a limit ODE.
    pub accessory: Option<Rational>,
    pub notes: Vec<String>,
}

impl HeunODE {
    pub fn from_operator(c2: QPoly, c1: QPoly, c0: QPoly) -> HeunODE {
        HeunODE {
            class: None,
            c2,
            c1,
            c0,
            limits: None,
            gauge: None,
            accessory: None,
            notes: Vec::new(),
        }
    }

    /// Divide out the common polynomial factor of the three coefficients.
    pub fn reduced(&self) -> (QPoly, QPoly, QPoly) {
        let g = self.c2.gcd(&self.c1).gcd(&self.c0);
        let d = |p: &QPoly| p.exact_div(&g).expect("gcd divides");
        (d(&self.c2), d(&self.c1), d(&self.c0))
    }

    /// Finite singular points other than zero: roots of `b2 x^2 + b1 x + b0`.
    pub fn finite_singularities(&self) -> Option<Vec<Rational>> {
        let l = self.limits.as_ref()?;
        QPoly::from_coeffs(l.b.to_vec()).rational_roots()
    }
}

impl fmt::Display for HeunODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*g'' + ({})*g' + ({})*g = 0", self.c2, self.c1, self.c0)
    }
}

/// The limit ODE, unclassified.
pub fn emit_ode(b: &LimitData) -> Result<HeunODE, ClimitError> {
    if b.is_zero() {
        return Err(ClimitError::AllZero);
    }
    let (c2, c1, c0) = b.operator();
    Ok(HeunODE {
        limits: Some(b.clone()),
        accessory: Some(b.b0[1].clone()),
        ..HeunODE::from_operator(c2, c1, c0)
    })
}

/// Class from the pattern of `b_2, b_1, b_0, b_21, b_01`. These are not
/// moved by the gauge `x^rho`.
fn class_of(b: &LimitData) -> Result<(OdeClass, Option<&'static str>), ClimitError> {
    let z = |r: &Rational| r.is_zero();
    let [b0, b1, b2] = &b.b;
    Ok(if !z(b2) && !z(b0) {
        if b1 * b1 == Rational::from_integer(4.into()) * b0 * b2 {
            return Err(ClimitError::Unclassifiable(
                "b1^2 = 4 b0 b2: the two finite singular points coincide".into(),
            ));
        }
        (OdeClass::He, None)
    } else if z(b2) && !z(b1) && !z(b0) {
        if z(&b.b1[2]) {
            (
                OdeClass::ReducedChe,
                Some("the irregular singularity at infinity is ramified"),
            )
        } else {
            (OdeClass::Che, None)
        }
    } else if z(b2) && z(b1) && !z(b0) {
        (OdeClass::Bhe, None)
    } else if z(b2) && z(b0) && !z(b1) {
        match (z(&b.b1[2]), z(&b.b1[0])) {
            (false, false) => (OdeClass::Dhe, None),
            (true, false) => (
                OdeClass::ReducedDhe,
                Some("the irregular singularity at infinity is ramified"),
            ),
            (false, true) => (OdeClass::ReducedDhe, Some("the origin is ramified")),
            (true, true) => (OdeClass::DoublyReducedDhe, Some("both irregular singularities are ramified")),
        }
    } else {
        (OdeClass::Other, Some("no Heun-type pattern in b2, b1, b0"))
    })
}

/// Exponent at zero chosen to clear `b_00`: the root of
/// `b0 r^2 + b01 r + b00` with the larger real part, or `-b00/b01` when
/// `b0 = 0`.
pub fn gauge_exponent(b: &LimitData) -> Option<GaugeExponent> {
    if b.b0[0].is_zero() {
        return None;
    }
    let (a, c1, c0) = (&b.b[0], &b.b1[0], &b.b0[0]);
    if a.is_zero() {
        if c1.is_zero() {
            return None;
        }
        let r = -c0 / c1;
        let approx = Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
        return Some(GaugeExponent { exact: Some(r), approx });
    }
    let disc = c1 * c1 - Rational::from_integer(4.into()) * a * c0;
    let two_a = Rational::from_integer(2.into()) * a;
    if let Some(s) = rational_sqrt(&disc) {
        let r1 = (-c1 + &s) / &two_a;
        let r2 = (-c1 - &s) / &two_a;
        let r = if r1 >= r2 { r1 } else { r2 };
        let approx = Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
        return Some(GaugeExponent { exact: Some(r), approx });
    }
    let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
    let sq = Complex64::new(f(&disc), 0.0).sqrt();
    let (r1, r2) = (
        (Complex64::new(-f(c1), 0.0) + sq) / f(&two_a),
        (Complex64::new(-f(c1), 0.0) - sq) / f(&two_a),
    );
    let approx = if (r1.re, r1.im) >= (r2.re, r2.im) { r1 } else { r2 };
    Some(GaugeExponent { exact: None, approx })
}

/// Fill in the class, clearing `b_00` by a gauge `x^rho` first when it is
/// nonzero. With an irrational `rho` the coefficients are left as they are
/// and only the exponent is recorded.
pub fn classify_ode(ode: &HeunODE) -> Result<HeunODE, ClimitError> {
    let b = match &ode.limits {
        Some(b) => b.clone(),
        None => LimitData::from_operator(&ode.c2, &ode.c1, &ode.c0).ok_or(ClimitError::NotLimitShape)?,
    };
    let (class, note) = class_of(&b)?;
    let mut out = ode.clone();
    out.class = Some(class);
    out.limits = Some(b.clone());
    if let Some(n) = note {
        out.notes.push(n.to_string());
    }
    if !b.b0[0].is_zero() {
        match gauge_exponent(&b) {
            Some(g) => {
                if let Some(r) = &g.exact {
                    let nb = b.gauged(r);
                    let (c2, c1, c0) = nb.operator();
                    out.c2 = c2;
                    out.c1 = c1;
                    out.c0 = c0;
                    out.accessory = Some(nb.b0[1].clone());
                    out.limits = Some(nb);
                } else {
                    out.notes.push("gauge exponent is irrational; coefficients not normalized".into());
                }
                out.gauge = Some(g);
            }
            None => out.notes.push("b00 cannot be cleared by a power gauge".into()),
        }
    }
    Ok(out)
}

/// Formal series `x^rho (1 + d1 x + ...)` of the limit ODE. When `b_0 = 0`
/// the point is irregular and the series is only formal.
fn frobenius<S: local::Scalar>(b: &[[S; 3]; 3], rho: &S, n: usize) -> Result<Vec<S>, ClimitError> {
    let f = |k: usize, r: S| indicial(&b[k][0], &b[k][1], &b[k][2], &r);
    let scale = b.iter().flatten().map(|v| v.magnitude()).fold(0.0, f64::max) * (1.0 + rho.magnitude()).powi(2);
    if !f(0, rho.clone()).negligible(scale) {
        return Err(ClimitError::NotAnExponent(format!("{rho:?}")));
    }
    let int = |m: usize| S::from_rational(&Rational::from_integer((m as i64).into()));
    let mut d = vec![S::one()];
    for m in 1..=n {
        let den = f(0, rho.clone() + int(m));
        if den.negligible(scale * (m * m) as f64) {
            return Err(ClimitError::Resonance(m));
        }
        let mut num = f(1, rho.clone() + int(m - 1)) * d[m - 1].clone();
        if m >= 2 {
            num = num + f(2, rho.clone() + int(m - 2)) * d[m - 2].clone();
        }
        d.push(-num / den);
    }
    Ok(d)
}

/// Taylor coefficients at `x = 0` of the exponent-zero solution of the
/// classified ODE (of `h` when a gauge `g = x^rho h` was applied).
pub fn ode_series(ode: &HeunODE, n: usize) -> Result<Vec<Rational>, ClimitError> {
    let b = match &ode.limits {
        Some(b) => b.clone(),
        None => LimitData::from_operator(&ode.c2, &ode.c1, &ode.c0).ok_or(ClimitError::NotLimitShape)?,
    };
    if b.b[0].is_zero() {
        return Err(ClimitError::IrregularAtZero);
    }
    if matches!(&ode.gauge, Some(g) if g.exact.is_none()) {
        return Err(ClimitError::IrrationalExponent);
    }
    frobenius(&b.exact(), &Rational::zero(), n)
}

/// Largest `|f_q(x) - g(x)|` over the samples, where `f_q` is the series of
/// the q-equation at `q = 1 + eps` and `g` the series of the limit ODE.
/// The q-side exponent is the characteristic root closest to `q^rho`,
/// `rho` being the exponent of the ODE branch (0 unless `b_00 != 0`).
/// For DHE-type limits both series are formal and are compared as
/// truncated sums.
pub fn crosscheck(
    fam: &EpsilonFamily,
    eps: &Rational,
    xs: &[f64],
    n: usize,
) -> Result<f64, ClimitError> {
    let raw = limit_coefficients(fam)?;
    let ode = classify_ode(&emit_ode(&raw)?)?;
    let rho = ode
        .gauge
        .as_ref()
        .map(|g| g.approx)
        .unwrap_or_else(|| Complex64::new(0.0, 0.0));
    let d = frobenius(&raw.complex(), &rho, n)?;

    let eq = fam.at(eps)?;
    let qb = q_binding(eps);
    let q = Complex64::new(qb[&Var::new("q")].to_f64().unwrap_or(f64::NAN), 0.0);
    let target = (rho * q.ln()).exp();
    let roots: Vec<Complex64> = local::char_exponents(&eq, Location::Zero)?.numeric_roots(&qb)?;
    let s = roots
        .into_iter()
        .min_by(|a, b| {
            (a - target)
                .norm()
                .partial_cmp(&(b - target).norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or(LocalError::NoRoot { index: 0, available: 0 })?;
    let sol = local::series_with_root(&eq, &qb, s, n)?;
    let rho_q = s.ln() / q.ln();

    let mut worst: f64 = 0.0;
    for &x in xs {
        let xc = Complex64::new(x, 0.0);
        let fq = (rho_q * xc.ln()).exp() * sol.eval_series(&xc);
        let mut g = Complex64::new(0.0, 0.0);
        for c in d.iter().rev() {
            g = g * xc + c;
        }
        let g = (rho * xc.ln()).exp() * g;
        worst = worst.max((fq - g).norm());
    }
    Ok(worst)
}
