//! Gauge transformations acting on the coefficients of a `QDiffEq`, plus
//! numeric q-Pochhammer and theta products.
//!
//! Conventions: every forward op maps solutions `f` of the input to
//! solutions of the output as follows.
//! - `Power(c)` with `c = q^l`: new solution `x^l f`.
//! - `MoveFactor(Pochhammer, a)`: new solution `(q a x; q)_inf f`.
//! - `MoveFactor(Theta, a)`: new solution `theta_q(q a x) f`.
//! - `Linear(p)`: new solution `f / u` where `u(qx) = p(x) u(x)`.
//! - `InvertVariable`: new solution `f(1/x)`.
//! - `Rebase(k)`: new solution `f(x q^-k)`.

use num_complex::Complex64;
use thiserror::Error;

use crate::qdiff::{QDiffEq, QDiffError};
use crate::symkernel::{RatFun, SymError, UPoly, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaugeError {
    #[error("coefficient M is not divisible by the requested factor")]
    NotDivisible,
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    QDiff(#[from] QDiffError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Pochhammer,
    Theta,
}

#[derive(Clone, Debug)]
pub enum GaugeKind {
    /// Multiply solutions by `x^l`; the payload is `q^l`.
    Power(RatFun),
    MoveFactor {
        kind: FactorKind,
        alpha: RatFun,
        inverse: bool,
    },
    Linear {
        p: UPoly,
        inverse: bool,
    },
    InvertVariable,
    Rebase(i64),
}

#[derive(Clone, Debug)]
pub struct GaugeRecord {
    pub kind: GaugeKind,
}

pub fn q_var() -> Var {
    Var::new("q")
}

fn q() -> RatFun {
    RatFun::var("q")
}

/// `q^l` for an integer `l`.
pub fn q_power(l: i64) -> RatFun {
    q().pow(l as i32).expect("q is nonzero")
}

impl GaugeRecord {
    pub fn power(l: i64) -> GaugeRecord {
        GaugeRecord {
            kind: GaugeKind::Power(q_power(l)),
        }
    }

    /// Symbolic exponent: `s` stands for `q^l`.
    pub fn power_symbolic(s: &str) -> GaugeRecord {
        GaugeRecord {
            kind: GaugeKind::Power(RatFun::var(s)),
        }
    }

    pub fn move_factor(kind: FactorKind, alpha: RatFun) -> GaugeRecord {
        GaugeRecord {
            kind: GaugeKind::MoveFactor {
                kind,
                alpha,
                inverse: false,
            },
        }
    }

    pub fn linear(p: UPoly) -> GaugeRecord {
        GaugeRecord {
            kind: GaugeKind::Linear { p, inverse: false },
        }
    }

    pub fn invert() -> GaugeRecord {
        GaugeRecord {
            kind: GaugeKind::InvertVariable,
        }
    }

    pub fn rebase(steps: i64) -> GaugeRecord {
        GaugeRecord {
            kind: GaugeKind::Rebase(steps),
        }
    }

    pub fn inverse(&self) -> GaugeRecord {
        let kind = match &self.kind {
            GaugeKind::Power(c) => GaugeKind::Power(c.inv().expect("q^l is nonzero")),
            GaugeKind::MoveFactor {
                kind,
                alpha,
                inverse,
            } => GaugeKind::MoveFactor {
                kind: *kind,
                alpha: alpha.clone(),
                inverse: !inverse,
            },
            GaugeKind::Linear { p, inverse } => GaugeKind::Linear {
                p: p.clone(),
                inverse: !inverse,
            },
            GaugeKind::InvertVariable => GaugeKind::InvertVariable,
            GaugeKind::Rebase(k) => GaugeKind::Rebase(-k),
        };
        GaugeRecord { kind }
    }

    pub fn apply(&self, eq: &QDiffEq) -> Result<QDiffEq, GaugeError> {
        match &self.kind {
            GaugeKind::Power(c) => apply_power(eq, c),
            GaugeKind::MoveFactor {
                kind,
                alpha,
                inverse: false,
            } => gauge_move_factor(eq, *kind, alpha),
            GaugeKind::MoveFactor {
                kind,
                alpha,
                inverse: true,
            } => unmove_factor(eq, *kind, alpha),
            GaugeKind::Linear { p, .. } if p.is_zero() => Err(GaugeError::Domain("the factor polynomial is zero".into())),
            GaugeKind::Linear { p, inverse: false } => Ok(gauge_linear(eq, p)?),
            GaugeKind::Linear { p, inverse: true } => Ok(gauge_linear_inverse(eq, p)?),
            GaugeKind::InvertVariable => Ok(invert_variable(eq)),
            GaugeKind::Rebase(k) => Ok(rebase_steps(eq, *k)),
        }
    }
}

fn apply_power(eq: &QDiffEq, c: &RatFun) -> Result<QDiffEq, GaugeError> {
    let inv = c.inv()?;
    Ok(QDiffEq::new(
        eq.var(),
        eq.p().scale(&inv),
        eq.z().clone(),
        eq.m().scale(c),
    )?)
}

/// New solutions are `x^l` times the old ones: `P -> q^-l P`, `M -> q^l M`.
pub fn gauge_power(eq: &QDiffEq, l: i64) -> QDiffEq {
    apply_power(eq, &q_power(l)).expect("q^l is nonzero")
}

fn factor_polys(kind: FactorKind, alpha: &RatFun) -> (UPoly, UPoly) {
    // (factor removed from M, factor gained by P)
    match kind {
        FactorKind::Pochhammer => (
            UPoly::linear(alpha.neg(), RatFun::one()),
            UPoly::linear(q().mul(alpha).neg(), RatFun::one()),
        ),
        FactorKind::Theta => (
            UPoly::monomial(alpha.clone(), 1),
            UPoly::monomial(q().mul(alpha), 1),
        ),
    }
}

pub fn gauge_move_factor(
    eq: &QDiffEq,
    kind: FactorKind,
    alpha: &RatFun,
) -> Result<QDiffEq, GaugeError> {
    let (from_m, to_p) = factor_polys(kind, alpha);
    let m = eq.m().exact_div(&from_m).ok_or(GaugeError::NotDivisible)?;
    Ok(QDiffEq::new(eq.var(), eq.p().mul(&to_p), eq.z().clone(), m)?)
}

fn unmove_factor(eq: &QDiffEq, kind: FactorKind, alpha: &RatFun) -> Result<QDiffEq, GaugeError> {
    let (to_m, from_p) = factor_polys(kind, alpha);
    let p = eq.p().exact_div(&from_p).ok_or(GaugeError::NotDivisible)?;
    Ok(QDiffEq::new(eq.var(), p, eq.z().clone(), eq.m().mul(&to_m))?)
}

fn q_inv() -> RatFun {
    q_power(-1)
}

/// Strip `u` with `u(qx) = p(x) u(x)` from the solution: `P -> P p(x)`,
/// `M -> M / p(x/q)`, multiplying through by `p(x/q)` if the division is
/// not exact.
pub fn gauge_linear(eq: &QDiffEq, p: &UPoly) -> Result<QDiffEq, QDiffError> {
    let pb = p.scale_arg(&q_inv());
    let new_p = eq.p().mul(p);
    match eq.m().exact_div(&pb) {
        Some(m) => QDiffEq::new(eq.var(), new_p, eq.z().clone(), m),
        None => QDiffEq::new(eq.var(), new_p.mul(&pb), eq.z().mul(&pb), eq.m().clone()),
    }
}

fn gauge_linear_inverse(eq: &QDiffEq, p: &UPoly) -> Result<QDiffEq, QDiffError> {
    let pb = p.scale_arg(&q_inv());
    let new_m = eq.m().mul(&pb);
    match eq.p().exact_div(p) {
        Some(np) => QDiffEq::new(eq.var(), np, eq.z().clone(), new_m),
        None => QDiffEq::new(eq.var(), eq.p().clone(), eq.z().mul(p), new_m.mul(p)),
    }
}

/// `x -> 1/x`, cleared by `x^D`; P and M trade places.
pub fn invert_variable(eq: &QDiffEq) -> QDiffEq {
    let d = eq.degree();
    let rev = |u: &UPoly| UPoly::from_coeffs((0..=d).rev().map(|k| u.coeff(k)).collect());
    QDiffEq::new(eq.var(), rev(eq.m()), rev(eq.z()), rev(eq.p())).expect("nonzero stays nonzero")
}

/// Read a relation in `(y(q^2 x), y(qx), y(x))` as one in `(f(qx), f(x),
/// f(x/q))` by substituting `x -> x/q`.
pub fn rebase(eq3: &QDiffEq) -> QDiffEq {
    rebase_steps(eq3, 1)
}

/// `x -> x q^-steps` in every coefficient.
pub fn rebase_steps(eq: &QDiffEq, steps: i64) -> QDiffEq {
    let c = q_power(-steps);
    QDiffEq::new(
        eq.var(),
        eq.p().scale_arg(&c),
        eq.z().scale_arg(&c),
        eq.m().scale_arg(&c),
    )
    .expect("nonzero stays nonzero")
}

/// `(x; q)_inf` truncated to `terms` factors.
pub fn pochhammer(x: Complex64, q: Complex64, terms: usize) -> Result<Complex64, GaugeError> {
    check_q(q, terms)?;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    for _ in 0..terms {
        acc *= Complex64::new(1.0, 0.0) - x * qk;
        qk *= q;
    }
    Ok(acc)
}

/// `theta_q(x) = (q, -x, -q/x; q)_inf`, each product truncated to `terms`.
pub fn theta(x: Complex64, q: Complex64, terms: usize) -> Result<Complex64, GaugeError> {
    check_q(q, terms)?;
    if x == Complex64::new(0.0, 0.0) {
        return Err(GaugeError::Domain("theta_q is singular at x = 0".into()));
    }
    Ok(pochhammer(q, q, terms)? * pochhammer(-x, q, terms)? * pochhammer(-q / x, q, terms)?)
}

/// Size of the first omitted factor's deviation from 1, `|x q^terms|`.
pub fn truncation_bound(x: Complex64, q: Complex64, terms: usize) -> f64 {
    (x * q.powu(terms as u32)).norm()
}

fn check_q(q: Complex64, terms: usize) -> Result<(), GaugeError> {
    if q.norm() >= 1.0 {
        return Err(GaugeError::Domain(format!("|q| = {} is not below 1", q.norm())));
    }
    if terms == 0 {
        return Err(GaugeError::Domain("at least one factor is required".into()));
    }
    Ok(())
}

pub fn eval_special(
    kind: FactorKind,
    x: Complex64,
    q: Complex64,
    terms: usize,
) -> Result<Complex64, GaugeError> {
    match kind {
        FactorKind::Pochhammer => pochhammer(x, q, terms),
        FactorKind::Theta => theta(x, q, terms),
    }
}
