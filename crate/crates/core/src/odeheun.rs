//! Standard forms of the Heun equation and its confluent, biconfluent,
//! doubly confluent and triconfluent degenerations, with a matcher that
//! recovers the named parameters from polynomial operator data.
//!
//! Operators are `C2 y'' + C1 y' + C0 y = 0` with denominators cleared:
//!
//! * HE: `z(z-1)(z-t)`, `g(z-1)(z-t) + d z(z-t) + eh z(z-1)`, `a b z - B`
//! * CHE: `z(z-1)`, `g(z-1) + d z - b z(z-1)`, `-a b z + B`
//! * BHE: `z`, `-z^2 - d z + g`, `-a z + B`
//! * DHE: `z^2`, `-z^2 - g z - d`, `-a z + B`
//! * THE: `1`, `-z^2 - g`, `a z + B`

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::climit::{classify_ode, HeunODE, LimitData, OdeClass};
use crate::symkernel::{fmt_rational, rational_cbrt, rational_sqrt, QPoly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OdeheunError {
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
}

/// Why an operator could not be brought to a standard form.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no match: {obstruction}")]
pub struct NoMatch {
    pub obstruction: String,
}

fn no_match<T>(why: impl Into<String>) -> Result<T, NoMatch> {
    Err(NoMatch {
        obstruction: why.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeunParams {
    He {
        t: Rational,
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
        epsilon: Rational,
        b: Rational,
    },
    Che {
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        delta: Rational,
        b: Rational,
    },
    Bhe {
        alpha: Rational,
        gamma: Rational,
        delta: Rational,
        b: Rational,
    },
    Dhe {
        alpha: Rational,
        gamma: Rational,
        delta: Rational,
        b: Rational,
    },
    The {
        alpha: Rational,
        gamma: Rational,
        b: Rational,
    },
}

impl HeunParams {
    pub fn class(&self) -> OdeClass {
        match self {
            HeunParams::He { .. } => OdeClass::He,
            HeunParams::Che { .. } => OdeClass::Che,
            HeunParams::Bhe { .. } => OdeClass::Bhe,
            HeunParams::Dhe { .. } => OdeClass::Dhe,
            HeunParams::The { .. } => OdeClass::The,
        }
    }

    /// Named parameters in a fixed order, ASCII names.
    pub fn named(&self) -> Vec<(&'static str, &Rational)> {
        match self {
            HeunParams::He {
                t,
                alpha,
                beta,
                gamma,
                delta,
                epsilon,
                b,
            } => vec![
                ("t", t),
                ("alpha", alpha),
                ("beta", beta),
                ("gamma", gamma),
                ("delta", delta),
                ("epsilon", epsilon),
                ("B", b),
            ],
            HeunParams::Che {
                alpha,
                beta,
                gamma,
                delta,
                b,
            } => vec![
                ("alpha", alpha),
                ("beta", beta),
                ("gamma", gamma),
                ("delta", delta),
                ("B", b),
            ],
            HeunParams::Bhe { alpha, gamma, delta, b } | HeunParams::Dhe { alpha, gamma, delta, b } => {
                vec![("alpha", alpha), ("gamma", gamma), ("delta", delta), ("B", b)]
            }
            HeunParams::The { alpha, gamma, b } => vec![("alpha", alpha), ("gamma", gamma), ("B", b)],
        }
    }

    /// The HE parameters with `alpha` and `beta` exchanged; other classes
    /// are returned unchanged.
    pub fn swapped(&self) -> HeunParams {
        match self.clone() {
            HeunParams::He {
                t,
                alpha,
                beta,
                gamma,
                delta,
                epsilon,
                b,
            } => HeunParams::He {
                t,
                alpha: beta,
                beta: alpha,
                gamma,
                delta,
                epsilon,
                b,
            },
            other => other,
        }
    }

    /// Equal up to the HE `alpha <-> beta` exchange.
    pub fn same_orbit(&self, other: &HeunParams) -> bool {
        self == other || &self.swapped() == other
    }

    pub fn validate(&self) -> Result<(), OdeheunError> {
        let bad = |s: &str| Err(OdeheunError::ConstraintViolation(s.to_string()));
        match self {
            HeunParams::He {
                t,
                alpha,
                beta,
                gamma,
                delta,
                epsilon,
                ..
            } => {
                if t.is_zero() || t.is_one() {
                    return bad("t must differ from 0 and 1");
                }
                if gamma + delta + epsilon != alpha + beta + Rational::one() {
                    return bad("gamma + delta + epsilon != alpha + beta + 1");
                }
            }
            HeunParams::Che { beta, .. } if beta.is_zero() => {
                return bad("beta = 0 leaves no irregular point at infinity")
            }
            HeunParams::Dhe { delta, .. } if delta.is_zero() => {
                return bad("delta = 0 makes the origin regular")
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for HeunParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.class().id())?;
        for (i, (n, v)) in self.named().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={}", fmt_rational(v))?;
        }
        f.write_str(")")
    }
}

fn poly(c: &[Rational]) -> QPoly {
    QPoly::from_coeffs(c.to_vec())
}

/// `x - r`
fn lin(r: &Rational) -> QPoly {
    poly(&[-r.clone(), Rational::one()])
}

pub fn to_operator(p: &HeunParams) -> Result<HeunODE, OdeheunError> {
    p.validate()?;
    let z = QPoly::x();
    let zero = Rational::zero();
    let one = Rational::one();
    let z1 = lin(&one);
    let c = |r: &Rational| QPoly::constant(r.clone());
    let (c2, c1, c0) = match p {
        HeunParams::He {
            t,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            b,
        } => {
            let zt = lin(t);
            (
                z.mul(&z1).mul(&zt),
                z1.mul(&zt)
                    .scale(gamma)
                    .add(&z.mul(&zt).scale(delta))
                    .add(&z.mul(&z1).scale(epsilon)),
                poly(&[-b.clone(), alpha * beta]),
            )
        }
        HeunParams::Che {
            alpha,
            beta,
            gamma,
            delta,
            b,
        } => (
            z.mul(&z1),
            z1.scale(gamma).add(&z.scale(delta)).sub(&z.mul(&z1).scale(beta)),
            poly(&[b.clone(), -(alpha * beta)]),
        ),
        HeunParams::Bhe { alpha, gamma, delta, b } => (
            z.clone(),
            poly(&[gamma.clone(), -delta.clone(), -one.clone()]),
            poly(&[b.clone(), -alpha.clone()]),
        ),
        HeunParams::Dhe { alpha, gamma, delta, b } => (
            z.mul(&z),
            poly(&[-delta.clone(), -gamma.clone(), -one.clone()]),
            poly(&[b.clone(), -alpha.clone()]),
        ),
        HeunParams::The { alpha, gamma, b } => (
            c(&one),
            poly(&[-gamma.clone(), zero, -one.clone()]),
            poly(&[b.clone(), alpha.clone()]),
        ),
    };
    let mut ode = HeunODE::from_operator(c2, c1, c0);
    ode.class = Some(p.class());
    ode.accessory = Some(match p {
        HeunParams::He { b, .. }
        | HeunParams::Che { b, .. }
        | HeunParams::Bhe { b, .. }
        | HeunParams::Dhe { b, .. }
        | HeunParams::The { b, .. } => b.clone(),
    });
    Ok(ode)
}

/// `(c2(r z)/r^2, c1(r z)/r, c0(r z))`: the operator in `z = x/r`.
fn rescale(c2: &QPoly, c1: &QPoly, c0: &QPoly, r: &Rational) -> (QPoly, QPoly, QPoly) {
    (
        c2.scale_arg(r).scale(&(r * r).recip()),
        c1.scale_arg(r).scale(&r.recip()),
        c0.scale_arg(r),
    )
}

/// Bring an operator to the limit shape `x^2 B2 g'' + x B1 g' + B0 g` by a
/// power of `x`, trying the operator as given before removing the common
/// factor of its coefficients.
fn limit_data(ode: &HeunODE) -> Option<LimitData> {
    let (r2, r1, r0) = ode.reduced();
    [(ode.c2.clone(), ode.c1.clone(), ode.c0.clone()), (r2, r1, r0)]
        .into_iter()
        .find_map(|(c2, c1, c0)| {
            let n = c2.lead()?.recip();
            let (c2, c1, c0) = (c2.scale(&n), c1.scale(&n), c0.scale(&n));
            (0..=2).find_map(|k| {
                let xk = QPoly::monomial(Rational::one(), k);
                LimitData::from_operator(&c2.mul(&xk), &c1.mul(&xk), &c0.mul(&xk))
            })
        })
}

/// Recover the standard-form parameters. Only scalings `x -> r x` and the
/// gauge `x^rho` are tried, so `0` and `infinity` stay where they are.
pub fn match_class(ode: &HeunODE) -> Result<HeunParams, NoMatch> {
    match ode.c2.degree() {
        None => return no_match("zero leading coefficient"),
        Some(0) => return match_the(ode),
        _ => {}
    }
    // a common factor can hide a THE operator behind a higher-degree one
    match_heun(ode).or_else(|e| match ode.reduced().0.degree() {
        Some(0) => match_the(ode),
        _ => Err(e),
    })
}

fn match_heun(ode: &HeunODE) -> Result<HeunParams, NoMatch> {
    let Some(lim) = limit_data(ode) else {
        return no_match("operator is not of Heun type at x = 0");
    };
    let shaped = HeunODE {
        limits: Some(lim.clone()),
        ..HeunODE::from_operator(QPoly::zero(), QPoly::zero(), QPoly::zero())
    };
    let cl = match classify_ode(&shaped) {
        Ok(c) => c,
        Err(e) => return no_match(e.to_string()),
    };
    if matches!(&cl.gauge, Some(g) if g.exact.is_none()) {
        return no_match("gauge exponent at x = 0 is irrational");
    }
    let b = cl.limits.clone().expect("classify fills limits");
    let class = cl.class.expect("classify fills class");
    match class {
        OdeClass::ReducedChe => return no_match("reduced CHE: the irregular point at infinity is ramified"),
        OdeClass::ReducedDhe | OdeClass::DoublyReducedDhe => {
            return no_match("reduced DHE: an irregular point is ramified")
        }
        OdeClass::The | OdeClass::Other => return no_match("no Heun-type pattern"),
        _ if !b.b0[0].is_zero() => return no_match("b00 cannot be removed by a power gauge"),
        _ => {}
    }
    // after the gauge b00 = 0, so every coefficient carries a factor x
    let x = QPoly::x();
    let (c2, c1, c0) = b.operator();
    let strip = |p: &QPoly| p.exact_div(&x).expect("limit shape");
    let (c2, c1, c0) = (strip(&c2), strip(&c1), strip(&c0));
    let [b0, b1, b2] = b.b.clone();
    match class {
        OdeClass::He => {
            let roots = QPoly::from_coeffs(vec![b0.clone(), b1.clone(), b2.clone()]).rational_roots();
            let Some(mut roots) = roots else {
                return no_match("finite singular points are irrational");
            };
            if let Some(i) = roots.iter().position(|r| r.is_one()) {
                roots.swap(0, i);
            }
            let (r, r2) = (roots[0].clone(), roots[1].clone());
            let (c2, c1, c0) = rescale(&c2, &c1, &c0, &r);
            let n = c2.lead().expect("cubic").recip();
            let (c1, c0) = (c1.scale(&n), c0.scale(&n));
            let t = &r2 / &r;
            let one = Rational::one();
            let gamma = c1.eval(&Rational::zero()) / &t;
            let delta = c1.eval(&one) / (&one - &t);
            let epsilon = c1.eval(&t) / (&t * (&t - &one));
            let ab = c0.coeff(1);
            let sum = &gamma + &delta + &epsilon - &one;
            let Some(mut ab_roots) = QPoly::from_coeffs(vec![ab, -sum, one.clone()]).rational_roots() else {
                return no_match("alpha and beta are irrational");
            };
            if ab_roots.len() == 1 {
                ab_roots.push(ab_roots[0].clone());
            }
            Ok(HeunParams::He {
                t,
                alpha: ab_roots[0].clone(),
                beta: ab_roots[1].clone(),
                gamma,
                delta,
                epsilon,
                b: -c0.coeff(0),
            })
        }
        OdeClass::Che => {
            let r = -&b0 / &b1;
            let (c2, c1, c0) = rescale(&c2, &c1, &c0, &r);
            let n = c2.lead().expect("quadratic").recip();
            let (c1, c0) = (c1.scale(&n), c0.scale(&n));
            let beta = -c1.coeff(2);
            Ok(HeunParams::Che {
                alpha: -c0.coeff(1) / &beta,
                gamma: -c1.coeff(0),
                delta: c1.eval(&Rational::one()),
                b: c0.coeff(0),
                beta,
            })
        }
        OdeClass::Bhe => {
            let Some(s) = rational_sqrt(&(-&b0 / &b.b1[2])) else {
                return no_match("scaling needs a square root");
            };
            let (c2, c1, c0) = rescale(&c2, &c1, &c0, &s);
            let n = c2.lead().expect("linear").recip();
            let (c1, c0) = (c1.scale(&n), c0.scale(&n));
            Ok(HeunParams::Bhe {
                alpha: -c0.coeff(1),
                gamma: c1.coeff(0),
                delta: -c1.coeff(1),
                b: c0.coeff(0),
            })
        }
        OdeClass::Dhe => {
            let s = -&b1 / &b.b1[2];
            let (c2, c1, c0) = rescale(&c2, &c1, &c0, &s);
            let n = c2.lead().expect("quadratic").recip();
            let (c1, c0) = (c1.scale(&n), c0.scale(&n));
            Ok(HeunParams::Dhe {
                alpha: -c0.coeff(1),
                gamma: -c1.coeff(1),
                delta: -c1.coeff(0),
                b: c0.coeff(0),
            })
        }
        _ => unreachable!("handled above"),
    }
}

fn match_the(ode: &HeunODE) -> Result<HeunParams, NoMatch> {
    let (c2, c1, c0) = ode.reduced();
    let n = c2.lead().expect("nonzero").recip();
    let (c1, c0) = (c1.scale(&n), c0.scale(&n));
    if c1.degree() != Some(2) || c0.degree().unwrap_or(0) > 1 {
        return no_match("constant leading coefficient but not of THE shape");
    }
    let h = -c1.coeff(1) / (Rational::from_integer(2.into()) * c1.coeff(2));
    let (c1, c0) = (c1.shift_arg(&h), c0.shift_arg(&h));
    let Some(l) = rational_cbrt(&(-c1.coeff(2)).recip()) else {
        return no_match("scaling needs a cube root");
    };
    // y(x) with x = l z: multiply through by l^2
    let c1 = c1.scale_arg(&l).scale(&l);
    let c0 = c0.scale_arg(&l).scale(&(&l * &l));
    Ok(HeunParams::The {
        alpha: c0.coeff(1),
        gamma: -c1.coeff(0),
        b: c0.coeff(0),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularPoint {
    /// The roots of a monic squarefree factor of `C2`.
    Roots(QPoly),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub point: SingularPoint,
    pub regular: bool,
    /// Number of points the entry stands for.
    pub count: usize,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.regular { "regular" } else { "irregular" };
        match &self.point {
            SingularPoint::Infinity => write!(f, "infinity ({kind})"),
            SingularPoint::Roots(p) => match p.rational_roots() {
                Some(r) if p.degree() == Some(1) => write!(f, "{} ({kind})", fmt_rational(&r[0])),
                _ => write!(f, "roots of {p} ({kind})"),
            },
        }
    }
}

/// Singular points of `C2 y'' + C1 y' + C0 y`. A root of `C2` of
/// multiplicity `i` is regular iff it is a root of `C1` of order `i - 1`
/// and of `C0` of order `i - 2`.
pub fn singularities(ode: &HeunODE) -> Vec<Singularity> {
    let (c2, c1, c0) = ode.reduced();
    let mut out = Vec::new();
    for (f, i) in c2.squarefree() {
        let regular = f.pow(i - 1).divides(&c1) && (i < 2 || f.pow(i - 2).divides(&c0));
        let count = f.degree().unwrap_or(0);
        out.push(Singularity {
            point: SingularPoint::Roots(f),
            regular,
            count,
        });
    }
    let d2 = c2.degree().unwrap_or(0) as i64;
    let deg = |p: &QPoly| p.degree().map(|d| d as i64).unwrap_or(i64::MIN);
    // with x = 1/w, regular iff deg C1 <= deg C2 - 1 and deg C0 <= deg C2 - 2;
    // ordinary iff also 2 C2 - x C1 drops a degree and deg C0 <= deg C2 - 4
    let regular = deg(&c1) < d2 && deg(&c0) <= d2 - 2;
    let two = Rational::from_integer(2.into());
    let ordinary = regular && deg(&c2.scale(&two).sub(&QPoly::x().mul(&c1))) < d2 && deg(&c0) <= d2 - 4;
    if !ordinary {
        out.push(Singularity {
            point: SingularPoint::Infinity,
            regular,
            count: 1,
        });
    }
    out
}
