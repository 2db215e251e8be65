//! KNY operators `L1` restricted to `f = n4`, written as coefficients of
//! `(T_z, 1, T_z^-1)`.

use std::collections::HashMap;
use std::fmt;

use super::{v, LaxError};
use crate::gauge::gauge_linear;
use crate::qdiff::QDiffEq;
use crate::symkernel::{expr, RatFun, SymError, UPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KnyFamily {
    D5,
    A4w,
    E3a,
    E3b,
    E2a,
    E2b,
    A1w,
    A1w8,
}

struct Pieces {
    /// Multiplication part of `L1`.
    scalar: &'static str,
    /// Coefficient of `(g - T^-1)`.
    x_part: &'static str,
    /// Coefficient of `(T - 1/g)`.
    y_part: &'static str,
}

const X_GENERIC: &str = "n1*n2*n3*(z/q-n4)/(f-z/q)";

impl KnyFamily {
    pub const ALL: [KnyFamily; 8] = [
        KnyFamily::D5,
        KnyFamily::A4w,
        KnyFamily::E3a,
        KnyFamily::E3b,
        KnyFamily::E2a,
        KnyFamily::E2b,
        KnyFamily::A1w,
        KnyFamily::A1w8,
    ];

    pub fn id(self) -> &'static str {
        match self {
            KnyFamily::D5 => "D5",
            KnyFamily::A4w => "A4w",
            KnyFamily::E3a => "E3a",
            KnyFamily::E3b => "E3b",
            KnyFamily::E2a => "E2a",
            KnyFamily::E2b => "E2b",
            KnyFamily::A1w => "A1w",
            KnyFamily::A1w8 => "A1w8",
        }
    }

    pub fn from_id(id: &str) -> Result<KnyFamily, LaxError> {
        KnyFamily::ALL
            .into_iter()
            .find(|f| f.id() == id)
            .ok_or_else(|| LaxError::UnknownFamily(id.to_string()))
    }

    fn pieces(self) -> Pieces {
        use KnyFamily::*;
        match self {
            D5 => Pieces {
                scalar: "z*(g*n1-1)*(g*n2-1)/(q*g)-n1*n2*n3*n4*(g-n5/k2)*(g-n6/k2)/(f*g)",
                x_part: "n1*n2*(z-q*n3)*(z-q*n4)/(q*(q*f-z))",
                // written in L1 as (1/g - T)
                y_part: "-(z-k1/n7)*(z-k1/n8)/(q*(f-z))",
            },
            A4w => Pieces {
                scalar: "n1*n2*n3*n4*(g-n5/k2)*(g-n6/k2)/(f*g)+(g*n1-1)*z/(q*g)",
                x_part: X_GENERIC,
                y_part: "(z-k1/n7)*(z-k1/n8)/(q*(f-z))",
            },
            E3a => Pieces {
                scalar: "n1*n2*n3*n4*(g-n5/k2)*(g-n6/k2)/(f*g)+n1*z/q",
                x_part: X_GENERIC,
                y_part: "-(k1/n8)*(z-k1/n7)/(q*(f-z))",
            },
            E3b => Pieces {
                scalar: "(g-n5/k2)*n1*n2*n3*n4/f+(g*n1-1)*z/(q*g)",
                x_part: X_GENERIC,
                y_part: "z*(z-k1/n8)/(q*(f-z))",
            },
            E2a => Pieces {
                scalar: "(g-n5/k2)*n1*n2*n3*n4/f+n1*z/q",
                x_part: X_GENERIC,
                y_part: "-(k1/n8)*z/(q*(f-z))",
            },
            E2b => Pieces {
                scalar: "g*n1*n2*n3*n4/f+(g*n1-1)*z/(q*g)",
                x_part: X_GENERIC,
                y_part: "z*(z-k1/n8)/(q*(f-z))",
            },
            A1w => Pieces {
                scalar: "g*n1*n2*n3*n4/f-z/(q*g)",
                x_part: X_GENERIC,
                y_part: "z*(z-k1/n8)/(q*(f-z))",
            },
            A1w8 => Pieces {
                scalar: "g*n1*n2*n3*n4/f+n1*z/q",
                x_part: X_GENERIC,
                y_part: "-(k1/n8)*z/(q*(f-z))",
            },
        }
    }

    /// Families whose printed table form follows a gauge step.
    pub fn has_gauge_form(self) -> bool {
        matches!(self, KnyFamily::E3a | KnyFamily::E2a | KnyFamily::A1w8)
    }

    pub fn parameters(self) -> Vec<String> {
        let mut out: Vec<String> = vec!["k1".into(), "k2".into()];
        out.extend((1..=8).map(|i| format!("n{i}")));
        out.push("g".into());
        out
    }

    /// `k1^2 k2^2 = q n1 ... n8`, solved for `n8`.
    pub fn constraint() -> HashMap<Var, RatFun> {
        let mut m = HashMap::new();
        m.insert(v("n8"), expr("k1^2*k2^2/(q*n1*n2*n3*n4*n5*n6*n7)"));
        m
    }
}

impl fmt::Display for KnyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Coefficients of `T_z`, `1` and `T_z^-1` in `L1` at `f = n4`.
#[derive(Clone, Debug)]
pub struct KnyOperator {
    pub family: KnyFamily,
    pub c_plus: RatFun,
    pub c_zero: RatFun,
    pub c_minus: RatFun,
}

fn at_f(r: &RatFun, what: &str) -> Result<RatFun, LaxError> {
    r.substitute_one(v("f"), &expr("n4")).map_err(|e| match e {
        SymError::DivisionByZero => LaxError::SubstitutionSingular(what.to_string()),
        other => other.into(),
    })
}

pub fn build_kny(family: KnyFamily) -> Result<KnyOperator, LaxError> {
    let p = family.pieces();
    let s = at_f(&expr(p.scalar), "scalar part")?;
    let x = at_f(&expr(p.x_part), "shift-down part")?;
    let y = at_f(&expr(p.y_part), "shift-up part")?;
    let g = expr("g");
    Ok(KnyOperator {
        family,
        c_plus: y.clone(),
        c_zero: s.add(&x.mul(&g)).sub(&y.div(&g)?),
        c_minus: x.neg(),
    })
}

fn split(r: &RatFun, z: Var) -> (UPoly, UPoly) {
    let up = |p: &crate::symkernel::MPoly| {
        UPoly::from_coeffs(p.coeffs_in(z).into_iter().map(RatFun::from_poly).collect())
    };
    (up(r.numer()), up(r.denom()))
}

/// Clear denominators in `z`, drop the common factor, and optionally apply
/// the gauge `u(qz) = (qz - n4) u(z)` that the printed table uses for E3a,
/// E2a and A1w8.
pub fn kny_to_equation(op: &KnyOperator, apply_gauge: bool) -> Result<QDiffEq, LaxError> {
    let z = v("z");
    let parts = [
        split(&op.c_plus, z),
        split(&op.c_minus, z),
        split(&op.c_zero, z),
    ];
    let mut lcm = UPoly::constant(RatFun::one());
    for (_, den) in &parts {
        let g = lcm.gcd(den);
        lcm = lcm.mul(den).exact_div(&g).expect("gcd divides");
    }
    let clear = |(num, den): &(UPoly, UPoly)| num.mul(&lcm.exact_div(den).expect("lcm multiple"));
    let eq = QDiffEq::new(z, clear(&parts[0]), clear(&parts[2]), clear(&parts[1]))?.primitive();
    if apply_gauge && op.family.has_gauge_form() {
        let p = UPoly::from_ratfun(&expr("q*z-n4"), z)?;
        Ok(gauge_linear(&eq, &p)?)
    } else {
        Ok(eq)
    }
}
