//! Murata's matrices `A(x,t)` with `Y(qx) = A(x) Y(x)`, elimination to a
//! scalar equation for `y1`, and the specializations of `(l, m)` that make
//! it a degenerate q-Heun equation.

use std::collections::HashMap;
use std::fmt;

use super::{build_expr, v, LaxError};
use crate::gauge::{gauge_linear, rebase_steps};
use crate::qdiff::QDiffEq;
use crate::symkernel::{expr, RatFun, UPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MurataFamily {
    A4,
    A5,
    A5s,
    A6,
    A6s,
    A7,
    A7p,
}

impl MurataFamily {
    pub const ALL: [MurataFamily; 7] = [
        MurataFamily::A4,
        MurataFamily::A5,
        MurataFamily::A5s,
        MurataFamily::A6,
        MurataFamily::A6s,
        MurataFamily::A7,
        MurataFamily::A7p,
    ];

    pub fn id(self) -> &'static str {
        match self {
            MurataFamily::A4 => "A4",
            MurataFamily::A5 => "A5",
            MurataFamily::A5s => "A5s",
            MurataFamily::A6 => "A6",
            MurataFamily::A6s => "A6s",
            MurataFamily::A7 => "A7",
            MurataFamily::A7p => "A7p",
        }
    }

    pub fn from_id(id: &str) -> Result<MurataFamily, LaxError> {
        MurataFamily::ALL
            .into_iter()
            .find(|f| f.id() == id)
            .ok_or_else(|| LaxError::UnknownFamily(id.to_string()))
    }

    fn data(self) -> FamilyData {
        use MurataFamily::*;
        let generic_delta = "(al*l+mu1)*(k2*l-mu2)/l";
        match self {
            A4 => FamilyData {
                mu1: "(l-a1*t)*(l-a2*t)/(q*k1*m)",
                mu2: "q*k1*k2*m*(l-a3)",
                theta_t: "(th1+th2)*t",
                alpha: "((((th1+th2)*t-k1*mu1-mu2)/l)+k2)/k1",
                gamma: "mu2-k2*((2*l+al)-(a1+a2)*t-a3)",
                delta: "-(k2*a1*a2*a3*t^2-(al*l+mu1)*(k2*l-mu2))/l",
                a22: "k2*(x-l)+mu2",
                det: "k1*k2*(x-a1*t)*(x-a2*t)*(x-a3)",
                det0: "th1*th2*t^2",
            },
            A5 => FamilyData {
                mu1: "(l-a1*t)*(l-a2*t)/(q*k1*m)",
                mu2: "q*k1*k2*m*l",
                theta_t: "th1*t",
                alpha: "(((th1*t-k1*mu1-mu2)/l)+k2)/k1",
                gamma: "mu2-k2*((2*l+al)-(a1+a2)*t)",
                delta: generic_delta,
                a22: "k2*(x-l)+mu2",
                det: "k1*k2*x*(x-a1*t)*(x-a2*t)",
                det0: "0",
            },
            A5s => FamilyData {
                mu1: "l*(l-a1*t)/(q*k1*m)",
                mu2: "q*k1*k2*m*(l-a3)",
                theta_t: "th1*t",
                alpha: "(((th1*t-k1*mu1-mu2)/l)+k2)/k1",
                gamma: "mu2-k2*(2*l+al-a1*t-a3)",
                delta: generic_delta,
                a22: "k2*(x-l)+mu2",
                det: "k1*k2*x*(x-a1*t)*(x-a3)",
                det0: "0",
            },
            A6 => FamilyData {
                mu1: "l*(l-a1*t)/(q*k1*m)",
                mu2: "q*k1*k2*m*l",
                theta_t: "th1*t",
                alpha: "(((th1*t-k1*mu1-mu2)/l)+k2)/k1",
                gamma: "mu2-k2*(2*l+al-a1*t)",
                delta: generic_delta,
                a22: "k2*(x-l)+mu2",
                det: "k1*k2*x^2*(x-a1*t)",
                det0: "0",
            },
            A6s => FamilyData {
                mu1: "l^2/(q*k1*m)",
                mu2: "q*k1*k2*m*(l-a3)",
                theta_t: "th1*t",
                alpha: "(((th1*t-k1*mu1-mu2)/l)+k2)/k1",
                gamma: "mu2-k2*(2*l+al-a3)",
                delta: generic_delta,
                a22: "k2*(x-l)+mu2",
                det: "k1*k2*x^2*(x-a3)",
                det0: "0",
            },
            A7 => FamilyData {
                mu1: "l^2/(q*k1*m)",
                mu2: "q*k1*k2*m*l",
                theta_t: "th1*t",
                alpha: "(((th1*t-k1*mu1-mu2)/l)+k2)/k1",
                gamma: "mu2-k2*(2*l+al)",
                delta: generic_delta,
                a22: "k2*(x-l)+mu2",
                det: "k1*k2*x^3",
                det0: "0",
            },
            A7p => FamilyData {
                mu1: "l^2/(q*k1*m)",
                mu2: "q*k1*k2*m",
                theta_t: "th1*t",
                alpha: "((th1*t-k1*mu1-mu2)/l)/k1",
                gamma: "mu2-k2",
                delta: "-mu2*(al*l+mu1)/l",
                a22: "mu2",
                det: "k1*k2*x^2",
                det0: "0",
            },
        }
    }

    /// Parameters of the family (besides `q`, `x`, `w`, `l`, `m`).
    pub fn parameters(self) -> &'static [&'static str] {
        use MurataFamily::*;
        match self {
            A4 => &["k1", "k2", "th1", "th2", "a1", "a2", "a3", "t"],
            A5 => &["k1", "k2", "th1", "a1", "a2", "t"],
            A5s => &["k1", "k2", "th1", "a1", "a3", "t"],
            A6 => &["k1", "k2", "th1", "a1", "t"],
            A6s => &["k1", "k2", "th1", "a3", "t"],
            A7 | A7p => &["k1", "k2", "th1", "t"],
        }
    }

    /// Stated value of `det A(x,t)`.
    pub fn det_formula(self) -> RatFun {
        expr(self.data().det)
    }

    /// Stated eigenvalue data of `A(0,t)`: (trace, determinant).
    pub fn eigen_data(self) -> (RatFun, RatFun) {
        let d = self.data();
        (expr(d.theta_t), expr(d.det0))
    }

    /// For A4 the eigenvalue constraint `th1 th2 = -k1 k2 a1 a2 a3`,
    /// solved for `th2`.
    pub fn constraint(self) -> HashMap<Var, RatFun> {
        let mut m = HashMap::new();
        if self == MurataFamily::A4 {
            m.insert(v("th2"), expr("-k1*k2*a1*a2*a3/th1"));
        }
        m
    }
}

impl fmt::Display for MurataFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

struct FamilyData {
    mu1: &'static str,
    mu2: &'static str,
    theta_t: &'static str,
    alpha: &'static str,
    gamma: &'static str,
    delta: &'static str,
    a22: &'static str,
    det: &'static str,
    det0: &'static str,
}

#[derive(Clone, Debug)]
pub struct LaxMatrix {
    pub family: MurataFamily,
    pub a11: RatFun,
    pub a12: RatFun,
    pub a21: RatFun,
    pub a22: RatFun,
}

impl LaxMatrix {
    pub fn det(&self) -> RatFun {
        self.a11.mul(&self.a22).sub(&self.a12.mul(&self.a21))
    }

    pub fn trace(&self) -> RatFun {
        self.a11.add(&self.a22)
    }

    pub fn at(&self, x: &RatFun) -> Result<LaxMatrix, LaxError> {
        let xv = v("x");
        Ok(LaxMatrix {
            family: self.family,
            a11: self.a11.substitute_one(xv, x)?,
            a12: self.a12.substitute_one(xv, x)?,
            a21: self.a21.substitute_one(xv, x)?,
            a22: self.a22.substitute_one(xv, x)?,
        })
    }

    pub fn substitute(&self, b: &HashMap<Var, RatFun>) -> Result<LaxMatrix, LaxError> {
        Ok(LaxMatrix {
            family: self.family,
            a11: self.a11.substitute(b)?,
            a12: self.a12.substitute(b)?,
            a21: self.a21.substitute(b)?,
            a22: self.a22.substitute(b)?,
        })
    }
}

/// Build the matrix with all parameters free, then apply `bindings`.
pub fn build_murata(
    family: MurataFamily,
    bindings: &HashMap<Var, RatFun>,
) -> Result<LaxMatrix, LaxError> {
    let d = family.data();
    let mut h = HashMap::new();
    h.insert(v("mu1"), build_expr(d.mu1, &HashMap::new()));
    h.insert(v("mu2"), build_expr(d.mu2, &HashMap::new()));
    let al = build_expr(d.alpha, &h);
    h.insert(v("al"), al);
    let ga = build_expr(d.gamma, &h);
    let de = build_expr(d.delta, &h);
    h.insert(v("ga"), ga);
    h.insert(v("de"), de);
    let m = LaxMatrix {
        family,
        a11: build_expr("k1*((x-l)*(x-al)+mu1)", &h),
        a12: build_expr("w*(x-l)", &h),
        a21: build_expr("k1*(ga*x+de)/w", &h),
        a22: build_expr(d.a22, &h),
    };
    check_invariants(&m)?;
    if bindings.is_empty() {
        Ok(m)
    } else {
        let bound = m.substitute(bindings)?;
        if bound.a12.is_zero() {
            return Err(LaxError::InvariantViolation("A12 vanishes".into()));
        }
        Ok(bound)
    }
}

fn check_invariants(m: &LaxMatrix) -> Result<(), LaxError> {
    let f = m.family;
    if !m.det().ratfun_eq(&f.det_formula()) {
        return Err(LaxError::InvariantViolation(format!("{f}: det A(x,t)")));
    }
    let c = f.constraint();
    let zero = m.at(&RatFun::zero())?.substitute(&c)?;
    let (tr, dt) = f.eigen_data();
    if !zero.trace().ratfun_eq(&tr.substitute(&c)?) {
        return Err(LaxError::InvariantViolation(format!("{f}: trace A(0,t)")));
    }
    if !zero.det().ratfun_eq(&dt.substitute(&c)?) {
        return Err(LaxError::InvariantViolation(format!("{f}: det A(0,t)")));
    }
    Ok(())
}

/// A relation `up*y(q^2 x) + mid*y(qx) + down*y(x) = 0`.
#[derive(Clone, Debug)]
pub struct ShiftRelation {
    pub var: Var,
    pub up: RatFun,
    pub mid: RatFun,
    pub down: RatFun,
}

impl ShiftRelation {
    pub fn map(&self, f: impl Fn(&RatFun) -> Result<RatFun, LaxError>) -> Result<ShiftRelation, LaxError> {
        Ok(ShiftRelation {
            var: self.var,
            up: f(&self.up)?,
            mid: f(&self.mid)?,
            down: f(&self.down)?,
        })
    }

    pub fn substitute(&self, b: &HashMap<Var, RatFun>) -> Result<ShiftRelation, LaxError> {
        self.map(|r| Ok(r.substitute(b)?))
    }

    pub fn variables(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.up.variables();
        s.extend(self.mid.variables());
        s.extend(self.down.variables());
        s
    }

    /// Read as a `QDiffEq` in the unknown `F(x) = y(qx)`; all three
    /// coefficients must be polynomial in the variable.
    pub fn to_qdiff(&self) -> Result<QDiffEq, LaxError> {
        Ok(QDiffEq::from_ratfuns(self.var, &self.up, &self.mid, &self.down)?)
    }
}

/// Eliminate `y2` from `Y(qx) = A(x) Y(x)`.
pub fn scalar_reduce(m: &LaxMatrix) -> Result<ShiftRelation, LaxError> {
    let qx = expr("q*x");
    let shifted = m.at(&qx)?;
    let ratio = shifted.a12.div(&m.a12)?;
    let mid = shifted.a11.add(&ratio.mul(&m.a22)).neg();
    let down = ratio.mul(&m.det());
    Ok(ShiftRelation {
        var: v("x"),
        up: RatFun::one(),
        mid,
        down,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecializeVariant {
    Paper,
    Alt,
}

enum Step {
    /// Substitute a value for `l`.
    SetLambda(&'static str),
    /// Substitute `m` in terms of `l` and `d`, then let `l -> 0`.
    SetMuLimit(&'static str),
}

struct Recipe {
    step: Step,
    /// Write `y1(x) = (x/q - a1 t) y(x)` before stripping.
    pre_divide: bool,
    /// `p` in `u(qx) = p(x) u(x)`, applied to the re-based equation.
    strip: Option<&'static str>,
}

fn recipe(family: MurataFamily, variant: SpecializeVariant) -> Result<Recipe, LaxError> {
    use MurataFamily::*;
    use SpecializeVariant::*;
    let r = match (family, variant) {
        (A4, Paper) => Recipe {
            step: Step::SetLambda("a3"),
            pre_divide: false,
            strip: Some("x-a1*t"),
        },
        (A5, Paper) => Recipe {
            step: Step::SetLambda("a1*t"),
            pre_divide: true,
            strip: Some("x/q-a1*t"),
        },
        (A5, Alt) => Recipe {
            step: Step::SetMuLimit("a1*a2*t/(q*th1)+d*l"),
            pre_divide: false,
            strip: None,
        },
        (A5s, Paper) => Recipe {
            step: Step::SetLambda("a3"),
            pre_divide: false,
            strip: Some("x-a1*t"),
        },
        (A6, Paper) => Recipe {
            step: Step::SetLambda("a1*t"),
            pre_divide: true,
            strip: Some("x/q-a1*t"),
        },
        (A6, Alt) => Recipe {
            step: Step::SetMuLimit("l*(l-a1*t)*(1+d*l)/(q*th1*t)"),
            pre_divide: false,
            strip: None,
        },
        (A6s, Paper) => Recipe {
            step: Step::SetLambda("a3"),
            pre_divide: false,
            strip: Some("q*x-a3"),
        },
        (A7, _) => Recipe {
            step: Step::SetMuLimit("l^2*(1+d*l)/(q*th1*t)"),
            pre_divide: false,
            strip: Some("x"),
        },
        (A7p, _) => Recipe {
            step: Step::SetMuLimit("th1*t/(q*k1*k2)+d*l"),
            pre_divide: false,
            strip: None,
        },
        (f, Alt) => return Err(LaxError::NoAltVariant(f.id().to_string())),
    };
    Ok(r)
}

/// Apply the `(l, m)` restriction only, returning the `y1` relation.
pub fn restrict(
    family: MurataFamily,
    variant: SpecializeVariant,
    rel: &ShiftRelation,
) -> Result<ShiftRelation, LaxError> {
    let r = recipe(family, variant)?;
    let l = v("l");
    match r.step {
        Step::SetLambda(val) => {
            let mut b = HashMap::new();
            b.insert(l, expr(val));
            rel.substitute(&b)
        }
        Step::SetMuLimit(val) => {
            let mut b = HashMap::new();
            b.insert(v("m"), expr(val));
            rel.substitute(&b)?.map(|c| Ok(c.limit_at_zero(l)?))
        }
    }
}

/// The paper's restriction, factor strip and re-basing, producing the
/// f-equation.
pub fn specialize(
    family: MurataFamily,
    variant: SpecializeVariant,
    rel: &ShiftRelation,
) -> Result<QDiffEq, LaxError> {
    let r = recipe(family, variant)?;
    let mut rel = restrict(family, variant, rel)?;
    if r.pre_divide {
        // y1(x) = u(x) y(x) with u(x) = x/q - a1 t, then clear (qx - a1 t)
        let u2 = expr("q*x-a1*t");
        let u1 = expr("x-a1*t");
        let u0 = expr("x/q-a1*t");
        rel = ShiftRelation {
            var: rel.var,
            up: rel.up.mul(&u2).div(&u2)?,
            mid: rel.mid.mul(&u1).div(&u2)?,
            down: rel.down.mul(&u0).div(&u2)?,
        };
    }
    let eq = rel.to_qdiff()?;
    match r.strip {
        None => Ok(eq),
        Some(p) => {
            let p = UPoly::from_ratfun(&expr(p), rel.var)?;
            let stripped = gauge_linear(&rebase_steps(&eq, 1), &p)?;
            Ok(rebase_steps(&stripped, -1))
        }
    }
}

/// The printed accessory formula for `d` in terms of `m` (or `d` itself
/// where `d` enters through the substitution for `m`).
pub fn accessory_formula(family: MurataFamily) -> RatFun {
    use MurataFamily::*;
    expr(match family {
        A4 => "q*k1*a3+q*(th1+th2)*t/a3-(a3-a1*t)*(a3-a2*t)/(m*a3)",
        A5 | A6 => "q*k1*a1*t+th1/a1-q*k1*k2*m",
        A5s => "q*k1*a3+q*th1*t/a3-(a3-a1*t)/m",
        A6s => "q*k1*a3+q*th1*t/a3-a3/m",
        A7 | A7p => "d",
    })
}
