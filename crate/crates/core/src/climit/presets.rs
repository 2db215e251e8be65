//! Named families `q = 1 + e` whose limits land on each Heun class.
//!
//! Each preset fixes the target limit numbers `b_k, b_k1, b_k0` and ties
//! the equation's parameters to `e` so that those limits come out. Where
//! the equation has an accessory parameter `d`, it is solved from the
//! `x^1` coefficient of the identity part.

use std::collections::HashMap;

use super::{ClimitError, EpsilonFamily, OdeClass};
use crate::lax::{reference_equation, Catalog};
use crate::qdiff::{QDiffEq, Shift};
use crate::symkernel::{expr, RatFun, Var};

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    /// Class of the limit ODE.
    pub class: OdeClass,
    pub summary: &'static str,
    build: fn() -> Result<(QDiffEq, Vec<(&'static str, RatFun)>), ClimitError>,
}

pub const PRESETS: [Preset; 5] = [
    Preset {
        name: "qheun-he",
        class: OdeClass::He,
        summary: "generic quadratic q-equation; limit HE with singular points 0, 1, 2, infinity",
        build: qheun_he,
    },
    Preset {
        name: "murata-a4-che",
        class: OdeClass::Che,
        summary: "Murata A4 row at t = 1; limit CHE after the gauge x^(1/2)",
        build: murata_a4,
    },
    Preset {
        name: "bqhe-bhe",
        class: OdeClass::Bhe,
        summary: "biconfluent pattern with P = 1; limit BHE",
        build: bqhe,
    },
    Preset {
        name: "murata-a5-dhe",
        class: OdeClass::Dhe,
        summary: "Murata A5 row at t = 1; limit DHE",
        build: murata_a5,
    },
    Preset {
        name: "cqhe-reduced",
        class: OdeClass::ReducedChe,
        summary: "reduced confluent pattern; limit CHE with a ramified point at infinity",
        build: cqhe_reduced,
    },
];

impl Preset {
    pub fn by_name(name: &str) -> Result<Preset, ClimitError> {
        PRESETS
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| ClimitError::UnknownPreset(name.to_string()))
    }

    /// The underlying equation and the binding of each parameter to `e`.
    pub fn equation(&self) -> Result<(QDiffEq, HashMap<Var, RatFun>), ClimitError> {
        let (eq, b) = (self.build)()?;
        Ok((eq, b.into_iter().map(|(k, v)| (Var::new(k), v)).collect()))
    }

    pub fn family(&self) -> Result<EpsilonFamily, ClimitError> {
        let (eq, b) = self.equation()?;
        EpsilonFamily::from_equation(&eq, &b)
    }
}

pub fn preset_family(name: &str) -> Result<EpsilonFamily, ClimitError> {
    Preset::by_name(name)?.family()
}

type Built = Result<(QDiffEq, Vec<(&'static str, RatFun)>), ClimitError>;

fn generic() -> Result<QDiffEq, ClimitError> {
    Ok(QDiffEq::from_ratfuns(
        Var::new("x"),
        &expr("al2*x^2+al1*x+al0"),
        &expr("-(be2*x^2+be1*x+be0)"),
        &expr("ga2*x^2+ga1*x+ga0"),
    )?)
}

/// Bindings of the generic equation giving limits `b`, `b1`, `b0`
/// (each listed as `[k=0, k=1, k=2]`).
fn generic_bindings(b: [&str; 3], b1: [&str; 3], b0: [&str; 3]) -> Vec<(&'static str, RatFun)> {
    const AL: [&str; 3] = ["al0", "al1", "al2"];
    const BE: [&str; 3] = ["be0", "be1", "be2"];
    const GA: [&str; 3] = ["ga0", "ga1", "ga2"];
    let mut out = Vec::new();
    for k in 0..3 {
        out.push((AL[k], expr(&format!("({})+e*({})/2", b[k], b1[k]))));
        out.push((GA[k], expr(&format!("({})-e*({})/2", b[k], b1[k]))));
        out.push((BE[k], expr(&format!("2*({})-e^2*({})", b[k], b0[k]))));
    }
    out
}

fn qheun_he() -> Built {
    // b2 x^2 + b1 x + b0 = (x - 1)(x - 2)
    Ok((
        generic()?,
        generic_bindings(["2", "-3", "1"], ["1/2", "-1", "1"], ["0", "-1/2", "1/3"]),
    ))
}

fn cqhe_reduced() -> Built {
    let mut b = generic_bindings(["2", "1", "0"], ["1", "1/2", "0"], ["0", "-1/3", "0"]);
    for (k, v) in b.iter_mut() {
        match *k {
            "al2" | "be2" => *v = RatFun::zero(),
            "ga2" => *v = expr("e^2/4"),
            _ => {}
        }
    }
    Ok((generic()?, b))
}

fn bqhe() -> Built {
    let eq = QDiffEq::from_ratfuns(
        Var::new("x"),
        &RatFun::one(),
        &expr("-(be2*x^2+be1*x+be0)"),
        &expr("ga2*x^2+ga1*x+ga0"),
    )?;
    // b21 = -1, b11 = 1/2, b01 = 1/3; b20 = 1/5, b10 = -1/4, b00 = 0
    let b = vec![
        ("ga2", expr("e")),
        ("ga1", expr("-e/2")),
        ("ga0", expr("1-e/3")),
        ("be2", expr("e-e^2/5")),
        ("be1", expr("-e/2+e^2/4")),
        ("be0", expr("2-e/3")),
    ];
    Ok((eq, b))
}

/// Solve the accessory `d` so that the `x^1` coefficient of the identity
/// part equals `e^2 b10 - P_1 - M_1`.
fn solve_accessory(
    eq: &QDiffEq,
    mut b: Vec<(&'static str, RatFun)>,
    b10: &str,
) -> Built {
    let mut map: HashMap<Var, RatFun> = b.iter().map(|(k, v)| (Var::new(k), v.clone())).collect();
    map.insert(Var::new("q"), expr("1+e"));
    let at = |s: Shift, m: &HashMap<Var, RatFun>| eq.coeff(s, 1).substitute(m);
    let target = expr(&format!("e^2*({b10})"))
        .sub(&at(Shift::P, &map)?)
        .sub(&at(Shift::M, &map)?);
    let dv = Var::new("d");
    map.insert(dv, RatFun::zero());
    let u = at(Shift::Z, &map)?;
    map.insert(dv, RatFun::one());
    let w = at(Shift::Z, &map)?.sub(&u);
    b.push(("d", target.sub(&u).div(&w)?));
    Ok((eq.clone(), b))
}

fn murata_a4() -> Built {
    // b21 = 1, b20 = 1/4, b11 = 1/2, b10 = -1/3, b01 = 1/2, b00 = -1/2;
    // then b1 = 1 and b0 equals the free number A1 = 1.
    let eq = reference_equation(Catalog::Murata, "A4").map_err(|e| ClimitError::UnknownPreset(e.to_string()))?;
    let a = "((1+e)-e/2+e)";
    let s = "((1+e)*((1+e)-e/2)/e)";
    let mut b: Vec<(&'static str, RatFun)> = vec![
        ("t", RatFun::one()),
        ("k1", expr("-(e+e^2/4)/(1+e)^2")),
        ("k2", expr("(1+e)/(1+e/4)")),
        ("a2", expr(&format!("{a}/e"))),
        ("a3", expr(&format!("{s}-(1+e)*{a}/e"))),
    ];
    let bind = |b: &Vec<(&'static str, RatFun)>, text: &str| -> Result<RatFun, ClimitError> {
        let m: HashMap<Var, RatFun> = b.iter().map(|(k, v)| (Var::new(k), v.clone())).collect();
        Ok(expr(text).substitute(&m)?)
    };
    let m0 = bind(&b, "k1*k2*a2*a3")?;
    b.push(("a1", m0.neg().sub(&expr("e/2"))));
    let half_sum = m0.add(&expr("e/4+e^2/4"));
    b.push(("th1", half_sum.clone()));
    b.push(("th2", half_sum));
    solve_accessory(&eq, b, "-1/3")
}

fn murata_a5() -> Built {
    // b21 = 1, b20 = 1/2, b11 = 1/3, b10 = -1/5, b01 = 2, b00 = 0
    let eq = reference_equation(Catalog::Murata, "A5").map_err(|e| ClimitError::UnknownPreset(e.to_string()))?;
    let b = vec![
        ("t", RatFun::one()),
        ("k2", expr("(1+e)/(1+e/2)")),
        ("k1", expr("-e*(1+e/2)/(1+e)")),
        ("a2", expr("(1-e/3)/e")),
        ("a1", expr("-2*e")),
        ("th1", expr("2*e")),
    ];
    solve_accessory(&eq, b, "-1/5")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::climit::{classify_ode, corollary_holds, emit_ode, limit_coefficients};
    use crate::symkernel::{rat, ratio};

    #[test]
    fn every_preset_reaches_its_class() {
        for p in PRESETS {
            let fam = p.family().unwrap();
            let b = limit_coefficients(&fam).unwrap();
            assert!(corollary_holds(&fam, &b), "{}", p.name);
            let ode = classify_ode(&emit_ode(&b).unwrap()).unwrap();
            assert_eq!(ode.class, Some(p.class), "{}: {b}", p.name);
        }
    }

    #[test]
    fn he_limits_are_as_targeted() {
        let b = limit_coefficients(&preset_family("qheun-he").unwrap()).unwrap();
        assert_eq!(b.b, [rat(2), rat(-3), rat(1)]);
        assert_eq!(b.b1, [ratio(1, 2), rat(-1), rat(1)]);
        assert_eq!(b.b0, [rat(0), ratio(-1, 2), ratio(1, 3)]);
    }

    #[test]
    fn a4_limits_are_as_targeted() {
        let b = limit_coefficients(&preset_family("murata-a4-che").unwrap()).unwrap();
        assert_eq!(b.b, [rat(1), rat(1), rat(0)]);
        assert_eq!(b.b1, [ratio(1, 2), ratio(1, 2), rat(1)]);
        assert_eq!(b.b0, [ratio(-1, 2), ratio(-1, 3), ratio(1, 4)]);
        let ode = classify_ode(&emit_ode(&b).unwrap()).unwrap();
        assert_eq!(ode.gauge.unwrap().exact, Some(ratio(1, 2)));
    }

    #[test]
    fn a5_limits_are_as_targeted() {
        let b = limit_coefficients(&preset_family("murata-a5-dhe").unwrap()).unwrap();
        assert_eq!(b.b, [rat(0), rat(1), rat(0)]);
        assert_eq!(b.b1, [rat(2), ratio(1, 3), rat(1)]);
        assert_eq!(b.b0, [rat(0), ratio(-1, 5), ratio(1, 2)]);
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(Preset::by_name("nope"), Err(ClimitError::UnknownPreset(_))));
    }
}
