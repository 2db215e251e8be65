//! The printed summary tables, the accessory formulas, and the support
//! sets drawn in the Newton-diagram figures.

use std::collections::BTreeSet;
use std::fmt;

use super::kny::KnyFamily;
use super::murata::{accessory_formula, MurataFamily};
use super::{v, LaxError};
use crate::qdiff::{QDiffEq, Shift};
use crate::symkernel::{expr, RatFun};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Catalog {
    Murata,
    Kny,
}

impl Catalog {
    pub fn id(self) -> &'static str {
        match self {
            Catalog::Murata => "murata",
            Catalog::Kny => "kny",
        }
    }

    pub fn from_id(id: &str) -> Result<Catalog, LaxError> {
        match id {
            "murata" => Ok(Catalog::Murata),
            "kny" => Ok(Catalog::Kny),
            other => Err(LaxError::UnknownFamily(other.to_string())),
        }
    }

    pub fn families(self) -> Vec<&'static str> {
        match self {
            Catalog::Murata => MurataFamily::ALL.iter().map(|f| f.id()).collect(),
            Catalog::Kny => KnyFamily::ALL.iter().map(|f| f.id()).collect(),
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// (P, Z, M) as printed, Z already carrying the sign of the convention.
fn murata_row(f: MurataFamily) -> [&'static str; 3] {
    use MurataFamily::*;
    match f {
        A4 => ["q*x-a1*t", "-(q^2*k1*x^2+d*x+(th1+th2)*t)", "k1*k2*(q*x-a3)*(x-a2*t)"],
        A5 => ["x-a1*t", "-(q*k1*x^2-d*x+th1*t)", "k1*k2*x*(x-a2*t)"],
        A5s => ["q*x-a1*t", "-(q^2*k1*x^2+d*x+th1*t)", "k1*k2*x*(q*x-a3)"],
        A6 => ["x-a1*t", "-(q*k1*x^2-d*x+th1*t)", "k1*k2*x^2"],
        A6s => ["q^2*x-a3", "-(q^2*k1*x^2-d*x+th1*t)", "k1*k2*x^2"],
        A7 => ["q*x", "-(q^2*k1*x^2-q*th1*t*d*x+th1*t)", "q*k1*k2*x^2"],
        A7p => ["1", "-q*(q*k1*x^2+q*k1*k2*d*x+th1*t)", "q*k1*k2*x^2"],
    }
}

fn kny_row(f: KnyFamily) -> [&'static str; 3] {
    use KnyFamily::*;
    match f {
        D5 => [
            "(z-k1/n7)*(z-k1/n8)/(n1*n2)",
            "-((1/n1+1/n2)*z^2-((n3*n7-k1)*(n4*n7-k1)/(n1*n2*n4*n7*n8*g)+n4/n1+n4/n2+q*n3*n5/k2+q*n3*n6/k2)*z+q*n3*n4*(n5+n6)/k2)",
            "(z-q*n3)*(z-n4)",
        ],
        A4w => [
            "(z-k1/n7)*(z-k1/n8)",
            "-n1*z^2+d*z-k1^2*k2*(n5+n6)/(n5*n6*n7*n8)",
            "q*n1*n2*n3*(z-n4)",
        ],
        E3a => [
            "(k1/n8)*(q*z-n4)*(z-k1/n7)",
            "n1*z^2+d*z+k1^2*k2*(n5+n6)/(n5*n6*n7*n8)",
            "q*n1*n2*n3",
        ],
        E3b => [
            "z*(z-k1/n8)",
            "-n1*z^2+q*d*z-q*n1*n2*n3*n4*n5/k2",
            "q*n1*n2*n3*(z-n4)",
        ],
        E2a => [
            "(k1/n8)*z*(q*z-n4)",
            "n1*z^2+d*z+q*n1*n2*n3*n4*n5/k2",
            "q*n1*n2*n3",
        ],
        E2b => ["z*(z-k1/n8)", "-n1*z^2+d*z", "-q*n1*n2*n3*(z-n4)"],
        A1w => ["z*(z-k1/n8)", "d*z", "-q*n1*n2*n3*(z-n4)"],
        A1w8 => ["(k1/n8)*z*(q*z-n4)", "n1*z^2-d*z", "q*n1*n2*n3"],
    }
}

/// Printed formula for `d` in terms of `g`.
pub fn kny_accessory_formula(f: KnyFamily) -> RatFun {
    use KnyFamily::*;
    expr(match f {
        D5 => "d",
        A4w => "n1*(q*n2*n3*(n5+n6)+k2*n4)/(q*k2)+(k1-n4*n7)*(k1-n4*n8)/(q*n4*n7*n8*g)",
        E3a => "-n1*(n2*n3*(n5+n6)+k2*n4)/k2+k1*(k1-n4*n7)/(q*n4*n7*n8*g)",
        E3b => "n1*(q*n2*n3*n5+k2*n4)/(q*k2)+(k1-n4*n8)/(q*n8*g)",
        E2a => "n1*(q*n2*n3*n5+k2*n4)/(q*k2)+k1/(q*n8*g)",
        E2b => "n1*n4/q+(k1-n4*n8)/(q*n8*g)",
        A1w => "(k1-n4*n8)/(q*n8*g)",
        A1w8 => "n1*n4/q+k1/(q*n8*g)",
    })
}

pub fn accessory(catalog: Catalog, family: &str) -> Result<RatFun, LaxError> {
    Ok(match catalog {
        Catalog::Murata => accessory_formula(MurataFamily::from_id(family)?),
        Catalog::Kny => kny_accessory_formula(KnyFamily::from_id(family)?),
    })
}

/// The table equation with `d` (and `g`) left free.
pub fn reference_equation(catalog: Catalog, family: &str) -> Result<QDiffEq, LaxError> {
    let (row, var) = match catalog {
        Catalog::Murata => (murata_row(MurataFamily::from_id(family)?), v("x")),
        Catalog::Kny => (kny_row(KnyFamily::from_id(family)?), v("z")),
    };
    Ok(QDiffEq::from_ratfuns(
        var,
        &expr(row[0]),
        &expr(row[1]),
        &expr(row[2]),
    )?)
}

/// Filled circles of the figure, rows given top (degree 2) to bottom,
/// columns M Z P.
fn figure_rows(catalog: Catalog, family: &str) -> Result<[&'static str; 3], LaxError> {
    Ok(match catalog {
        Catalog::Murata => match MurataFamily::from_id(family)? {
            MurataFamily::A4 => ["##o", "###", "###"],
            MurataFamily::A5 | MurataFamily::A5s => ["##o", "###", "o##"],
            MurataFamily::A6 | MurataFamily::A6s => ["##o", "o##", "o##"],
            MurataFamily::A7 => ["##o", "o##", "o#o"],
            MurataFamily::A7p => ["##o", "o#o", "o##"],
        },
        Catalog::Kny => match KnyFamily::from_id(family)? {
            KnyFamily::D5 => ["###", "###", "###"],
            KnyFamily::A4w => ["o##", "###", "###"],
            KnyFamily::E3a => ["o##", "o##", "###"],
            KnyFamily::E3b => ["o##", "###", "##o"],
            KnyFamily::E2a => ["o##", "o##", "##o"],
            KnyFamily::E2b => ["o##", "###", "#oo"],
            KnyFamily::A1w => ["oo#", "###", "#oo"],
            KnyFamily::A1w8 => ["o##", "o##", "#oo"],
        },
    })
}

pub fn figure_support(catalog: Catalog, family: &str) -> Result<BTreeSet<(Shift, u32)>, LaxError> {
    let rows = figure_rows(catalog, family)?;
    let mut out = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        let deg = 2 - i as u32;
        for (c, ch) in row.chars().enumerate() {
            if ch == '#' {
                out.insert((Shift::ALL[c], deg));
            }
        }
    }
    Ok(out)
}
