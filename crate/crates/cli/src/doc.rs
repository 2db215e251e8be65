//! JSON documents. Exact values are always strings.

use std::collections::{BTreeMap, HashMap};

use qheun_core::qdiff::QDiffEq;
use qheun_core::symkernel::{fmt_rational, parse_expr, parse_rational, RatFun, Rational, UPoly, Var};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const EQ_FORMAT: &str = "qheun-eq/1";
pub const PARAMS_FORMAT: &str = "qheun-params/1";
pub const FAMILY_FORMAT: &str = "qheun-family/1";
pub const CONVENTION: &str = "P*f(q*x) + Z*f(x) + M*f(x/q) = 0";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationDocument {
    pub format: String,
    pub variable: String,
    pub parameters: Vec<String>,
    pub convention: String,
    #[serde(rename = "P", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub p: BTreeMap<String, String>,
    #[serde(rename = "Z", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub z: BTreeMap<String, String>,
    #[serde(rename = "M", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub m: BTreeMap<String, String>,
}

fn coeff_map(p: &UPoly) -> BTreeMap<String, String> {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k.to_string(), c.to_string()))
        .collect()
}

impl EquationDocument {
    pub fn from_equation(eq: &QDiffEq) -> EquationDocument {
        let mut parameters: Vec<String> = eq.parameters().into_iter().map(|v| v.name().to_string()).collect();
        parameters.sort();
        EquationDocument {
            format: EQ_FORMAT.into(),
            variable: eq.var().name().into(),
            parameters,
            convention: CONVENTION.into(),
            p: coeff_map(eq.p()),
            z: coeff_map(eq.z()),
            m: coeff_map(eq.m()),
        }
    }

    pub fn to_equation(&self) -> Result<QDiffEq, CliError> {
        if self.format != EQ_FORMAT {
            return Err(CliError::usage(format!("expected format {EQ_FORMAT}, found '{}'", self.format)));
        }
        if self.convention != CONVENTION {
            return Err(CliError::usage(format!("unsupported convention '{}'", self.convention)));
        }
        if !is_identifier(&self.variable) {
            return Err(CliError::usage(format!("bad variable name '{}'", self.variable)));
        }
        if let Some(p) = self.parameters.iter().find(|p| !is_identifier(p) || **p == self.variable) {
            return Err(CliError::usage(format!("bad parameter name '{p}'")));
        }
        let universe: Vec<&str> = self.parameters.iter().map(String::as_str).collect();
        let poly = |name: &str, map: &BTreeMap<String, String>| -> Result<UPoly, CliError> {
            let mut c = vec![RatFun::zero(); 4];
            for (deg, text) in map {
                let k: usize = match deg.as_str() {
                    "0" | "1" | "2" | "3" => deg.parse().expect("digit"),
                    _ => return Err(CliError::usage(format!("{name}: degree '{deg}' is not 0..3"))),
                };
                c[k] = parse_expr(text, &universe).map_err(|e| CliError::usage(format!("{name}[{deg}]: {e}")))?;
            }
            Ok(UPoly::from_coeffs(c))
        };
        QDiffEq::new(
            Var::new(&self.variable),
            poly("P", &self.p)?,
            poly("Z", &self.z)?,
            poly("M", &self.m)?,
        )
        .map_err(|e| CliError::domain(e.to_string()))
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|h| h.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingDocument {
    pub format: String,
    pub bindings: BTreeMap<String, String>,
}

impl BindingDocument {
    pub fn from_bindings(b: &HashMap<Var, Rational>) -> BindingDocument {
        BindingDocument {
            format: PARAMS_FORMAT.into(),
            bindings: b.iter().map(|(v, r)| (v.name().to_string(), fmt_rational(r))).collect(),
        }
    }

    /// Check every name against `eq` and parse the values.
    pub fn to_bindings(&self, eq: &QDiffEq) -> Result<HashMap<Var, Rational>, CliError> {
        if self.format != PARAMS_FORMAT {
            return Err(CliError::usage(format!("expected format {PARAMS_FORMAT}, found '{}'", self.format)));
        }
        let params = eq.parameters();
        let mut out = HashMap::new();
        for (name, text) in &self.bindings {
            if !is_identifier(name) {
                return Err(CliError::usage(format!("bad parameter name '{name}'")));
            }
            let v = Var::new(name);
            if !params.contains(&v) && name != "q" {
                return Err(CliError::usage(format!("'{name}' is not a parameter of the equation")));
            }
            let r = parse_rational(text).map_err(|e| CliError::usage(format!("{name}: {e}")))?;
            out.insert(v, r);
        }
        Ok(out)
    }
}

/// An equation whose parameters are expressions in `e`, with `q = 1 + e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub format: String,
    pub equation: EquationDocument,
    pub bindings: BTreeMap<String, String>,
}

impl FamilyDocument {
    pub fn new(eq: &QDiffEq, bindings: &HashMap<Var, RatFun>) -> FamilyDocument {
        FamilyDocument {
            format: FAMILY_FORMAT.into(),
            equation: EquationDocument::from_equation(eq),
            bindings: bindings.iter().map(|(v, r)| (v.name().to_string(), r.to_string())).collect(),
        }
    }

    pub fn to_parts(&self) -> Result<(QDiffEq, HashMap<Var, RatFun>), CliError> {
        if self.format != FAMILY_FORMAT {
            return Err(CliError::usage(format!("expected format {FAMILY_FORMAT}, found '{}'", self.format)));
        }
        let eq = self.equation.to_equation()?;
        let mut b = HashMap::new();
        for (name, text) in &self.bindings {
            if !self.equation.parameters.contains(name) || name == "q" {
                return Err(CliError::usage(format!("'{name}' cannot be bound here")));
            }
            let r = parse_expr(text, &["e"]).map_err(|e| CliError::usage(format!("{name}: {e}")))?;
            b.insert(Var::new(name), r);
        }
        Ok((eq, b))
    }
}

