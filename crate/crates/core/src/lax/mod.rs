//! Lax data of q-Painlevé equations and the scalar equations they produce:
//! Murata's 2x2 matrices, the KNY operators `L1` at `f = n4`, the printed
//! summary tables, and a harness comparing derivation against table.
//!
//! ASCII names: k1 k2 (kappa), th1 th2 (theta), a1 a2 a3, n1..n8 (nu),
//! l (lambda), m (mu), w (omega), t, d, g, q; `x` is the Murata variable and
//! `z` the KNY one.

pub mod kny;
pub mod murata;
pub mod reference;
pub mod verify;

use std::collections::HashMap;

use thiserror::Error;

use crate::qdiff::QDiffError;
use crate::symkernel::{parse_expr_free, RatFun, SymError, Var};

pub use kny::{build_kny, kny_to_equation, KnyFamily, KnyOperator};
pub use murata::{
    build_murata, scalar_reduce, specialize, LaxMatrix, MurataFamily, ShiftRelation,
    SpecializeVariant,
};
pub use reference::{reference_equation, Catalog};
pub use verify::{verify_all, verify_family, AccessorySign, FamilyReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaxError {
    #[error("catalog invariant violated: {0}")]
    InvariantViolation(String),
    #[error("substitution makes a denominator vanish: {0}")]
    SubstitutionSingular(String),
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("family {0} has no alternative specialization")]
    NoAltVariant(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    QDiff(#[from] QDiffError),
}

/// Parse a catalog expression, then replace the named helper symbols.
pub(crate) fn build_expr(text: &str, helpers: &HashMap<Var, RatFun>) -> RatFun {
    let raw = parse_expr_free(text).unwrap_or_else(|e| panic!("catalog expression '{text}': {e}"));
    if helpers.is_empty() {
        raw
    } else {
        raw.substitute(helpers)
            .unwrap_or_else(|e| panic!("catalog expression '{text}': {e}"))
    }
}

pub(crate) fn v(name: &str) -> Var {
    Var::new(name)
}
