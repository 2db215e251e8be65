//! Exact symbolic kernel: rationals, sparse polynomials, unreduced rational
//! functions, univariate polynomials over them, and the expression parser.

mod mpoly;
mod parse;
mod qpoly;
mod ratfun;
mod upoly;
mod var;

pub use mpoly::{fmt_rational, grlex_by_name, MPoly, Monomial};
pub use parse::{parse_expr, parse_expr_free, parse_rational};
pub use qpoly::{rational_cbrt, rational_sqrt, QPoly};
pub use ratfun::{substitute_poly, RatFun};
pub use upoly::UPoly;
pub use var::Var;

use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown parameter '{0}'")]
    UnknownParameter(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("limit diverges as {0} -> 0")]
    DivergesAtZero(String),
    #[error("expression is not a polynomial in {0}")]
    NotPolynomial(String),
    #[error("parameter '{0}' is unbound")]
    Unbound(String),
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Parse an expression that is known to be well formed (catalog tables).
pub fn expr(text: &str) -> RatFun {
    parse_expr_free(text).unwrap_or_else(|e| panic!("bad built-in expression '{text}': {e}"))
}
