//! Exact arithmetic over the rationals: Laurent polynomials, rational
//! functions with factored denominators, truncated power series and small
//! dense matrices.
//!
//! Every value references a [`VarTable`]; mixing tables is a structural error.
//! There is no floating point anywhere in this module.

mod laurent;
mod linalg;
mod ratfun;
mod series;
mod vars;

pub use laurent::{LaurentPoly, Monomial};
pub use linalg::Matrix;
pub use ratfun::RationalFunction;
pub use series::{series_expand, TruncatedSeries};
pub use vars::{VarId, VarTable};

use num_rational::BigRational;
use thiserror::Error;

/// Arbitrary-precision rational coefficient.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("operands reference different variable tables")]
    VarTableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("series expansion in `{0}` has a pole at the origin")]
    PoleAtOrigin(String),
    #[error("substitution makes a denominator identically zero")]
    DegenerateSubstitution,
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, ExactError>;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
