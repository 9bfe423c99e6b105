//! Exact polynomial arithmetic over Q and simple number fields.

mod multi;
mod parse;
mod scalar;
mod uni;

use thiserror::Error;

pub use multi::{jacobian2, Degree, Monomial, MultiPoly};
pub use parse::{parse_in, parse_polynomial, parse_univariate, ParseError};
pub use scalar::{fmt_rational, parse_rational, AlgebraicNumber, NumberField, Scalar};
pub use uni::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("coefficients live in different number fields")]
    DomainMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected a polynomial in two variables, got {0}")]
    NotBivariate(usize),
    #[error("invalid number field modulus: {0}")]
    InvalidModulus(String),
}
