//! Exact arithmetic substrate: rationals, sparse multivariate polynomials,
//! unreduced rational functions and the plain-text polynomial format.

mod gcd;
mod parse;
mod poly;
pub mod rat;
mod ratfunc;
mod unipoly;

pub use gcd::gcd;
pub use parse::{identifiers, parse_poly};
pub use poly::{Exp, MultiPoly, Ring};
pub use rat::BigRat;
pub use ratfunc::RatFunc;
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("zero denominator in substitution")]
    ZeroDenominator,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("order of zero polynomial")]
    OrderOfZero,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
