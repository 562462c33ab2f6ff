//! Sparse multivariate polynomials over any coefficient ring, with
//! resultants, discriminants and a JSON/text interchange format.

mod monomial;
mod parse;
mod poly;
mod resultant;

pub use monomial::{Monomial, MonomialOrder, SortKey, MAX_VARS};
pub use poly::{MPoly, PolyRing};
pub use resultant::{
    bezout_matrix, det_bareiss, det_expand, discriminant, resultant, resultant_bezout, sylvester_matrix,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MpolyError {
    #[error("too many variables ({0}); at most {MAX_VARS} are supported")]
    TooManyVars(usize),
    #[error("variable `{0}` is not in the ring")]
    UnknownVariable(String),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("division is not exact")]
    NotDivisible,
    #[error("both polynomials are constant in the elimination variable")]
    BothConstant,
    #[error("variable `{0}` still occurs and cannot be dropped")]
    VariableInUse(String),
    #[error("parse error: {0}")]
    Parse(String),
}
