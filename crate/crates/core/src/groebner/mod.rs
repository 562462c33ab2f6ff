//! Buchberger's algorithm with the Gebauer-Moeller criteria, normal forms,
//! staircases and zero-dimensional solving.

mod buchberger;
mod elimination;
mod solve;

pub use buchberger::{groebner_basis, GroebnerBasis};
pub use elimination::elimination;
pub use solve::{solve_zero_dim, ZeroDimSolution};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("generators belong to different polynomial rings")]
    RingMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("ideal is not zero-dimensional: no leading monomial is a pure power of `{0}`")]
    NotZeroDimensional(String),
    #[error("quotient dimension {0} exceeds the limit {1}")]
    TooLarge(usize, usize),
    #[error("solution check failed: a generator does not vanish at a computed point")]
    Inconsistent,
}
