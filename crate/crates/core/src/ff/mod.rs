//! Finite fields: F_p, F_{p^k} and a tower of compatible embeddings between
//! the levels, plus dense univariate polynomials with factorization.

mod finite;
mod galois;
mod prime;
mod tower;
mod upoly;

pub use finite::FiniteField;
pub use galois::{FieldElement, GaloisField};
pub use prime::{is_prime, PrimeField};
pub use tower::FieldTower;
pub use upoly::UPoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus of degree {0} is not irreducible")]
    Reducible(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("level {from} does not embed into level {to}")]
    NoEmbedding { from: usize, to: usize },
}
