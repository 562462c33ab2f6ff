//! Elliptic curves, the genus-4 double covers `V(P, Q)` and their
//! invariants: nonsingularity certificates, branch points and Hasse-Witt
//! matrices.

mod dcec;
mod f2;
mod hasse_witt;
mod model;

pub use dcec::{DcecInstance, SixPoints};
pub use f2::{
    delta_char0_sylvester, f2_char0, f2_char0_cached, f2_fixed_ab, f2_fixed_ab_direct, f2_mod_p, f3_poly, g_poly, invariant_ring,
    F2_VARS,
};
pub use hasse_witt::{hasse_witt_numeric, hasse_witt_symbolic, hasse_witt_target, E_MATRIX};
pub use model::{model_for_j, supersingular_count, supersingular_models, CurveAt, EllipticModel, Point};

use thiserror::Error;

use crate::ff::FfError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FfError),
    #[error("p must be prime ≥ 5 (got {0})")]
    BadPrime(u32),
    #[error("4A^3 + 27B^2 vanishes: the cubic is singular")]
    SingularModel,
    #[error("the curve is singular")]
    SingularCurve,
    #[error("the quadric vanishes identically on the cubic")]
    DegenerateQuadric,
    #[error("malformed curve data: {0}")]
    Malformed(String),
    #[error("cache error: {0}")]
    Cache(String),
}
