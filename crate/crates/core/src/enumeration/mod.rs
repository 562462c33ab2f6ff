//! Enumeration of superspecial curves up to isomorphism: the Groebner
//! computation of all superspecial quadrics over each supersingular cubic,
//! bielliptic involutions and elliptic quotients, isomorphism tests and the
//! resulting classification.

mod classify;
mod isomorphism;
mod quotients;
mod superspecial;

pub use classify::{
    check_radicality, classify_curve, classify_type, enumerate, solutions_for_model, ClassSummary, ClassifiedCurve, Counts,
    CurveType, EnumerateOptions, EnumerationReport, ModelSummary, RadicalityWitness, TRANSLATION_ORDER,
};
pub use isomorphism::{
    all_cover_keys, cover_key, is_isomorphic, is_isomorphic_as_covers, on_representative, representative_model, CoverKey,
};
pub use quotients::{
    bielliptic_involutions, elliptic_quotients, has_second_quotient_on, second_quotient_ideal, quotient_datum, twist_onto, twist_unit, Involution, QuotientDatum,
};
pub use superspecial::{chart_ideal, list_superspecial_for_model, ChartIdeal, ChartSolution};

use thiserror::Error;

use crate::curves::CurveError;
use crate::groebner::GroebnerError;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("i/o error: {0}")]
    Io(String),
}
