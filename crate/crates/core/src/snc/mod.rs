//! Combinatorial snc degenerations: strata pieces, covers, motivic volume and
//! reduction, dual complexes and the rationality checks built on them.

mod dual;
pub mod json;
mod model;
mod odp;
mod reducible;

pub use dual::{check_dual_theorem, dual_complex, Cell, ComponentCheck, DualComplex, DualReport, HypothesisViolation};
pub use model::{subset, Component, Piece, SncModel, ValidationReport, Violation};
pub use odp::{odp_semistable, NodeRecord, OdpInput, STRICT};
pub use reducible::{
    reducible_odp_report, FiberComponent, IntersectionPiece, ReducibleFiberInput, ReducibleReport, INCOMPATIBLE,
};

use thiserror::Error;

use crate::ring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SncError {
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
    #[error("unknown component {0}")]
    UnknownComponent(String),
    #[error("model is not reduced; pass semistable data first")]
    NotReduced,
    #[error("odp input: {0}")]
    Odp(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}
