//! Logarithmic fans: points with characteristic cones, the covector `t̄` and
//! stratum classes; volume, star subdivisions, products and the Euler count
//! over subdivisions of a cone.

mod euler;
pub mod json;
pub mod lattice;
mod point;
mod product;
mod subdivision;

pub use euler::{all_faces, check_euler, euler_counts, iterated_refinement, maximal_cones, stellar, EulerCheck, SubdivisionProblem};
pub use point::{FanPoint, LogFan, Ranks};
pub use product::product_fan;
pub use subdivision::{add_horizontal_divisor, apply_plan, check_subdivision_invariance, star_subdivide, InvarianceReport, PlanStep};

use thiserror::Error;

use crate::ring::RingError;
use crate::snc::SncError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("point {index}: {message}")]
    InvalidPoint { index: usize, message: String },
    #[error("t_bar is negative on ray {0:?}")]
    NegativeOnRay(Vec<i64>),
    #[error("t_bar vanishes on the cone")]
    ZeroCovector,
    #[error("no point with index {0}")]
    NoSuchPoint(usize),
    #[error("subdivision not applicable: {0}")]
    Inapplicable(String),
    #[error("nontrivial action in the {0} factor")]
    NontrivialAction(String),
    #[error("invalid subdivision problem: {0}")]
    InvalidProblem(String),
    #[error("delta {0} is not a face of gamma")]
    NotAFace(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Snc(#[from] SncError),
}
