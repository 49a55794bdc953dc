//! Truncated multivariate power series over `Q`, coordinate changes, the
//! Morse normal form of a prepared hypersurface singularity and invariants of
//! rational quadratic forms.

mod change;
pub mod json;
mod morse;
mod quadratic;
mod truncated;

pub use change::CoordinateChange;
pub use morse::{morse_reduce, odp_certificate, Certificate, MorseResult, CERTIFIED};
pub use quadratic::{squarefree_kernel, Isotropy, QuadInvariants, QuadraticForm};
pub use truncated::TruncatedSeries;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have different variables or truncation")]
    Mismatch,
    #[error("sqrt_unit needs constant term 1")]
    NotUnit,
    #[error("coordinate change: {0}")]
    NotInvertible(String),
    #[error("input not in prepared form: {0}")]
    NotPrepared(String),
    #[error("quadratic part is degenerate: rank {rank}, expected {expected}")]
    Degenerate { rank: usize, expected: usize },
    #[error("elimination did not terminate within the truncation degree")]
    NoTermination,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed json: {0}")]
    Json(String),
}
