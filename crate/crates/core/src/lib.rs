//! Exact symbolic calculus for degenerations of varieties: Grothendieck ring
//! classes, snc and logarithmic models, and quadratic singularities.

pub mod datasets;
pub mod fan;
pub mod random;
pub mod ring;
pub mod series;
pub mod snc;
pub mod verify;
