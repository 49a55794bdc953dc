//! Symbolic Grothendieck rings with finite cyclic action tags.

mod element;
pub mod expr;
pub mod json;
mod lpoly;
mod sb;
mod table;

pub use element::{ClassMonomial, RingElement};
pub use lpoly::LPoly;
pub use sb::{SbElement, SbMonomial, POINT};
pub use table::{bittner_blowup_class, verdict_of, ClassSymbol, ProductRule, SymbolTable, Verdict};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("undeclared symbol {0}")]
    UndeclaredSymbol(String),
    #[error("no product rule declared for {0}*{1}")]
    MissingProductRule(String, String),
    #[error("symbol {0} carries a nontrivial action")]
    NontrivialAction(String),
    #[error("symbol {0} has no underlying_plain class")]
    MissingUnderlying(String),
    #[error("symbol {0} has no quotient_class")]
    MissingQuotient(String),
    #[error("level {level} is not divisible by the action order {order} of {monomial}")]
    LevelNotDivisible { monomial: String, order: u64, level: u64 },
    #[error("invalid symbol table: {0}")]
    InvalidTable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed json: {0}")]
    Json(String),
}
