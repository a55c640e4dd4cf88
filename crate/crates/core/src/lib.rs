//! Exact symbolic algebra for finite-order exponential polynomials and the
//! expression language used to write them.

pub mod error;
pub mod expr;
pub mod sym;

pub use error::{ParseError, Span, SymError};
