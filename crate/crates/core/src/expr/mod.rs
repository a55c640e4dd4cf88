//! Expression grammar: lexing, parsing, rendering and lowering.

pub mod ast;
pub mod lexer;
pub mod lower;
pub mod parser;
pub mod render;

pub use ast::{Expr, ExprKind, MulOp, Sign};
pub use lower::{
    lower_joint, lower_to_symbolic, lower_xpoly, lower_ypoly, max_xvar, parse_constant, parse_frequencies,
};
pub use parser::parse_expression;
pub use render::{render, render_laurent, render_terms, render_xpoly, render_ypoly};
