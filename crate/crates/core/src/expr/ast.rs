use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::Span;
use crate::sym::{GaussRat, ZPoly};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MulOp {
    Mul,
    Div,
}

/// Parsed expression. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprKind {
    /// The first sign may be `Minus` (unary minus); later ones are the
    /// binary operators.
    Sum(Vec<(Sign, Expr)>),
    /// The first operator is always `Mul`.
    Product(Vec<(MulOp, Expr)>),
    Power(Box<Expr>, i64),
    /// `exp[Q]` with `Q` a polynomial in `z`.
    ExpUnit(ZPoly),
    /// `z^k`, `k ≥ 1`.
    ZPoly(ZPoly),
    /// Nonnegative integer constant.
    Integer(BigInt),
    /// Any other constant of ℚ(i).
    Literal(GaussRat),
    Y,
    XVar(u32),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// `Integer` for nonnegative integers, `Literal` otherwise.
    pub fn constant(c: GaussRat, span: Span) -> Self {
        match c.as_integer() {
            Some(n) if !n.is_negative() => Expr::new(ExprKind::Integer(n), span),
            _ => Expr::new(ExprKind::Literal(c), span),
        }
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        match &self.kind {
            ExprKind::Integer(n) => Some(GaussRat::from(n.clone())),
            ExprKind::Literal(c) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Sum(v) => v.iter().map(|(_, e)| e).collect(),
            ExprKind::Product(v) => v.iter().map(|(_, e)| e).collect(),
            ExprKind::Power(b, _) => vec![b],
            _ => Vec::new(),
        }
    }

    /// Every child span lies inside its parent's span.
    pub fn spans_nest(&self) -> bool {
        self.children().iter().all(|c| self.span.contains(&c.span) && c.spans_nest())
    }

    /// Visits every node in preorder.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}
