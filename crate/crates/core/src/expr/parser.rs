//! Recursive-descent parser.
//!
//! ```text
//! expr     := "-"? term (("+" | "-") term)*
//! term     := factor (("*" | "/") factor)*
//! factor   := base ("^" exponent)?
//! exponent := "-"? integer | "(" expr ")"
//! base     := "exp" "[" expr "]" | integer | imaginary | "z" | "Y" | "x" digits | "(" expr ")"
//! ```
//!
//! Constant prefixes of sums and products are folded while parsing, and
//! `z^k` becomes a single z-polynomial node.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ast::{Expr, ExprKind, MulOp, Sign};
use super::lexer::{tokenize, Tok, Token};
use crate::error::{ParseError, Span};
use crate::sym::{GaussRat, ZPoly};

pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    if matches!(toks[0].tok, Tok::End) {
        return Err(ParseError::Empty);
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    p.expect(Tok::End, &["operator", "end of input"])?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn syntax(t: &Token, expected: &[&str]) -> ParseError {
    ParseError::Syntax {
        offset: t.span.start,
        found: t.tok.describe(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(syntax(self.peek(), expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let start = self.peek().span.start;
        let first_sign = if self.peek().tok == Tok::Minus {
            self.bump();
            Sign::Minus
        } else {
            Sign::Plus
        };
        let mut items = vec![(first_sign, self.term()?)];
        while matches!(self.peek().tok, Tok::Plus | Tok::Minus) {
            let s = if self.bump().tok == Tok::Plus { Sign::Plus } else { Sign::Minus };
            items.push((s, self.term()?));
        }
        let end = items.last().unwrap().1.span.end;
        let span = Span::new(start, end);
        let mut out: Vec<(Sign, Expr)> = Vec::new();
        for (s, e) in items {
            let folded = match (out.as_slice(), e.constant_value()) {
                ([], Some(v)) if s == Sign::Minus => Some(-v),
                ([(Sign::Plus, prev)], Some(v)) => prev.constant_value().map(|p| match s {
                    Sign::Plus => &p + &v,
                    Sign::Minus => &p - &v,
                }),
                _ => None,
            };
            match folded {
                Some(c) => {
                    let sp = Span::new(start, e.span.end);
                    out.clear();
                    out.push((Sign::Plus, Expr::constant(c, sp)));
                }
                None => out.push((s, e)),
            }
        }
        if out.len() == 1 && out[0].0 == Sign::Plus {
            let (_, mut e) = out.pop().unwrap();
            if e.constant_value().is_some() {
                e.span = span;
            }
            return Ok(e);
        }
        Ok(Expr::new(ExprKind::Sum(out), span))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let first = self.factor()?;
        let start = first.span.start;
        let mut out: Vec<(MulOp, Expr)> = vec![(MulOp::Mul, first)];
        while matches!(self.peek().tok, Tok::Star | Tok::Slash) {
            let optok = self.bump();
            let op = if optok.tok == Tok::Star { MulOp::Mul } else { MulOp::Div };
            let e = self.factor()?;
            let prev = if out.len() == 1 { out[0].1.constant_value() } else { None };
            match (prev, e.constant_value()) {
                (Some(p), Some(v)) => {
                    let c = match op {
                        MulOp::Mul => &p * &v,
                        MulOp::Div => {
                            if v.is_zero() {
                                return Err(ParseError::NonUnitDivisor { offset: e.span.start });
                            }
                            &p / &v
                        }
                    };
                    out[0].1 = Expr::constant(c, Span::new(start, e.span.end));
                }
                _ => out.push((op, e)),
            }
        }
        if out.len() == 1 {
            return Ok(out.pop().unwrap().1);
        }
        let span = Span::new(start, out.last().unwrap().1.span.end);
        Ok(Expr::new(ExprKind::Product(out), span))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (e, end) = self.exponent()?;
        let span = Span::new(base.span.start, end);
        if let Some(c) = base.constant_value() {
            if c.is_zero() && e < 0 {
                return Err(ParseError::NonUnitDivisor { offset: base.span.start });
            }
            return Ok(Expr::constant(c.powi(e), span));
        }
        if let ExprKind::ZPoly(p) = &base.kind {
            if *p == ZPoly::z() && e >= 0 {
                if e == 0 {
                    return Ok(Expr::constant(GaussRat::one(), span));
                }
                return Ok(Expr::new(ExprKind::ZPoly(ZPoly::monomial(GaussRat::one(), e as usize)), span));
            }
        }
        Ok(Expr::new(ExprKind::Power(Box::new(base), e), span))
    }

    fn exponent(&mut self) -> Result<(i64, usize), ParseError> {
        let t = self.peek().clone();
        let expected = ["integer", "'-'", "'('"];
        let to_i64 = |n: &BigInt, off: usize| -> Result<i64, ParseError> {
            i64::try_from(n).map_err(|_| ParseError::NonIntegerExponent { offset: off })
        };
        match &t.tok {
            Tok::Minus => {
                self.bump();
                let n = self.peek().clone();
                match &n.tok {
                    Tok::Int(v) => {
                        self.bump();
                        Ok((-to_i64(v, n.span.start)?, n.span.end))
                    }
                    _ => Err(syntax(&n, &["integer"])),
                }
            }
            Tok::Int(v) => {
                self.bump();
                Ok((to_i64(v, t.span.start)?, t.span.end))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                let close = self.expect(Tok::RParen, &["')'"])?;
                let v = e
                    .constant_value()
                    .and_then(|c| c.as_integer())
                    .ok_or(ParseError::NonIntegerExponent { offset: e.span.start })?;
                Ok((to_i64(&v, e.span.start)?, close.span.end))
            }
            Tok::Imag(_) => Err(ParseError::NonIntegerExponent { offset: t.span.start }),
            _ => Err(syntax(&t, &expected)),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        let expected = ["number", "'exp'", "'z'", "'Y'", "x-variable", "'('"];
        match &t.tok {
            Tok::Int(n) => Ok(Expr::new(ExprKind::Integer(n.clone()), t.span)),
            Tok::Imag(n) => Ok(Expr::new(
                ExprKind::Literal(GaussRat::new(Zero::zero(), num_rational::BigRational::from_integer(n.clone()))),
                t.span,
            )),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, &["')'", "operator"])?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "exp" => {
                    self.expect(Tok::LBrack, &["'['"])?;
                    let inner = self.expr()?;
                    let close = self.expect(Tok::RBrack, &["']'", "operator"])?;
                    let q = zpoly_of(&inner)?;
                    Ok(Expr::new(ExprKind::ExpUnit(q), Span::new(t.span.start, close.span.end)))
                }
                "z" => Ok(Expr::new(ExprKind::ZPoly(ZPoly::z()), t.span)),
                "Y" => Ok(Expr::new(ExprKind::Y, t.span)),
                _ => {
                    let digits = &name[1..];
                    if name.starts_with('x') && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                        if let Ok(n) = digits.parse::<u32>() {
                            return Ok(Expr::new(ExprKind::XVar(n), t.span));
                        }
                    }
                    Err(syntax(&t, &expected))
                }
            },
            _ => Err(syntax(&t, &expected)),
        }
    }
}

/// Interprets an expression as a polynomial in `z`.
pub(crate) fn zpoly_of(e: &Expr) -> Result<ZPoly, ParseError> {
    let bad = |e: &Expr, reason: &str| ParseError::ExpArgument { offset: e.span.start, reason: reason.into() };
    match &e.kind {
        ExprKind::Integer(n) => Ok(ZPoly::constant(GaussRat::from(n.clone()))),
        ExprKind::Literal(c) => Ok(ZPoly::constant(c.clone())),
        ExprKind::ZPoly(p) => Ok(p.clone()),
        ExprKind::Sum(items) => {
            let mut acc = ZPoly::zero();
            for (s, c) in items {
                let p = zpoly_of(c)?;
                acc = match s {
                    Sign::Plus => &acc + &p,
                    Sign::Minus => &acc - &p,
                };
            }
            Ok(acc)
        }
        ExprKind::Product(items) => {
            let mut acc = ZPoly::one();
            for (op, c) in items {
                let p = zpoly_of(c)?;
                acc = match op {
                    MulOp::Mul => &acc * &p,
                    MulOp::Div => match p.degree() {
                        Some(0) => acc.scale(&p.constant_term().inv()),
                        _ => return Err(bad(c, "division by a non-constant")),
                    },
                };
            }
            Ok(acc)
        }
        ExprKind::Power(b, k) => {
            if *k < 0 {
                return Err(bad(e, "negative power"));
            }
            Ok(zpoly_of(b)?.pow(*k as u32))
        }
        ExprKind::ExpUnit(_) => Err(bad(e, "nested exp")),
        ExprKind::Y => Err(bad(e, "Y is not allowed")),
        ExprKind::XVar(_) => Err(bad(e, "x-variables are not allowed")),
    }
}
