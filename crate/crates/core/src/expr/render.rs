//! Text rendering of ASTs and symbolic objects in the input grammar.

use super::ast::{Expr, ExprKind, MulOp, Sign};
use crate::sym::{LaurentPoly, MonicYPoly, UnitBasis};

/// Renders an AST so that parsing the text gives an equal AST.
pub fn render(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Integer(n) => n.to_string(),
        ExprKind::Literal(c) => c.to_string(),
        ExprKind::ZPoly(p) => p.to_string(),
        ExprKind::Y => "Y".into(),
        ExprKind::XVar(n) => format!("x{n}"),
        ExprKind::ExpUnit(q) => format!("exp[{q}]"),
        ExprKind::Power(b, k) => {
            let atomic = match &b.kind {
                ExprKind::Y | ExprKind::XVar(_) | ExprKind::ExpUnit(_) => true,
                ExprKind::ZPoly(p) => p.degree() == Some(1),
                _ => false,
            };
            let bs = render(b);
            if atomic {
                format!("{bs}^{k}")
            } else {
                format!("({bs})^{k}")
            }
        }
        ExprKind::Product(items) => {
            let mut s = String::new();
            for (i, (op, c)) in items.iter().enumerate() {
                if i > 0 {
                    s.push_str(if *op == MulOp::Mul { " * " } else { " / " });
                }
                s.push_str(&product_factor(c, i == 0));
            }
            s
        }
        ExprKind::Sum(items) => {
            let mut s = String::new();
            for (i, (sign, c)) in items.iter().enumerate() {
                match (i, sign) {
                    (0, Sign::Plus) => {}
                    (0, Sign::Minus) => s.push('-'),
                    (_, Sign::Plus) => s.push_str(" + "),
                    (_, Sign::Minus) => s.push_str(" - "),
                }
                s.push_str(&sum_term(c, i == 0 && *sign == Sign::Plus));
            }
            s
        }
    }
}

/// A `+` or `-` outside parentheses, after the first character.
fn has_top_level_sign(s: &str) -> bool {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return true,
            _ => {}
        }
    }
    false
}

fn product_factor(c: &Expr, first: bool) -> String {
    let s = render(c);
    let wrap = match &c.kind {
        ExprKind::Sum(_) | ExprKind::Product(_) => true,
        ExprKind::Literal(_) => {
            if first {
                s.starts_with('-') || has_top_level_sign(&s)
            } else {
                s.contains(['+', '-', '/', '('])
            }
        }
        _ => false,
    };
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

fn sum_term(c: &Expr, leading_plus: bool) -> String {
    let s = render(c);
    let wrap = match &c.kind {
        ExprKind::Sum(_) => true,
        ExprKind::Literal(_) => (!leading_plus && s.starts_with('-')) || has_top_level_sign(&s),
        _ => false,
    };
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

/// Variable names `exp[Q_j]` for a basis.
pub fn basis_names(basis: &UnitBasis) -> Vec<String> {
    basis.freqs().iter().map(|q| format!("exp[{q}]")).collect()
}

/// Renders `Σ c·Π name_j^{e_j}`, constant term first, then ascending
/// graded-lex order.
pub fn render_terms(p: &LaurentPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = p.terms().iter().collect();
    terms.sort_by_key(|(m, _)| !m.is_zero());
    let mut s = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let (neg, ctext, parens) = c.render_parts();
        let units: Vec<String> = m
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e != 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        let body = if units.is_empty() {
            if neg && has_top_level_sign(&ctext) {
                format!("({ctext})")
            } else {
                ctext
            }
        } else if ctext == "1" {
            units.join("*")
        } else if parens {
            format!("({ctext})*{}", units.join("*"))
        } else {
            format!("{ctext}*{}", units.join("*"))
        };
        match (i, neg) {
            (0, false) => {}
            (0, true) => s.push('-'),
            (_, false) => s.push_str(" + "),
            (_, true) => s.push_str(" - "),
        }
        s.push_str(&body);
    }
    s
}

pub fn render_laurent(p: &LaurentPoly, basis: &UnitBasis) -> String {
    render_terms(p, &basis_names(basis))
}

/// `Y^d + …` with the Y-power descending.
pub fn render_ypoly(f: &MonicYPoly, basis: &UnitBasis) -> String {
    let names = basis_names(basis);
    let d = f.degree();
    let mut s = if d == 1 { "Y".to_string() } else { format!("Y^{d}") };
    for k in (0..d).rev() {
        let c = &f.lower_coeffs()[k];
        if c.is_zero() {
            continue;
        }
        let text = render_terms(c, &names);
        let ypart = match k {
            0 => String::new(),
            1 => "Y".into(),
            _ => format!("Y^{k}"),
        };
        if k == 0 {
            match text.strip_prefix('-') {
                Some(rest) => s.push_str(&format!(" - {rest}")),
                None => s.push_str(&format!(" + {text}")),
            }
        } else if c.is_one() {
            s.push_str(&format!(" + {ypart}"));
        } else if let Some(rest) = text.strip_prefix('-').filter(|r| !has_top_level_sign(r)) {
            if rest == "1" {
                s.push_str(&format!(" - {ypart}"));
            } else {
                s.push_str(&format!(" - {rest}*{ypart}"));
            }
        } else if has_top_level_sign(&text) {
            s.push_str(&format!(" + ({text})*{ypart}"));
        } else {
            s.push_str(&format!(" + {text}*{ypart}"));
        }
    }
    s
}

/// Polynomials in `x_{first}, x_{first+1}, …`.
pub fn render_xpoly(p: &LaurentPoly, first_index: u32) -> String {
    let names: Vec<String> = (0..p.arity()).map(|j| format!("x{}", first_index as usize + j)).collect();
    render_terms(p, &names)
}
