//! Lowering of ASTs to Laurent polynomials over a minimal unit basis.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ast::{Expr, ExprKind, MulOp, Sign};
use super::parser::parse_expression;
use super::render::render_terms;
use crate::error::{ParseError, Span};
use crate::sym::{GaussRat, LaurentPoly, Monomial, MonicYPoly, RatFunc, UnitBasis, ZPoly};

/// Which free variables an expression may use.
#[derive(Clone, Copy, Debug)]
struct Vars {
    allow_y: bool,
    allow_exp: bool,
    /// x-variables `x_{first}..x_{first+count-1}`.
    x_first: u32,
    x_count: usize,
}

/// Generator index and exponent for each distinct frequency.
struct Generators {
    basis: UnitBasis,
    lookup: HashMap<ZPoly, (usize, i64)>,
}

fn collect_frequencies(asts: &[&Expr]) -> Result<Vec<ZPoly>, ParseError> {
    let mut out: Vec<ZPoly> = Vec::new();
    let mut err = None;
    for a in asts {
        a.walk(&mut |e| {
            if let ExprKind::ExpUnit(q) = &e.kind {
                if q.is_zero() {
                    return;
                }
                let c = q.constant_term();
                if !c.is_zero() && err.is_none() {
                    err = Some(ParseError::NonzeroConstantFrequency { offset: e.span.start, constant: c.to_string() });
                }
                if !out.contains(q) {
                    out.push(q.clone());
                }
            }
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// Merges ℚ-proportional frequencies into one generator each.
fn build_generators(freqs: &[ZPoly]) -> Generators {
    // classes: representative and (member, ratio to representative)
    let mut classes: Vec<(ZPoly, Vec<(ZPoly, BigRational)>)> = Vec::new();
    for q in freqs {
        let hit = classes.iter_mut().find_map(|(rep, members)| q.rational_ratio(rep).map(|r| (members, r)));
        match hit {
            Some((members, r)) => members.push((q.clone(), r.as_rational().unwrap().clone())),
            None => classes.push((q.clone(), vec![(q.clone(), BigRational::one())])),
        }
    }
    let mut gens = Vec::new();
    let mut members_by_gen = Vec::new();
    for (rep, members) in classes {
        let g = members.iter().skip(1).fold(members[0].1.clone(), |acc, (_, r)| rational_gcd(&acc, r));
        let mut gen = rep.scale(&GaussRat::from_rational(g.clone()));
        let mut sign = BigInt::one();
        if !gen.lead().unwrap().is_positive_like() {
            gen = -&gen;
            sign = -sign;
        }
        let exps: Vec<(ZPoly, i64)> = members
            .into_iter()
            .map(|(m, r)| {
                let e = (&r / &g).to_integer() * &sign;
                (m, i64::try_from(&e).expect("exponent fits"))
            })
            .collect();
        gens.push(gen);
        members_by_gen.push(exps);
    }
    let (basis, perm) = UnitBasis::sorted(gens).expect("generators are valid frequencies");
    let mut lookup = HashMap::new();
    for (new, &old) in perm.iter().enumerate() {
        for (m, e) in &members_by_gen[old] {
            lookup.insert(m.clone(), (new, *e));
        }
    }
    Generators { basis, lookup }
}

struct Evaluator<'a> {
    vars: Vars,
    gens: &'a Generators,
    arity: usize,
}

impl Evaluator<'_> {
    fn unit_offset(&self) -> usize {
        1 + self.vars.x_count
    }

    fn eval(&self, e: &Expr) -> Result<LaurentPoly, ParseError> {
        let n = self.arity;
        match &e.kind {
            ExprKind::Integer(v) => Ok(LaurentPoly::constant(n, RatFunc::constant(GaussRat::from(v.clone())))),
            ExprKind::Literal(c) => Ok(LaurentPoly::constant(n, RatFunc::constant(c.clone()))),
            ExprKind::ZPoly(p) => Ok(LaurentPoly::constant(n, RatFunc::from_poly(p.clone()))),
            ExprKind::Y => {
                if !self.vars.allow_y {
                    return Err(ParseError::UnexpectedVariable { name: "Y".into(), offset: e.span.start });
                }
                Ok(LaurentPoly::var(n, 0))
            }
            ExprKind::XVar(k) => {
                let idx = k.checked_sub(self.vars.x_first).map(|i| i as usize).filter(|&i| i < self.vars.x_count);
                match idx {
                    Some(i) => Ok(LaurentPoly::var(n, 1 + i)),
                    None => Err(ParseError::UnexpectedVariable { name: format!("x{k}"), offset: e.span.start }),
                }
            }
            ExprKind::ExpUnit(q) => {
                if !self.vars.allow_exp {
                    return Err(ParseError::UnexpectedVariable { name: "exp".into(), offset: e.span.start });
                }
                if q.is_zero() {
                    return Ok(LaurentPoly::one(n));
                }
                let (j, k) = self.gens.lookup[q];
                let mut m = vec![0; n];
                m[self.unit_offset() + j] = k;
                Ok(LaurentPoly::monomial(m))
            }
            ExprKind::Sum(items) => {
                let mut acc = LaurentPoly::zero(n);
                for (s, c) in items {
                    let v = self.eval(c)?;
                    acc = match s {
                        Sign::Plus => &acc + &v,
                        Sign::Minus => &acc - &v,
                    };
                }
                Ok(acc)
            }
            ExprKind::Product(items) => {
                let mut acc = LaurentPoly::one(n);
                for (op, c) in items {
                    let v = self.eval(c)?;
                    acc = match op {
                        MulOp::Mul => &acc * &v,
                        MulOp::Div => &acc * &invert(&v, c.span)?,
                    };
                }
                Ok(acc)
            }
            ExprKind::Power(b, k) => {
                let v = self.eval(b)?;
                if *k >= 0 {
                    Ok(v.pow(*k as u32))
                } else {
                    Ok(invert(&v, b.span)?.pow(k.unsigned_abs() as u32))
                }
            }
        }
    }
}

/// Inverse of a single nonzero term.
fn invert(v: &LaurentPoly, span: Span) -> Result<LaurentPoly, ParseError> {
    if !v.is_monomial() {
        return Err(ParseError::NonUnitDivisor { offset: span.start });
    }
    let (m, c) = v.terms().iter().next().unwrap();
    let neg = Monomial(m.0.iter().map(|e| -e).collect());
    Ok(LaurentPoly::term(v.arity(), neg, c.inv()))
}

/// Evaluates several expressions over one shared basis. Results have the
/// variable layout `[Y, x…, units…]`; generators unused by every result are
/// dropped.
fn lower_all(asts: &[&Expr], vars: Vars) -> Result<(Vec<LaurentPoly>, UnitBasis), ParseError> {
    let freqs = collect_frequencies(asts)?;
    if !vars.allow_exp && !freqs.is_empty() {
        let mut off = 0;
        for a in asts {
            a.walk(&mut |e| {
                if matches!(e.kind, ExprKind::ExpUnit(_)) && off == 0 {
                    off = e.span.start;
                }
            });
        }
        return Err(ParseError::UnexpectedVariable { name: "exp".into(), offset: off });
    }
    let gens = build_generators(&freqs);
    let nu = gens.basis.len();
    let ev = Evaluator { vars, gens: &gens, arity: 1 + vars.x_count + nu };
    let vals = asts.iter().map(|a| ev.eval(a)).collect::<Result<Vec<_>, _>>()?;
    let off = 1 + vars.x_count;
    let used: Vec<usize> = (0..nu).filter(|&j| vals.iter().any(|v| v.involves(off + j))).collect();
    if used.len() == nu {
        return Ok((vals, gens.basis));
    }
    let mut vals = vals;
    for j in (0..nu).rev() {
        if !used.contains(&j) {
            vals = vals.iter().map(|v| v.drop_var(off + j)).collect();
        }
    }
    let basis = UnitBasis::new(used.iter().map(|&j| gens.basis.freq(j).clone()).collect())
        .expect("subsequence of a sorted basis");
    Ok((vals, basis))
}

const PLAIN: Vars = Vars { allow_y: false, allow_exp: true, x_first: 0, x_count: 0 };

/// An exponential polynomial as a Laurent polynomial over its minimal basis.
pub fn lower_to_symbolic(ast: &Expr) -> Result<(LaurentPoly, UnitBasis), ParseError> {
    let (mut v, b) = lower_joint(&[ast])?;
    Ok((v.pop().unwrap(), b))
}

/// Several exponential polynomials over one shared basis.
pub fn lower_joint(asts: &[&Expr]) -> Result<(Vec<LaurentPoly>, UnitBasis), ParseError> {
    let (vals, basis) = lower_all(asts, PLAIN)?;
    Ok((vals.iter().map(|v| v.drop_var(0)).collect(), basis))
}

/// A monic polynomial in `Y` over its minimal basis.
pub fn lower_ypoly(ast: &Expr) -> Result<(MonicYPoly, UnitBasis), ParseError> {
    let vars = Vars { allow_y: true, ..PLAIN };
    let (mut vals, basis) = lower_all(&[ast], vars)?;
    let v = vals.pop().unwrap();
    let parts = v.split_by_var(0);
    let names: Vec<String> = std::iter::once("Y".to_string())
        .chain(crate::expr::render::basis_names(&basis))
        .collect();
    let not_monic = || ParseError::NotMonic(render_terms(&v, &names));
    let (&d, lead) = parts.iter().next_back().ok_or_else(not_monic)?;
    if d < 1 || parts.keys().any(|&e| e < 0) || !lead.is_one() {
        return Err(not_monic());
    }
    let coeffs = (0..d)
        .map(|k| parts.get(&k).map(|c| c.drop_var(0)).unwrap_or_else(|| LaurentPoly::zero(basis.len())))
        .collect();
    Ok((MonicYPoly::new(basis.len(), coeffs).expect("degree at least 1"), basis))
}

/// A Laurent polynomial in `x_{first}..x_{first+arity-1}` with coefficients in
/// ℚ(i)(z); exp units are rejected.
pub fn lower_xpoly(ast: &Expr, first_index: u32, arity: usize) -> Result<LaurentPoly, ParseError> {
    let vars = Vars { allow_y: false, allow_exp: false, x_first: first_index, x_count: arity };
    let (mut vals, _) = lower_all(&[ast], vars)?;
    Ok(vals.pop().unwrap().drop_var(0))
}

/// Largest `n` with `x_n` occurring in the expression.
pub fn max_xvar(ast: &Expr) -> Option<u32> {
    let mut m = None;
    ast.walk(&mut |e| {
        if let ExprKind::XVar(n) = e.kind {
            m = Some(m.map_or(n, |p: u32| p.max(n)));
        }
    });
    m
}

/// A constant of ℚ(i) written in the expression grammar.
pub fn parse_constant(s: &str) -> Result<GaussRat, ParseError> {
    let e = parse_expression(s)?;
    e.constant_value().ok_or_else(|| ParseError::NotConstant(s.to_string()))
}

/// Frequencies from `"exp[Q1]; exp[Q2]; …"` (bare `Q` is accepted too), in
/// the given order.
pub fn parse_frequencies(s: &str) -> Result<Vec<ZPoly>, ParseError> {
    let mut out = Vec::new();
    let mut base = 0;
    for item in s.split([';', ',']) {
        let shift = |e: ParseError| shift_offset(e, base);
        let ast = parse_expression(item).map_err(shift)?;
        let q = match &ast.kind {
            ExprKind::ExpUnit(q) => q.clone(),
            _ => super::parser::zpoly_of(&ast).map_err(shift)?,
        };
        if !q.constant_term().is_zero() {
            return Err(ParseError::NonzeroConstantFrequency {
                offset: base + ast.span.start,
                constant: q.constant_term().to_string(),
            });
        }
        out.push(q);
        base += item.len() + 1;
    }
    Ok(out)
}

fn shift_offset(e: ParseError, by: usize) -> ParseError {
    match e {
        ParseError::Syntax { offset, found, expected } => ParseError::Syntax { offset: offset + by, found, expected },
        ParseError::NonIntegerExponent { offset } => ParseError::NonIntegerExponent { offset: offset + by },
        ParseError::ExpArgument { offset, reason } => ParseError::ExpArgument { offset: offset + by, reason },
        ParseError::NonzeroConstantFrequency { offset, constant } => {
            ParseError::NonzeroConstantFrequency { offset: offset + by, constant }
        }
        ParseError::NonUnitDivisor { offset } => ParseError::NonUnitDivisor { offset: offset + by },
        ParseError::UnexpectedVariable { name, offset } => ParseError::UnexpectedVariable { name, offset: offset + by },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lower(s: &str) -> (LaurentPoly, UnitBasis) {
        lower_to_symbolic(&parse_expression(s).unwrap()).unwrap()
    }

    #[test]
    fn merges_proportional_frequencies() {
        let (p, b) = lower("exp[z] + exp[2*z]");
        assert_eq!(b.freqs(), &[ZPoly::z()]);
        let u = LaurentPoly::var(1, 0);
        assert_eq!(p, &u + &(&u * &u));
    }

    #[test]
    fn half_multiples_share_generator() {
        let (p, b) = lower("exp[2*z] - exp[3*z]");
        assert_eq!(b.freqs(), &[ZPoly::z()]);
        assert_eq!(p, &LaurentPoly::monomial(vec![2]) - &LaurentPoly::monomial(vec![3]));
        let (q, b2) = lower("exp[-z/2]");
        assert_eq!(b2.freqs(), &[ZPoly::z().scale(&GaussRat::from_frac(1, 2))]);
        assert_eq!(q, LaurentPoly::monomial(vec![-1]));
    }

    #[test]
    fn rational_coefficients() {
        let (p, b) = lower("z^2 * exp[z^2] + 1/z");
        assert_eq!(b.freqs(), &[ZPoly::monomial(GaussRat::one(), 2)]);
        let z2 = RatFunc::from_poly(ZPoly::monomial(GaussRat::one(), 2));
        assert_eq!(p.coeff(&Monomial(vec![1])), z2);
        assert_eq!(p.coeff(&Monomial(vec![0])), RatFunc::z().inv());
    }

    #[test]
    fn rejects_constant_frequency() {
        let e = parse_expression("exp[z+1]").unwrap();
        assert!(matches!(lower_to_symbolic(&e), Err(ParseError::NonzeroConstantFrequency { offset: 0, .. })));
        let e = parse_expression("1/(exp[z] + 1)").unwrap();
        assert!(matches!(lower_to_symbolic(&e), Err(ParseError::NonUnitDivisor { .. })));
        let e = parse_expression("Y + 1").unwrap();
        assert!(matches!(lower_to_symbolic(&e), Err(ParseError::UnexpectedVariable { .. })));
    }

    #[test]
    fn ypoly() {
        let e = parse_expression("Y^2 - 2*z*Y + z^2 - exp[2*z]").unwrap();
        let (f, b) = lower_ypoly(&e).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(b.freqs(), &[ZPoly::z().scale(&GaussRat::from_int(2))]);
        let e = parse_expression("2*Y^2 + 1").unwrap();
        assert!(matches!(lower_ypoly(&e), Err(ParseError::NotMonic(_))));
    }

    #[test]
    fn frequency_lists() {
        let qs = parse_frequencies("exp[z]; exp[2*z]").unwrap();
        assert_eq!(qs, vec![ZPoly::z(), ZPoly::z().scale(&GaussRat::from_int(2))]);
        assert!(matches!(parse_frequencies("z; z+1"), Err(ParseError::NonzeroConstantFrequency { offset: 3, .. })));
    }

    #[test]
    fn xpoly() {
        let e = parse_expression("x0 + x1*z + x2^2").unwrap();
        let p = lower_xpoly(&e, 0, 3).unwrap();
        assert_eq!(p.len(), 3);
        assert!(lower_xpoly(&parse_expression("x3").unwrap(), 0, 3).is_err());
    }
}
