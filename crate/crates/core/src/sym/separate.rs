//! Monomial-shape predicate on discriminants and the separation transform
//! `F(Y) = x_j^s · P(x_j^t Y + A)` with `P` free of `x_j`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::basis::UnitBasis;
use super::laurent::{LaurentPoly, Monomial};
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::ypoly::{discriminant, MonicYPoly};
use crate::error::SymError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ShapeCheck {
    /// `Δ = Q · Π_{j∈block} x_j^{m_j}` with `Q` free of the block.
    Monomial { q: LaurentPoly, exponents: Vec<i64> },
    /// Variable `var` occurs with (at least) the two distinct exponents.
    Failure { var: usize, exponents: (i64, i64) },
}

impl ShapeCheck {
    pub fn is_monomial(&self) -> bool {
        matches!(self, ShapeCheck::Monomial { .. })
    }
}

pub fn monomial_shape_check(delta: &LaurentPoly, block: &[usize]) -> Result<ShapeCheck, SymError> {
    if delta.is_zero() {
        return Err(SymError::ZeroInput);
    }
    let mut shift = vec![0i64; delta.arity()];
    let mut exponents = Vec::with_capacity(block.len());
    for &j in block {
        if j >= delta.arity() {
            return Err(SymError::Precondition(format!("variable index {j} out of range")));
        }
        let es = delta.exponents_in(j);
        if es.len() > 1 {
            return Ok(ShapeCheck::Failure { var: j, exponents: (es[0], es[1]) });
        }
        shift[j] = -es[0];
        exponents.push(es[0]);
    }
    Ok(ShapeCheck::Monomial { q: delta.shift(&Monomial(shift)), exponents })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeparationResult {
    pub var: usize,
    /// `s` and `t` before refinement.
    pub s: BigRational,
    pub t: BigRational,
    /// Refinement factor: `Q_j` became `Q_j / k`, so `x_j = v^k`.
    pub k: u64,
    /// Integer exponents in the refined basis: `s·k`, `t·k`.
    pub s_refined: i64,
    pub t_refined: i64,
    /// The shift `A`, in the refined basis (full arity).
    pub shift: LaurentPoly,
    /// `P` over the refined basis with variable `var` removed.
    pub reduced: MonicYPoly,
    pub refined_basis: UnitBasis,
}

impl SeparationResult {
    /// `v^{s'} · P(v^{t'} Y + A)`, expressed in the refined basis.
    pub fn recompose(&self) -> MonicYPoly {
        let p = self.reduced.map_coeffs(|c| c.insert_var(self.var));
        let n = p.arity();
        let lin = vec![self.shift.clone(), unit_power(n, self.var, self.t_refined)];
        let expanded = horner_w(&p.full_coeffs(), &lin);
        let scale = unit_power(n, self.var, self.s_refined);
        let coeffs: Vec<LaurentPoly> = expanded.iter().map(|c| c * &scale).collect();
        MonicYPoly::new(n, coeffs[..coeffs.len() - 1].to_vec()).expect("degree preserved")
    }

    pub fn reduced_basis(&self) -> UnitBasis {
        self.refined_basis.without(self.var)
    }
}

fn unit_power(n: usize, j: usize, e: i64) -> LaurentPoly {
    let mut m = vec![0; n];
    m[j] = e;
    LaurentPoly::monomial(m)
}

/// Polynomial product in an auxiliary variable, coefficients ascending.
fn wmul(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let n = a[0].arity();
    let mut out = vec![LaurentPoly::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `Σ c_k · lin^k` where `lin` is a polynomial in the auxiliary variable.
fn horner_w(cs: &[LaurentPoly], lin: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let (last, rest) = cs.split_last().expect("nonempty");
    let mut acc = vec![last.clone()];
    for c in rest.iter().rev() {
        acc = wmul(&acc, lin);
        acc[0] = &acc[0] + c;
    }
    acc
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

/// Search bound on `|t|`.
fn t_bound(f: &MonicYPoly, j: usize) -> i64 {
    let d = f.degree() as i64;
    let mut span_b = 0;
    let mut abs_b = 0;
    for k in 1..=d {
        let c = &f.lower_coeffs()[(d - k) as usize];
        if c.is_zero() {
            continue;
        }
        let es = c.exponents_in(j);
        let span = es.last().unwrap() - es.first().unwrap();
        let max_abs = es.iter().map(|e| e.abs()).max().unwrap();
        span_b = span_b.max(ceil_div(span, k));
        abs_b = abs_b.max(ceil_div(max_abs, k));
    }
    span_b.max(abs_b) + 1
}

/// Candidate numerators `m` of `t = m/d`, by `|t|` ascending, negative first.
fn candidates(bound: i64, d: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound * d).flat_map(|m| [-m, m]))
}

/// Attempts `t = p` (integer exponent in the refined variable) on `fk`.
fn try_separation(fk: &MonicYPoly, j: usize, p: i64) -> Option<(LaurentPoly, MonicYPoly)> {
    let n = fk.arity();
    let d = fk.degree() as i64;
    let top = &fk.lower_coeffs()[(d - 1) as usize] * &unit_power(n, j, p);
    let moving = LaurentPoly::from_terms(
        n,
        top.terms().iter().filter(|(m, _)| m.0[j] != 0).map(|(m, c)| (m.clone(), c.clone())),
    );
    let a = moving.scale(&RatFunc::constant(GaussRat::from_frac(1, d)));
    let vinv = unit_power(n, j, -p);
    let lin = vec![-&(&a * &vinv), vinv];
    let scale = unit_power(n, j, p * d);
    let expanded: Vec<LaurentPoly> = horner_w(&fk.full_coeffs(), &lin).iter().map(|c| c * &scale).collect();
    if expanded.iter().any(|c| c.involves(j)) {
        return None;
    }
    debug_assert!(expanded.last().unwrap().is_one());
    let reduced: Vec<LaurentPoly> = expanded[..expanded.len() - 1].iter().map(|c| c.drop_var(j)).collect();
    Some((a, MonicYPoly::new(n - 1, reduced).expect("nonempty")))
}

pub fn separate_variable(f: &MonicYPoly, basis: &UnitBasis, j: usize) -> Result<SeparationResult, SymError> {
    let n = f.arity();
    if n != basis.len() {
        return Err(SymError::ArityMismatch(n, basis.len()));
    }
    if j >= n {
        return Err(SymError::Precondition(format!("variable index {j} out of range")));
    }
    let delta = discriminant(f);
    if delta.is_zero() {
        return Err(SymError::Precondition("discriminant is zero; F is not square-free in Y".into()));
    }
    if let ShapeCheck::Failure { var, exponents } = monomial_shape_check(&delta, &[j])? {
        return Err(SymError::Precondition(format!(
            "discriminant is not monomial in variable {var}: exponents {} and {}",
            exponents.0, exponents.1
        )));
    }
    let d = f.degree() as i64;
    let bound = t_bound(f, j);
    let mut rejected = Vec::new();
    for m in candidates(bound, d) {
        let t = BigRational::new(BigInt::from(m), BigInt::from(d));
        let k = t.denom().try_into().expect("small denominator");
        let p: i64 = t.numer().try_into().expect("small numerator");
        let fk = f.map_coeffs(|c| c.rescale_var(j, k));
        let Some((shift, reduced)) = try_separation(&fk, j, p) else {
            rejected.push(t.to_string());
            continue;
        };
        let result = SeparationResult {
            var: j,
            s: -&t * BigRational::from_integer(BigInt::from(d)),
            t,
            k: k as u64,
            s_refined: -p * d,
            t_refined: p,
            shift,
            reduced,
            refined_basis: basis.refine(j, k as u64),
        };
        if result.recompose() != fk {
            return Err(SymError::RecompositionMismatch(format!("separation in variable {j}")));
        }
        return Ok(result);
    }
    Err(SymError::SearchExhausted { var: j, bound, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::zpoly::ZPoly;

    fn z(n: usize) -> LaurentPoly {
        LaurentPoly::constant(n, RatFunc::z())
    }

    #[test]
    fn shape_examples() {
        let u = LaurentPoly::var(1, 0);
        let d1 = &u * &z(1).scale(&RatFunc::from_int(4));
        assert_eq!(
            monomial_shape_check(&d1, &[0]).unwrap(),
            ShapeCheck::Monomial { q: z(1).scale(&RatFunc::from_int(4)), exponents: vec![1] }
        );
        let d2 = &(&u * &u) + &LaurentPoly::one(1);
        assert_eq!(monomial_shape_check(&d2, &[0]).unwrap(), ShapeCheck::Failure { var: 0, exponents: (0, 2) });
        let (u1, u2) = (LaurentPoly::var(2, 0), LaurentPoly::var(2, 1));
        let d3 = &(&u1 * &u2) + &u1;
        assert_eq!(
            monomial_shape_check(&d3, &[0]).unwrap(),
            ShapeCheck::Monomial { q: &u2 + &LaurentPoly::one(2), exponents: vec![1] }
        );
    }

    #[test]
    fn shifted_square_root() {
        // Y^2 - 2zY + z^2 - u over {2z}
        let basis = UnitBasis::new(vec![ZPoly::z().scale(&GaussRat::from_int(2))]).unwrap();
        let u = LaurentPoly::var(1, 0);
        let a1 = z(1).scale(&RatFunc::from_int(-2));
        let a0 = &(&z(1) * &z(1)) - &u;
        let f = MonicYPoly::new(1, vec![a0, a1]).unwrap();
        let sep = separate_variable(&f, &basis, 0).unwrap();
        assert_eq!(sep.t, BigRational::new((-1).into(), 2.into()));
        assert_eq!(sep.s, BigRational::from_integer(1.into()));
        assert_eq!(sep.k, 2);
        assert_eq!(sep.shift, -&(&z(1) * &LaurentPoly::monomial(vec![-1])));
        let expect_p = MonicYPoly::new(0, vec![LaurentPoly::from_int(0, -1), LaurentPoly::zero(0)]).unwrap();
        assert_eq!(sep.reduced, expect_p);
        assert_eq!(sep.refined_basis.freqs(), &[ZPoly::z()]);
    }

    #[test]
    fn fractional_exponent_three_halves() {
        // Y^2 - u^3 requires t = -3/2
        let basis = UnitBasis::new(vec![ZPoly::z()]).unwrap();
        let f = MonicYPoly::new(1, vec![-&LaurentPoly::monomial(vec![3]), LaurentPoly::zero(1)]).unwrap();
        let sep = separate_variable(&f, &basis, 0).unwrap();
        assert_eq!(sep.t, BigRational::new((-3).into(), 2.into()));
    }

    #[test]
    fn non_monomial_discriminant() {
        let basis = UnitBasis::new(vec![ZPoly::monomial(GaussRat::from_int(1), 2), ZPoly::z()]).unwrap();
        let s = &LaurentPoly::var(2, 0) + &LaurentPoly::var(2, 1);
        let f = MonicYPoly::new(2, vec![-&s, LaurentPoly::zero(2)]).unwrap();
        assert!(matches!(separate_variable(&f, &basis, 0), Err(SymError::Precondition(_))));
    }
}
