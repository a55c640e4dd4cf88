//! The Laurent ring `K[x_1^±, …, x_n^±]` with `K = ℚ(i)(z)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::zpoly::ZPoly;
use crate::error::SymError;

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then lexicographic with `x_1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn zero(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        Monomial(v)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite sum `Σ a_i x^i` with nonzero rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    arity: usize,
    terms: BTreeMap<Monomial, RatFunc>,
}

impl LaurentPoly {
    pub fn zero(arity: usize) -> Self {
        LaurentPoly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        LaurentPoly::constant(arity, RatFunc::one())
    }

    pub fn constant(arity: usize, c: RatFunc) -> Self {
        LaurentPoly::term(arity, Monomial::zero(arity), c)
    }

    pub fn from_int(arity: usize, n: i64) -> Self {
        LaurentPoly::constant(arity, RatFunc::from_int(n))
    }

    pub fn term(arity: usize, m: Monomial, c: RatFunc) -> Self {
        assert_eq!(m.0.len(), arity, "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { arity, terms }
    }

    /// The variable `x_j`.
    pub fn var(arity: usize, j: usize) -> Self {
        LaurentPoly::term(arity, Monomial::unit(arity, j), RatFunc::one())
    }

    /// `x^e` with unit coefficient.
    pub fn monomial(exps: Vec<i64>) -> Self {
        let n = exps.len();
        LaurentPoly::term(n, Monomial(exps), RatFunc::one())
    }

    pub fn from_terms(arity: usize, it: impl IntoIterator<Item = (Monomial, RatFunc)>) -> Self {
        let mut p = LaurentPoly::zero(arity);
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, RatFunc> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial lies in `K`.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// A single term `c·x^e` (a unit of the Laurent ring when `c ≠ 0`).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, m: &Monomial) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Largest term under graded-lex.
    pub fn leading(&self) -> Option<(&Monomial, &RatFunc)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.arity);
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.arity);
        }
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_scalar(&self, c: &GaussRat) -> LaurentPoly {
        self.scale(&RatFunc::constant(c.clone()))
    }

    /// Multiplication by the monomial `x^e`.
    pub fn shift(&self, e: &Monomial) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, a)| (m.add(e), a.clone())).collect(),
        }
    }

    /// Componentwise minimum exponent (the monomial content); zero vector for
    /// the zero polynomial.
    pub fn min_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::zero(self.arity);
        };
        let mut m = first.0.clone();
        for k in it {
            for (a, b) in m.iter_mut().zip(&k.0) {
                *a = (*a).min(*b);
            }
        }
        Monomial(m)
    }

    pub fn max_exponents(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::zero(self.arity);
        };
        let mut m = first.0.clone();
        for k in it {
            for (a, b) in m.iter_mut().zip(&k.0) {
                *a = (*a).max(*b);
            }
        }
        Monomial(m)
    }

    /// Divides out the monomial content so all exponents are ≥ 0 and no
    /// variable divides every term; returns the removed content too.
    pub fn strip_monomial_content(&self) -> (LaurentPoly, Monomial) {
        let m = self.min_exponents();
        let neg = Monomial(m.0.iter().map(|e| -e).collect());
        (self.shift(&neg), m)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|&e| e < 0))
    }

    /// Exponents of `x_j` that occur.
    pub fn exponents_in(&self, j: usize) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.keys().map(|m| m.0[j]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn involves(&self, j: usize) -> bool {
        self.terms.keys().any(|m| m.0[j] != 0)
    }

    /// Total degree of the highest term (meaningful for polynomials).
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::total).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::total);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one(self.arity);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Formal partial derivative `∂/∂x_j`.
    pub fn partial(&self, j: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[j] -= 1;
            out.add_term(m2, &c.scale(&GaussRat::from_int(e)));
        }
        out
    }

    /// Coefficientwise `d/dz`.
    pub fn coeff_derivative(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.arity, self.terms.iter().map(|(m, c)| (m.clone(), c.derivative())))
    }

    /// Multiplies the exponent of `x_j` by `k` (substitution `x_j ↦ x_j^k`).
    pub fn rescale_var(&self, j: usize, k: i64) -> LaurentPoly {
        if k == 1 {
            return self.clone();
        }
        LaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0[j] *= k;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    pub fn rescale_vars(&self, factors: &[u64]) -> LaurentPoly {
        let mut p = self.clone();
        for (j, &k) in factors.iter().enumerate() {
            p = p.rescale_var(j, k as i64);
        }
        p
    }

    /// Removes variable `j`, which must not occur.
    pub fn drop_var(&self, j: usize) -> LaurentPoly {
        assert!(!self.involves(j), "drop_var on a variable that occurs");
        LaurentPoly {
            arity: self.arity - 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = m.0.clone();
                    v.remove(j);
                    (Monomial(v), c.clone())
                })
                .collect(),
        }
    }

    /// Inserts a new variable at position `j` with exponent 0 everywhere.
    pub fn insert_var(&self, j: usize) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity + 1,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = m.0.clone();
                    v.insert(j, 0);
                    (Monomial(v), c.clone())
                })
                .collect(),
        }
    }

    /// Reorders variables: new variable `i` is old variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(perm.iter().map(|&p| m.0[p]).collect()), c.clone()))
                .collect(),
        }
    }

    /// Groups terms by the exponent of `x_j`: `self = Σ_e C_e·x_j^e` with
    /// `C_e` free of `x_j`.
    pub fn split_by_var(&self, j: usize) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2.0[j], 0);
            out.entry(e).or_insert_with(|| LaurentPoly::zero(self.arity)).add_term(m2, c);
        }
        out
    }

    /// Substitutes `x_j ↦ value` (another element of the ring).
    pub fn substitute(&self, j: usize, value: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.arity);
        for (e, c) in self.split_by_var(j) {
            let pw = if e >= 0 {
                value.pow(e as u32)
            } else {
                panic!("substitute of a negative power requires a unit value")
            };
            out = &out + &(&c * &pw);
        }
        out
    }

    /// Specializes coefficients at an exact point `z0`; `None` at a pole.
    pub fn specialize_z(&self, z0: &GaussRat) -> Option<BTreeMap<Monomial, GaussRat>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.eval(z0)?;
            if !v.is_zero() {
                out.insert(m.clone(), v);
            }
        }
        Some(out)
    }

    /// Numeric value with the variables replaced by `xs`.
    pub fn eval_c64(&self, z: Complex64, xs: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.eval_c64(z);
            for (x, &e) in xs.iter().zip(&m.0) {
                t *= x.powi(e as i32);
            }
            acc += t;
        }
        acc
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> ZPoly {
        self.terms.values().fold(ZPoly::one(), |acc, c| acc.lcm(c.den()))
    }

    /// Makes the graded-lex leading coefficient 1; returns the divided-out
    /// leading coefficient as well.
    pub fn normalize(&self) -> (LaurentPoly, RatFunc) {
        match self.leading() {
            None => (self.clone(), RatFunc::one()),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.inv()), c)
            }
        }
    }

    pub fn check_arity(&self, other: &LaurentPoly) -> Result<(), SymError> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(SymError::ArityMismatch(self.arity, other.arity))
        }
    }

    /// Exact quotient in the Laurent ring. The remainder witness in the
    /// error is the partial remainder at the step where division failed.
    pub fn div_exact(&self, g: &LaurentPoly) -> Result<LaurentPoly, SymError> {
        self.check_arity(g)?;
        if g.is_zero() {
            return Err(SymError::ZeroInput);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.arity));
        }
        let (pf, mf) = self.strip_monomial_content();
        let (pg, mg) = g.strip_monomial_content();
        let q = poly_div_exact(&pf, &pg)?;
        Ok(q.shift(&mf.sub(&mg)))
    }

    /// Horner evaluation of a univariate polynomial with coefficients `cs`
    /// (ascending) at `self`.
    pub fn horner(cs: &[LaurentPoly], at: &LaurentPoly) -> LaurentPoly {
        let mut acc = LaurentPoly::zero(at.arity);
        for c in cs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }
}

/// Division in `K[x]` for polynomials with nonnegative exponents, by leading
/// terms under graded-lex.
fn poly_div_exact(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, SymError> {
    let (lm, lc) = g.leading().map(|(m, c)| (m.clone(), c.inv())).unwrap();
    let mut r = f.clone();
    let mut q = LaurentPoly::zero(f.arity);
    while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
        if !lm.divides(&m) {
            return Err(SymError::NotDivisible { remainder: format!("{r:?}") });
        }
        let tm = m.sub(&lm);
        let tc = &c * &lc;
        q.add_term(tm.clone(), &tc);
        let t = LaurentPoly::term(f.arity, tm, tc);
        r = &r - &(&t * g);
    }
    Ok(q)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in add");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in sub");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in mul");
        let mut out = LaurentPoly::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.add(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, j: usize) -> LaurentPoly {
        LaurentPoly::var(n, j)
    }

    fn c(n: usize, k: i64) -> LaurentPoly {
        LaurentPoly::from_int(n, k)
    }

    #[test]
    fn difference_of_squares() {
        let u = x(1, 0);
        let p = &(&u + &c(1, 1)) * &(&u - &c(1, 1));
        assert_eq!(p, &(&u * &u) - &c(1, 1));
        assert_eq!(p.div_exact(&(&u + &c(1, 1))).unwrap(), &u - &c(1, 1));
    }

    #[test]
    fn divide_by_monomial_unit() {
        // (u1 + z) / u2 = u1 u2^-1 + z u2^-1
        let f = &x(2, 0) + &LaurentPoly::constant(2, RatFunc::z());
        let q = f.div_exact(&x(2, 1)).unwrap();
        let expect = &LaurentPoly::monomial(vec![1, -1])
            + &LaurentPoly::term(2, Monomial(vec![0, -1]), RatFunc::z());
        assert_eq!(q, expect);
    }

    #[test]
    fn non_divisible_reports_witness() {
        let u = x(1, 0);
        let r = (&u + &c(1, 2)).div_exact(&(&u + &c(1, 1)));
        assert!(matches!(r, Err(SymError::NotDivisible { .. })));
    }

    #[test]
    fn graded_lex_order() {
        let mut v = vec![Monomial(vec![0, 2]), Monomial(vec![1, 0]), Monomial(vec![1, 1]), Monomial(vec![2, 0])];
        v.sort();
        assert_eq!(v, vec![Monomial(vec![1, 0]), Monomial(vec![0, 2]), Monomial(vec![1, 1]), Monomial(vec![2, 0])]);
    }
}
