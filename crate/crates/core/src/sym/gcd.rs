//! GCD and square-free structure in `K[x_1..x_n]`, lifted to the Laurent ring
//! by removing monomial content.

use num_traits::One;

use super::laurent::{LaurentPoly, Monomial};
use super::mpoly;
use super::ratfunc::RatFunc;
use crate::error::SymError;

/// Greatest common divisor after clearing monomial content, normalized to
/// graded-lex leading coefficient 1. Coprime inputs give `1`.
pub fn laurent_gcd(f: &LaurentPoly, g: &LaurentPoly) -> Result<LaurentPoly, SymError> {
    f.check_arity(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(SymError::ZeroInput);
    }
    let (pf, _) = f.strip_monomial_content();
    let (pg, _) = g.strip_monomial_content();
    let h = mpoly::gcd(&mpoly::from_laurent(&pf), &mpoly::from_laurent(&pg));
    Ok(mpoly::to_laurent(&h).normalize().0)
}

/// `f = unit · x^monomial · Π S_k^k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SquareFree {
    pub unit: RatFunc,
    pub monomial: Monomial,
    /// `(S_k, k)` with ascending `k`; each `S_k` normalized, monomial-free and
    /// square-free, pairwise coprime.
    pub factors: Vec<(LaurentPoly, u32)>,
}

impl SquareFree {
    pub fn reassemble(&self, arity: usize) -> LaurentPoly {
        let mut acc = LaurentPoly::term(arity, self.monomial.clone(), self.unit.clone());
        for (s, k) in &self.factors {
            acc = &acc * &s.pow(*k);
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, k)| *k == 1)
    }

    /// Product of the distinct factors (the radical up to units).
    pub fn radical(&self, arity: usize) -> LaurentPoly {
        self.factors.iter().fold(LaurentPoly::one(arity), |acc, (s, _)| &acc * s)
    }
}

/// Square-free decomposition by a Yun cascade in each variable.
pub fn squarefree_decompose(f: &LaurentPoly) -> Result<SquareFree, SymError> {
    if f.is_zero() {
        return Err(SymError::ZeroInput);
    }
    let n = f.arity();
    let (p, monomial) = f.strip_monomial_content();
    let mp = mpoly::from_laurent(&p);
    let factors: Vec<(LaurentPoly, u32)> = mpoly::squarefree(&mp, n)
        .into_iter()
        .map(|(g, k)| (mpoly::to_laurent(&g).normalize().0, k))
        .collect();
    let unit = f.leading().map(|(_, c)| c.clone()).unwrap_or_else(RatFunc::one);
    let out = SquareFree { unit, monomial, factors };
    debug_assert_eq!(&out.reassemble(n), f);
    Ok(out)
}

/// True when `f` has no repeated non-unit factor.
pub fn is_squarefree(f: &LaurentPoly) -> Result<bool, SymError> {
    Ok(squarefree_decompose(f)?.is_squarefree())
}
