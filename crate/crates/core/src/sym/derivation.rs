//! The derivation `D_u` with `F(u)' = D_u(F)(u)`.

use super::basis::UnitBasis;
use super::gcd::{laurent_gcd, squarefree_decompose};
use super::laurent::LaurentPoly;
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use crate::error::SymError;

/// Termwise `a_i x^i ↦ (a_i' + a_i Σ_j i_j Q_j') x^i`.
pub fn derivation_du(f: &LaurentPoly, basis: &UnitBasis) -> Result<LaurentPoly, SymError> {
    if f.arity() != basis.len() {
        return Err(SymError::ArityMismatch(f.arity(), basis.len()));
    }
    let dq: Vec<RatFunc> = (0..basis.len()).map(|j| RatFunc::from_poly(basis.log_derivative(j))).collect();
    let mut out = LaurentPoly::zero(f.arity());
    for (m, a) in f.terms() {
        let mut c = a.derivative();
        for (e, q) in m.0.iter().zip(&dq) {
            if *e != 0 {
                c = &c + &(a * &q.scale(&GaussRat::from_int(*e)));
            }
        }
        out.add_term(m.clone(), &c);
    }
    Ok(out)
}

/// `F̄ = Π S_k` and `F̂ = Σ_k k·D_u(S_k)·Π_{j≠k} S_j`, with their gcd.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalPair {
    pub fbar: LaurentPoly,
    pub fhat: LaurentPoly,
    pub gcd: LaurentPoly,
}

impl CriticalPair {
    pub fn is_coprime(&self) -> bool {
        self.gcd.is_one()
    }
}

pub fn critical_pair(f: &LaurentPoly, basis: &UnitBasis) -> Result<CriticalPair, SymError> {
    let n = f.arity();
    let sf = squarefree_decompose(f)?;
    if sf.factors.is_empty() {
        return Err(SymError::MonomialInput);
    }
    let fbar = sf.radical(n);
    let mut fhat = LaurentPoly::zero(n);
    for (i, (s, k)) in sf.factors.iter().enumerate() {
        let mut t = derivation_du(s, basis)?.scale(&RatFunc::from_int(*k as i64));
        for (j, (o, _)) in sf.factors.iter().enumerate() {
            if j != i {
                t = &t * o;
            }
        }
        fhat = &fhat + &t;
    }
    let gcd = laurent_gcd(&fbar, &fhat)?;
    Ok(CriticalPair { fbar, fhat, gcd })
}
