//! Monic polynomials in `Y` over the Laurent ring, resultants and
//! discriminants.

use super::laurent::LaurentPoly;
use crate::error::SymError;

/// `Y^d + A_{d-1} Y^{d-1} + … + A_0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonicYPoly {
    arity: usize,
    /// `A_0..A_{d-1}`
    coeffs: Vec<LaurentPoly>,
}

impl MonicYPoly {
    pub fn new(arity: usize, coeffs: Vec<LaurentPoly>) -> Result<Self, SymError> {
        if coeffs.is_empty() {
            return Err(SymError::Precondition("Y-polynomial must have degree at least 1".into()));
        }
        for c in &coeffs {
            if c.arity() != arity {
                return Err(SymError::ArityMismatch(arity, c.arity()));
            }
        }
        Ok(MonicYPoly { arity, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `A_k`, with `A_d = 1`.
    pub fn coeff(&self, k: usize) -> LaurentPoly {
        if k == self.degree() {
            LaurentPoly::one(self.arity)
        } else {
            self.coeffs[k].clone()
        }
    }

    pub fn lower_coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    /// `A_0..A_d` including the leading 1.
    pub fn full_coeffs(&self) -> Vec<LaurentPoly> {
        let mut v = self.coeffs.clone();
        v.push(LaurentPoly::one(self.arity));
        v
    }

    /// `∂F/∂Y` coefficients, ascending.
    pub fn derivative_coeffs(&self) -> Vec<LaurentPoly> {
        self.full_coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&super::ratfunc::RatFunc::from_int(k as i64)))
            .collect()
    }

    /// `F(g)`
    pub fn eval(&self, g: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::horner(&self.full_coeffs(), g)
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> MonicYPoly {
        let coeffs: Vec<LaurentPoly> = self.coeffs.iter().map(f).collect();
        let arity = coeffs[0].arity();
        MonicYPoly { arity, coeffs }
    }
}

/// Determinant by fraction-free Bareiss elimination with exact Laurent-ring
/// division.
pub fn determinant(mut m: Vec<Vec<LaurentPoly>>, arity: usize) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one(arity);
    }
    let mut sign_neg = false;
    let mut prev = LaurentPoly::one(arity);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign_neg = !sign_neg;
                }
                None => return LaurentPoly::zero(arity),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = LaurentPoly::zero(arity);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_neg {
        -&d
    } else {
        d
    }
}

/// Sylvester matrix of `f` and `g` given by ascending coefficient lists whose
/// top entries are nonzero.
pub fn sylvester(f: &[LaurentPoly], g: &[LaurentPoly]) -> Vec<Vec<LaurentPoly>> {
    let arity = f[0].arity();
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![LaurentPoly::zero(arity); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![LaurentPoly::zero(arity); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res(f, g)` for ascending coefficient lists.
pub fn resultant(f: &[LaurentPoly], g: &[LaurentPoly]) -> LaurentPoly {
    let arity = f[0].arity();
    let trim = |v: &[LaurentPoly]| {
        let mut v = v.to_vec();
        while v.len() > 1 && v.last().unwrap().is_zero() {
            v.pop();
        }
        v
    };
    let (f, g) = (trim(f), trim(g));
    if f.last().unwrap().is_zero() || g.last().unwrap().is_zero() {
        return LaurentPoly::zero(arity);
    }
    if f.len() == 1 && g.len() == 1 {
        return LaurentPoly::one(arity);
    }
    determinant(sylvester(&f, &g), arity)
}

/// Resultant of two Laurent polynomials with respect to variable `var`, which
/// must occur with nonnegative exponents only.
pub fn resultant_in(f: &LaurentPoly, g: &LaurentPoly, var: usize) -> Result<LaurentPoly, SymError> {
    f.check_arity(g)?;
    let split = |p: &LaurentPoly| -> Result<Vec<LaurentPoly>, SymError> {
        let parts = p.split_by_var(var);
        if parts.keys().next().is_some_and(|&e| e < 0) {
            return Err(SymError::Precondition(format!("negative exponent of variable {var}")));
        }
        let top = parts.keys().next_back().copied().unwrap_or(0) as usize;
        let mut v = vec![LaurentPoly::zero(p.arity()); top + 1];
        for (e, c) in parts {
            v[e as usize] = c;
        }
        Ok(v)
    };
    Ok(resultant(&split(f)?, &split(g)?))
}

/// `Δ = (−1)^{d(d−1)/2} Res_Y(F, ∂F/∂Y)`.
pub fn discriminant(f: &MonicYPoly) -> LaurentPoly {
    let d = f.degree();
    let r = resultant(&f.full_coeffs(), &f.derivative_coeffs());
    if (d * (d - 1) / 2) % 2 == 1 {
        -&r
    } else {
        r
    }
}
