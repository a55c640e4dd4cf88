//! Jacobian determinants of homogeneous systems and the Euler identity.

use super::laurent::LaurentPoly;
use super::ratfunc::RatFunc;
use super::ypoly::determinant;
use crate::error::SymError;

fn check_homogeneous(f: &LaurentPoly) -> Result<(), SymError> {
    if f.has_negative_exponents() || !f.is_homogeneous() {
        return Err(SymError::NotHomogeneous(format!("{f:?}")));
    }
    Ok(())
}

/// `det(∂F_i/∂x_j)` for `n+1` homogeneous polynomials in `x_0..x_n`.
pub fn jacobian_det(fs: &[LaurentPoly]) -> Result<LaurentPoly, SymError> {
    let m = fs.len();
    if m == 0 {
        return Err(SymError::Precondition("empty system".into()));
    }
    for f in fs {
        if f.arity() != m {
            return Err(SymError::ArityMismatch(m, f.arity()));
        }
        check_homogeneous(f)?;
    }
    let rows = fs.iter().map(|f| (0..m).map(|j| f.partial(j)).collect()).collect();
    Ok(determinant(rows, m))
}

/// `Σ_j x_j ∂F/∂x_j = deg(F)·F`, checked exactly.
pub fn euler_identity(f: &LaurentPoly) -> Result<bool, SymError> {
    check_homogeneous(f)?;
    let n = f.arity();
    let deg = f.total_degree().unwrap_or(0);
    let lhs = (0..n).fold(LaurentPoly::zero(n), |acc, j| &acc + &(&LaurentPoly::var(n, j) * &f.partial(j)));
    Ok(lhs == f.scale(&RatFunc::from_int(deg)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_system() {
        let fs = [LaurentPoly::var(2, 0), LaurentPoly::var(2, 1)];
        assert!(jacobian_det(&fs).unwrap().is_one());
    }

    #[test]
    fn quadratic_system() {
        let (x0, x1) = (LaurentPoly::var(2, 0), LaurentPoly::var(2, 1));
        let f1 = &x0 * &x0;
        let f2 = &(&x0 * &x1) + &(&x1 * &x1);
        let g = jacobian_det(&[f1.clone(), f2.clone()]).unwrap();
        let two = LaurentPoly::from_int(2, 2);
        let four = LaurentPoly::from_int(2, 4);
        assert_eq!(g, &(&two * &(&x0 * &x0)) + &(&four * &(&x0 * &x1)));
        assert!(euler_identity(&f1).unwrap());
        assert!(euler_identity(&f2).unwrap());
    }

    #[test]
    fn rejects_inhomogeneous() {
        let f = &LaurentPoly::var(2, 0) + &LaurentPoly::one(2);
        assert!(matches!(euler_identity(&f), Err(SymError::NotHomogeneous(_))));
    }
}
