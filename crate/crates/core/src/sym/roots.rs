//! Roots in `ℚ(i)(z)` and the recursive extraction of exponential-polynomial
//! roots of monic `F(Y)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::basis::{Independence, UnitBasis};
use super::gcd::is_squarefree;
use super::laurent::LaurentPoly;
use super::numeric::poly_roots;
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::separate::{monomial_shape_check, separate_variable};
use super::serial::canonical_string;
use super::ypoly::{discriminant, MonicYPoly};
use super::zpoly::ZPoly;
use crate::error::SymError;

/// Univariate polynomial over `ℚ(i)(z)`, ascending.
type KPoly = Vec<RatFunc>;

fn k_trim(mut p: KPoly) -> KPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn k_rem(a: &KPoly, b: &KPoly) -> KPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = b[db].inv();
    while r.len() > db {
        let c = &r[r.len() - 1] * &inv;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&c * bi);
        }
        r.pop();
        r = k_trim(r);
    }
    r
}

fn k_div(a: &KPoly, b: &KPoly) -> KPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let inv = b[db].inv();
    let mut q = vec![RatFunc::zero(); a.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let c = &r[r.len() - 1] * &inv;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&c * bi);
        }
        q[shift] = c;
        r.pop();
    }
    q
}

fn k_monic(p: &KPoly) -> KPoly {
    let inv = p.last().unwrap().inv();
    p.iter().map(|c| c * &inv).collect()
}

fn k_gcd(a: &KPoly, b: &KPoly) -> KPoly {
    let (mut a, mut b) = (k_trim(a.clone()), k_trim(b.clone()));
    while !b.is_empty() {
        let r = k_rem(&a, &b);
        a = b;
        b = r;
    }
    k_monic(&a)
}

/// Roots of `f` in ℚ(i)(z); `f` must have arity 0.
pub fn ratfunc_roots(f: &MonicYPoly) -> Result<Vec<RatFunc>, SymError> {
    if f.arity() != 0 {
        return Err(SymError::Precondition("ratfunc_roots needs an empty basis".into()));
    }
    let full: KPoly = f.full_coeffs().iter().map(|c| c.as_constant().expect("arity 0")).collect();
    let deriv: KPoly = full.iter().enumerate().skip(1).map(|(k, c)| c.scale(&GaussRat::from_int(k as i64))).collect();
    let g = k_gcd(&full, &deriv);
    let sqf = if g.len() > 1 { k_monic(&k_div(&full, &g)) } else { full };
    let e = sqf.len() - 1;

    // H(Y) = L^e · sqf(Y / L) has polynomial coefficients and is monic.
    let l = sqf.iter().fold(ZPoly::one(), |acc, c| acc.lcm(c.den()));
    let h: Vec<ZPoly> = sqf
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let scaled = c * &RatFunc::from_poly(l.pow((e - k) as u32));
            debug_assert!(scaled.is_polynomial());
            scaled.num().clone()
        })
        .collect();
    let bound = (0..e)
        .filter(|&k| !h[k].is_zero())
        .map(|k| (h[k].degree().unwrap()).div_ceil(e - k))
        .max()
        .unwrap_or(0);

    let center = sample_points()
        .find(|c| {
            let hc = ZPoly::new(h.iter().map(|p| p.eval(c)).collect());
            hc.gcd(&hc.derivative()).is_one()
        })
        .expect("square-free polynomial has a square-free specialization");
    let shifted: Vec<ZPoly> = h.iter().map(|p| p.taylor_shift(&center)).collect();
    let hc = ZPoly::new(shifted.iter().map(ZPoly::constant_term).collect());

    let mut roots = Vec::new();
    for y0 in gaussian_rational_roots(&hc) {
        let series = newton_lift(&shifted, &y0, bound);
        let cand = series.taylor_shift(&-&center);
        let value = h.iter().rev().fold(ZPoly::zero(), |acc, c| &(&acc * &cand) + c);
        if value.is_zero() {
            roots.push(RatFunc::new(cand, l.clone()));
        }
    }
    roots.sort_by_key(|r| r.to_string());
    roots.dedup();
    Ok(roots)
}

/// 0, 1, −1, i, −i, 2, −2, 2i, … as Gaussian integers.
fn sample_points() -> impl Iterator<Item = GaussRat> {
    (0i64..).flat_map(|n| {
        if n == 0 {
            vec![GaussRat::zero()]
        } else {
            vec![GaussRat::from_int(n), GaussRat::from_int(-n), GaussRat::gaussian(0, n), GaussRat::gaussian(0, -n)]
        }
    })
}

/// Roots in ℚ(i) of a monic polynomial over ℚ(i).
fn gaussian_rational_roots(p: &ZPoly) -> Vec<GaussRat> {
    let e = p.degree().unwrap_or(0);
    if e == 0 {
        return Vec::new();
    }
    // q(Y) = D^e p(Y/D) is monic over ℤ[i]; its ℚ(i)-roots are Gaussian integers.
    let dlcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom_lcm()));
    let dd = GaussRat::from(dlcm.clone());
    let q = ZPoly::new(p.coeffs().iter().enumerate().map(|(k, c)| c * &dd.pow((e - k) as u32)).collect());
    let numeric = poly_roots(&q.to_c64());
    let mut out: Vec<GaussRat> = Vec::new();
    for r in numeric {
        for cand in gaussian_neighbours(r) {
            if q.eval(&cand).is_zero() {
                let root = &cand / &dd;
                if !out.contains(&root) {
                    out.push(root);
                }
            }
        }
    }
    out
}

fn gaussian_neighbours(r: Complex64) -> Vec<GaussRat> {
    if !r.is_finite() || r.re.abs() > 1e15 || r.im.abs() > 1e15 {
        return Vec::new();
    }
    let (a, b) = (r.re.round() as i64, r.im.round() as i64);
    let mut v = vec![GaussRat::gaussian(a, b)];
    for (da, db) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        v.push(GaussRat::gaussian(a + da, b + db));
    }
    v
}

/// Power-series root of `Σ H_k(t) Y^k` through `y0` at `t = 0`, truncated at
/// degree `bound`.
fn newton_lift(h: &[ZPoly], y0: &GaussRat, bound: usize) -> ZPoly {
    let truncate = |p: ZPoly| ZPoly::new(p.coeffs().iter().take(bound + 1).cloned().collect());
    let dh0 = h
        .iter()
        .enumerate()
        .skip(1)
        .fold(GaussRat::zero(), |acc, (k, c)| &acc + &(&(&c.constant_term() * &GaussRat::from_int(k as i64)) * &y0.pow((k - 1) as u32)));
    let inv = dh0.inv();
    let mut y = ZPoly::constant(y0.clone());
    for n in 1..=bound {
        let val = h.iter().rev().fold(ZPoly::zero(), |acc, c| truncate(&(&acc * &y) + c));
        let rn = val.coeff(n);
        if !rn.is_zero() {
            y = &y + &ZPoly::monomial(-&(&rn * &inv), n);
        }
    }
    y
}

/// A root found by extraction, valid in the refined basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtractedRoot {
    pub root: LaurentPoly,
    pub basis: UnitBasis,
    /// Per-variable refinement factors relative to the input basis.
    pub factors: Vec<u64>,
}

pub fn extract_exp_poly_roots(f: &MonicYPoly, basis: &UnitBasis) -> Result<Vec<ExtractedRoot>, SymError> {
    if f.arity() != basis.len() {
        return Err(SymError::ArityMismatch(f.arity(), basis.len()));
    }
    if let Independence::Dependent(v) = basis.independence() {
        return Err(SymError::DependentBasis(v.iter().map(ToString::to_string).collect()));
    }
    let delta = discriminant(f);
    if delta.is_zero() {
        return Err(SymError::HypothesisFailure("discriminant is zero".into()));
    }
    if !is_squarefree(&delta)? {
        return Err(SymError::HypothesisFailure("discriminant is not square-free".into()));
    }
    let mut out = Vec::new();
    for (root, factors) in extract_inner(f, basis)? {
        let fk = f.map_coeffs(|c| c.rescale_vars(&factors));
        if !fk.eval(&root).is_zero() {
            return Err(SymError::RecompositionMismatch("extracted root does not satisfy F(g) = 0".into()));
        }
        out.push(ExtractedRoot { root, basis: basis.refine_all(&factors), factors });
    }
    out.sort_by_key(|r| canonical_string(&r.root));
    Ok(out)
}

fn extract_inner(f: &MonicYPoly, basis: &UnitBasis) -> Result<Vec<(LaurentPoly, Vec<u64>)>, SymError> {
    let n = f.arity();
    if f.degree() == 1 {
        return Ok(vec![(-&f.lower_coeffs()[0], vec![1; n])]);
    }
    if n == 0 {
        let roots = ratfunc_roots(f)?;
        return Ok(roots.into_iter().map(|r| (LaurentPoly::constant(0, r), Vec::new())).collect());
    }
    let delta = discriminant(f);
    let mut sep = None;
    for j in 0..n {
        if !monomial_shape_check(&delta, &[j])?.is_monomial() {
            continue;
        }
        match separate_variable(f, basis, j) {
            Ok(s) => {
                sep = Some(s);
                break;
            }
            Err(SymError::SearchExhausted { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some(sep) = sep else {
        return Err(SymError::NoPeelableVariable(crate::expr::render::render_laurent(&delta, basis)));
    };
    let j = sep.var;
    let mut out = Vec::new();
    for (w, sub_factors) in extract_inner(&sep.reduced, &sep.reduced_basis())? {
        let mut factors = sub_factors.clone();
        factors.insert(j, 1);
        let shift = sep.shift.rescale_vars(&factors);
        factors[j] = sep.k;
        let mut m = vec![0; n];
        m[j] = -sep.t_refined;
        let g = &(&w.insert_var(j) - &shift) * &LaurentPoly::monomial(m);
        out.push((g, factors));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zc(p: ZPoly) -> LaurentPoly {
        LaurentPoly::constant(0, RatFunc::from_poly(p))
    }

    fn zpi(v: &[i64]) -> ZPoly {
        ZPoly::new(v.iter().map(|&c| GaussRat::from_int(c)).collect())
    }

    #[test]
    fn rational_roots_examples() {
        let f = MonicYPoly::new(0, vec![zc(zpi(&[0, 0, -1])), LaurentPoly::zero(0)]).unwrap();
        let r = ratfunc_roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&RatFunc::z()) && r.contains(&-&RatFunc::z()));

        let g = MonicYPoly::new(0, vec![zc(zpi(&[0, -1])), LaurentPoly::zero(0)]).unwrap();
        assert!(ratfunc_roots(&g).unwrap().is_empty());

        let h = MonicYPoly::new(0, vec![zc(zpi(&[0, 1, 1])), zc(zpi(&[-1, -2]))]).unwrap();
        let r = ratfunc_roots(&h).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&RatFunc::from_poly(zpi(&[1, 1]))) && r.contains(&RatFunc::z()));
    }

    #[test]
    fn rational_function_root() {
        // (Y - 1/z)(Y - (z+i)/2)
        let a = RatFunc::new(zpi(&[1]), zpi(&[0, 1]));
        let b = RatFunc::from_poly(ZPoly::new(vec![GaussRat::gaussian(0, 1), GaussRat::one()]).scale(&GaussRat::from_frac(1, 2)));
        let f = MonicYPoly::new(0, vec![LaurentPoly::constant(0, &a * &b), LaurentPoly::constant(0, -&(&a + &b))]).unwrap();
        let r = ratfunc_roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&a) && r.contains(&b));
    }

    #[test]
    fn repeated_root_found_once() {
        let f = MonicYPoly::new(0, vec![zc(zpi(&[0, 0, 1])), zc(zpi(&[0, -2]))]).unwrap();
        assert_eq!(ratfunc_roots(&f).unwrap(), vec![RatFunc::z()]);
    }
}
