//! Floating-point evaluation of `f = Σ a_I(z) u^I` with `u_j = e^{Q_j(z)}`.
//!
//! Values are carried as `mantissa · e^{scale}` so that radii where `|f|`
//! overflows `f64` stay usable; `log|f|` and `f'/f` never leave that form.

use expoly_core::expr::{lower_to_symbolic, parse_expression, render_laurent};
use expoly_core::sym::{derivation_du, numeric::poly_roots, LaurentPoly, RatFunc, UnitBasis, ZPoly};
use num_complex::Complex64;
use num_traits::Zero;

use crate::NevError;

#[derive(Clone, Debug)]
struct Term {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    freq: Vec<Complex64>,
}

fn horner(cs: &[Complex64], z: Complex64) -> Complex64 {
    cs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

impl Term {
    fn compile(body: &LaurentPoly, basis: &UnitBasis) -> Vec<Term> {
        body.terms()
            .iter()
            .map(|(m, a)| {
                let q = m.0.iter().zip(basis.freqs()).fold(ZPoly::zero(), |acc, (&e, qj)| {
                    &acc + &qj.scale(&e.into())
                });
                Term { num: a.num().to_c64(), den: a.den().to_c64(), freq: q.to_c64() }
            })
            .collect()
    }

    fn coeff(&self, z: Complex64) -> Complex64 {
        let n = horner(&self.num, z);
        if self.den.len() == 1 {
            n / self.den[0]
        } else {
            n / horner(&self.den, z)
        }
    }

    fn exponent(&self, z: Complex64) -> Complex64 {
        horner(&self.freq, z)
    }
}

/// A value `mantissa · e^{scale}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub scale: f64,
}

impl Scaled {
    pub fn log_abs(&self) -> f64 {
        self.scale + self.mantissa.norm().ln()
    }

    pub fn value(&self) -> Complex64 {
        self.mantissa * self.scale.exp()
    }
}

#[derive(Clone, Debug)]
pub struct ExpPolyFunction {
    body: LaurentPoly,
    basis: UnitBasis,
    derivative: LaurentPoly,
    terms: Vec<Term>,
    dterms: Vec<Term>,
    denominator: ZPoly,
}

impl ExpPolyFunction {
    pub fn new(body: LaurentPoly, basis: UnitBasis) -> Result<Self, NevError> {
        let derivative = derivation_du(&body, &basis)?;
        let terms = Term::compile(&body, &basis);
        let dterms = Term::compile(&derivative, &basis);
        let denominator = body.denominator_lcm();
        Ok(ExpPolyFunction { body, basis, derivative, terms, dterms, denominator })
    }

    pub fn parse(text: &str) -> Result<Self, NevError> {
        let (body, basis) = lower_to_symbolic(&parse_expression(text)?)?;
        Self::new(body, basis)
    }

    pub fn body(&self) -> &LaurentPoly {
        &self.body
    }

    pub fn basis(&self) -> &UnitBasis {
        &self.basis
    }

    pub fn derivative(&self) -> &LaurentPoly {
        &self.derivative
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn render(&self) -> String {
        render_laurent(&self.body, &self.basis)
    }

    /// Maximal degree of a frequency, i.e. the order of growth.
    pub fn order(&self) -> usize {
        self.basis.max_order()
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> &ZPoly {
        &self.denominator
    }

    /// `f - a` for a constant `a`.
    pub fn minus_constant(&self, a: &RatFunc) -> Result<Self, NevError> {
        let shifted = &self.body - &LaurentPoly::constant(self.body.arity(), a.clone());
        Self::new(shifted, self.basis.clone())
    }

    /// `D·f` with `D` the coefficient denominator; entire, with the zeros of
    /// `f` plus those of `D`.
    pub fn entire_part(&self) -> Result<Self, NevError> {
        if self.denominator.is_one() {
            return Ok(self.clone());
        }
        Self::new(self.body.scale(&RatFunc::from_poly(self.denominator.clone())), self.basis.clone())
    }

    /// Distinct roots of the coefficient denominator with their
    /// multiplicities, ordered by modulus then argument.
    pub fn poles(&self) -> Vec<(Complex64, u32)> {
        let mut out = Vec::new();
        for (k, s) in squarefree_parts(&self.denominator).into_iter().enumerate() {
            if !s.is_constant() {
                out.extend(poly_roots(&s.to_c64()).into_iter().map(|p| (p, k as u32 + 1)));
            }
        }
        out.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()).then(a.0.arg().total_cmp(&b.0.arg())));
        out
    }

    /// Upper bound for `max_Q |Q(z)|` over the circle of radius `r`.
    pub fn exponent_bound(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.freq.iter().enumerate().map(|(k, c)| c.norm() * r.powi(k as i32)).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn sums(&self, z: Complex64, with_derivative: bool) -> (Complex64, Complex64, f64) {
        let ef: Vec<(Complex64, Complex64)> = self.terms.iter().map(|t| (t.coeff(z), t.exponent(z))).collect();
        let ed: Vec<(Complex64, Complex64)> = if with_derivative {
            self.dterms.iter().map(|t| (t.coeff(z), t.exponent(z))).collect()
        } else {
            Vec::new()
        };
        let scale = ef.iter().chain(&ed).map(|(_, e)| e.re).fold(f64::NEG_INFINITY, f64::max);
        if !scale.is_finite() {
            return (Complex64::zero(), Complex64::zero(), 0.0);
        }
        let sum = |v: &[(Complex64, Complex64)]| v.iter().fold(Complex64::zero(), |acc, (a, e)| acc + a * (e - scale).exp());
        (sum(&ef), sum(&ed), scale)
    }

    pub fn eval_scaled(&self, z: Complex64) -> Scaled {
        let (mantissa, _, scale) = self.sums(z, false);
        Scaled { mantissa, scale }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_scaled(z).value()
    }

    pub fn log_abs(&self, z: Complex64) -> f64 {
        self.eval_scaled(z).log_abs()
    }

    /// `f'(z)/f(z)` from the exact derivative.
    pub fn log_deriv(&self, z: Complex64) -> Complex64 {
        let (f, d, _) = self.sums(z, true);
        d / f
    }

    /// `(f, f')` sharing one scale.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Scaled, Scaled) {
        let (f, d, scale) = self.sums(z, true);
        (Scaled { mantissa: f, scale }, Scaled { mantissa: d, scale })
    }

    /// `|f(z)| / Σ|a_I(z) u^I(z)|`, the residual relative to term size.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        let ef: Vec<(Complex64, Complex64)> = self.terms.iter().map(|t| (t.coeff(z), t.exponent(z))).collect();
        let scale = ef.iter().map(|(_, e)| e.re).fold(f64::NEG_INFINITY, f64::max);
        let (s, a) = ef.iter().fold((Complex64::zero(), 0.0), |(s, a), (c, e)| {
            let v = c * (e - scale).exp();
            (s + v, a + v.norm())
        });
        if a == 0.0 {
            0.0
        } else {
            s.norm() / a
        }
    }
}

/// Yun's decomposition `p = Π s_k^k`; entry `k-1` holds `s_k`.
fn squarefree_parts(p: &ZPoly) -> Vec<ZPoly> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let a0 = p.gcd(&p.derivative());
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let c = p.derivative().div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    while !b.is_constant() {
        let a = b.gcd(&d);
        let nb = b.div_exact(&a).expect("gcd divides");
        let nc = d.div_exact(&a).expect("gcd divides");
        d = &nc - &nb.derivative();
        b = nb;
        out.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matches_direct_evaluation() {
        let f = ExpPolyFunction::parse("z*exp[z^2] - exp[i*z]/(1+z^2) + 3").unwrap();
        for z in [c(0.3, -0.7), c(1.1, 0.4), c(-2.0, 1.5)] {
            let direct = z * (z * z).exp() - (Complex64::i() * z).exp() / (1.0 + z * z) + 3.0;
            assert!((f.eval(z) - direct).norm() < 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn log_derivative_matches_finite_difference() {
        let f = ExpPolyFunction::parse("exp[z^2] + exp[z] + 1").unwrap();
        let z = c(0.8, 0.3);
        let h = 1e-6;
        let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
        assert!((f.log_deriv(z) - fd / f.eval(z)).norm() < 1e-7);
    }

    #[test]
    fn large_radius_stays_finite() {
        let f = ExpPolyFunction::parse("exp[z^3] - 1").unwrap();
        let z = c(40.0, 0.0);
        assert!(f.eval(z).re.is_infinite());
        assert!((f.log_abs(z) - 64000.0).abs() < 1e-6);
        assert!((f.log_deriv(z) - 4800.0).norm() < 1e-6);
    }

    #[test]
    fn poles_and_entire_part() {
        let f = ExpPolyFunction::parse("exp[z]/(z^2 + 1)^2").unwrap();
        let p = f.poles();
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|(z, k)| (z.norm() - 1.0).abs() < 1e-12 && *k == 2));
        let q = ExpPolyFunction::parse("1/(z^3*(z-2))").unwrap().poles();
        assert_eq!(q.iter().map(|p| p.1).collect::<Vec<_>>(), vec![3, 1]);
        let g = f.entire_part().unwrap();
        assert!(g.denominator().is_one());
        let z = c(0.2, 0.1);
        assert!((g.eval(z) - z.exp()).norm() < 1e-12);
    }
}
