//! Reduced rational functions in ℚ(i)(z).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::scalar::GaussRat;
use super::zpoly::{scalar_factor, ZPoly};

/// `num/den` with `gcd(num, den) = 1` and `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: ZPoly,
    den: ZPoly,
}

impl RatFunc {
    pub fn new(num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let l = d.lead().unwrap().clone();
        if !l.is_one() {
            let inv = l.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(num: ZPoly) -> Self {
        RatFunc { num, den: ZPoly::one() }
    }

    pub fn constant(c: GaussRat) -> Self {
        RatFunc::from_poly(ZPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::constant(GaussRat::from_int(n))
    }

    pub fn z() -> Self {
        RatFunc::from_poly(ZPoly::z())
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(c)` when this is a constant of ℚ(i).
    pub fn as_constant(&self) -> Option<GaussRat> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &GaussRat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        if e < 0 {
            return self.inv().pow(-e);
        }
        RatFunc { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
    }

    /// d/dz
    pub fn derivative(&self) -> RatFunc {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, z: &GaussRat) -> Option<GaussRat> {
        let d = self.den.eval(z);
        (!d.is_zero()).then(|| &self.num.eval(z) / &d)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.num.eval_c64(z) / self.den.eval_c64(z)
    }

    /// Leading coefficient of the numerator; the sign used when rendering.
    pub fn lead_scalar(&self) -> GaussRat {
        self.num.lead().cloned().unwrap_or_else(GaussRat::zero)
    }

    /// Rendering as a sum term: returns the sign and the magnitude text,
    /// with `needs_parens` telling whether it must be wrapped to act as a
    /// factor.
    pub(crate) fn render_parts(&self) -> (bool, String, bool) {
        let neg = !self.lead_scalar().is_positive_like();
        let mag = if neg { -self } else { self.clone() };
        let num_terms = mag.num.coeffs().iter().filter(|c| !c.is_zero()).count();
        if mag.den.is_one() {
            if mag.num.is_constant() {
                let s = scalar_factor(&mag.num.constant_term());
                return (neg, s, false);
            }
            let s = mag.num.to_string();
            return (neg, s, num_terms > 1);
        }
        let n = if num_terms > 1 { format!("({})", mag.num) } else { mag.num.to_string() };
        let d_terms = mag.den.coeffs().iter().filter(|c| !c.is_zero()).count();
        let d = if d_terms > 1 || !mag.den.lead().unwrap().is_one() {
            format!("({})", mag.den)
        } else {
            mag.den.to_string()
        };
        (neg, format!("{n}/{d}"), true)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: ZPoly::zero(), den: ZPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_poly(ZPoly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(n, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (neg, s, _) = self.render_parts();
        write!(f, "{}{s}", if neg { "-" } else { "" })
    }
}
