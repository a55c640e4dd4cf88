//! Dense univariate polynomials in `z` over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::scalar::GaussRat;

/// Coefficients in ascending degree; the zero polynomial is the empty vector
/// and the last stored coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ZPoly {
    coeffs: Vec<GaussRat>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        ZPoly::new(vec![c])
    }

    /// `c·z^k`
    pub fn monomial(c: GaussRat, k: usize) -> Self {
        let mut v = vec![GaussRat::zero(); k + 1];
        v[k] = c;
        ZPoly::new(v)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        ZPoly::monomial(GaussRat::one(), 1)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussRat {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeff(0)
    }

    pub fn scale(&self, c: &GaussRat) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> ZPoly {
        match self.lead() {
            None => ZPoly::zero(),
            Some(l) => {
                let inv = l.inv();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussRat::from_int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> ZPoly {
        let mut base = self.clone();
        let mut acc = ZPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &ZPoly) -> (ZPoly, ZPoly) {
        let dl = d.lead().expect("division by zero polynomial").inv();
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (ZPoly::zero(), self.clone());
        }
        let mut quot = vec![GaussRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (ZPoly::new(quot), ZPoly::new(rem))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn lcm(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let g = self.gcd(other);
        (self * &other.div_exact(&g).unwrap()).monic()
    }

    pub fn eval(&self, z: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussRat::to_c64).collect()
    }

    /// `self(z + c)`
    pub fn taylor_shift(&self, c: &GaussRat) -> ZPoly {
        let lin = ZPoly::new(vec![c.clone(), GaussRat::one()]);
        self.compose(&lin)
    }

    /// `self(g(z))`
    pub fn compose(&self, g: &ZPoly) -> ZPoly {
        let mut acc = ZPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &ZPoly::constant(c.clone());
        }
        acc
    }

    /// True when `self = r·other` for some real rational `r`.
    pub fn rational_ratio(&self, other: &ZPoly) -> Option<GaussRat> {
        if self.coeffs.len() != other.coeffs.len() || other.is_zero() {
            return None;
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero())?;
        let r = &self.coeffs[k] / &other.coeffs[k];
        if !r.is_real() {
            return None;
        }
        (other.scale(&r) == *self).then_some(r)
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        ZPoly::new(out)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Renders in the expression grammar, highest degree first, e.g.
/// `(1+2i)/3*z^2 - i*z + 1`.
impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = !c.is_positive_like();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            write_term(f, &mag, k)?;
        }
        Ok(())
    }
}

/// Writes `c*z^k` with a unit coefficient omitted.
pub(crate) fn write_term(f: &mut impl fmt::Write, c: &GaussRat, k: usize) -> fmt::Result {
    let zpart = match k {
        0 => String::new(),
        1 => "z".to_string(),
        _ => format!("z^{k}"),
    };
    if k == 0 {
        return write!(f, "{}", scalar_factor(c));
    }
    if c.is_one() {
        write!(f, "{zpart}")
    } else {
        write!(f, "{}*{zpart}", scalar_factor(c))
    }
}

/// A Gaussian rational rendered so it can stand as a factor in a product.
/// Expects a value with nonnegative leading sign.
pub(crate) fn scalar_factor(c: &GaussRat) -> String {
    let s = c.to_string();
    if !s.starts_with('(') && (s[1..].contains('+') || s[1..].contains('-')) {
        format!("({s})")
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> ZPoly {
        ZPoly::new(v.iter().map(|&c| GaussRat::from_int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // z^2 - 1
        let b = p(&[1, 1]); // z + 1
        assert_eq!(a.div_exact(&b), Some(p(&[-1, 1])));
        assert_eq!(a.gcd(&p(&[1, 2, 1])), b);
        assert!(p(&[1, 0, 1]).gcd(&b).is_one());
        assert_eq!(p(&[0, 0, 1]).taylor_shift(&GaussRat::from_int(1)), p(&[1, 2, 1]));
    }

    #[test]
    fn render() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "z^2 - 2*z + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        let c = &GaussRat::gaussian(1, 2) / &GaussRat::from_int(3);
        let q = ZPoly::new(vec![GaussRat::zero(), -GaussRat::i(), c]);
        assert_eq!(q.to_string(), "(1+2i)/3*z^2 - i*z");
    }

    #[test]
    fn proportional() {
        assert_eq!(p(&[0, 2]).rational_ratio(&p(&[0, 1])), Some(GaussRat::from_int(2)));
        let iz = ZPoly::monomial(GaussRat::i(), 1);
        assert_eq!(iz.rational_ratio(&p(&[0, 1])), None);
    }
}
