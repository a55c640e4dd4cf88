//! Unit bases `u_j = e^{Q_j(z)}` and the ℚ-linear independence test for
//! their frequencies.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::GaussRat;
use super::zpoly::ZPoly;
use crate::error::SymError;

/// Outcome of the independence test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Independence {
    /// No nonzero integer vector `m` has `Σ m_j Q_j = 0`.
    Independent,
    /// A primitive integer vector with `Σ m_j Q_j = 0`, first nonzero entry positive.
    Dependent(Vec<BigInt>),
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

/// Ordered frequencies, sorted by descending degree so the top-order block is
/// a prefix. The independence verdict is computed at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitBasis {
    freqs: Vec<ZPoly>,
    independence: Independence,
}

impl UnitBasis {
    /// Validates and keeps the given order, which must already be sorted by
    /// descending degree.
    pub fn new(freqs: Vec<ZPoly>) -> Result<Self, SymError> {
        for q in &freqs {
            if q.is_zero() || !q.constant_term().is_zero() {
                return Err(SymError::InvalidFrequency(q.to_string()));
            }
        }
        if freqs.windows(2).any(|w| w[0].degree() < w[1].degree()) {
            return Err(SymError::UnsortedBasis);
        }
        let independence = frequency_independence(&freqs);
        Ok(UnitBasis { freqs, independence })
    }

    pub fn empty() -> Self {
        UnitBasis { freqs: Vec::new(), independence: Independence::Independent }
    }

    /// Sorts the frequencies (descending degree, ties broken canonically) and
    /// returns the basis with `perm[new] = old` index mapping.
    pub fn sorted(freqs: Vec<ZPoly>) -> Result<(Self, Vec<usize>), SymError> {
        let mut idx: Vec<usize> = (0..freqs.len()).collect();
        idx.sort_by(|&a, &b| freq_order(&freqs[a], &freqs[b]).then(a.cmp(&b)));
        let sorted = idx.iter().map(|&i| freqs[i].clone()).collect();
        Ok((UnitBasis::new(sorted)?, idx))
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn freqs(&self) -> &[ZPoly] {
        &self.freqs
    }

    pub fn freq(&self, j: usize) -> &ZPoly {
        &self.freqs[j]
    }

    /// `q_j = deg Q_j`
    pub fn orders(&self) -> Vec<usize> {
        self.freqs.iter().map(|q| q.degree().unwrap()).collect()
    }

    pub fn max_order(&self) -> usize {
        self.orders().into_iter().max().unwrap_or(0)
    }

    pub fn independence(&self) -> &Independence {
        &self.independence
    }

    pub fn is_independent(&self) -> bool {
        self.independence.is_independent()
    }

    /// `u_j'/u_j = Q_j'(z)`
    pub fn log_derivative(&self, j: usize) -> ZPoly {
        self.freqs[j].derivative()
    }

    /// Replaces `Q_j` by `Q_j / k`.
    pub fn refine(&self, j: usize, k: u64) -> UnitBasis {
        let mut freqs = self.freqs.clone();
        freqs[j] = freqs[j].scale(&GaussRat::from_frac(1, k as i64));
        UnitBasis { freqs, independence: self.independence.clone() }
    }

    /// Divides every frequency by its factor.
    pub fn refine_all(&self, factors: &[u64]) -> UnitBasis {
        let freqs = self
            .freqs
            .iter()
            .zip(factors)
            .map(|(q, &k)| if k == 1 { q.clone() } else { q.scale(&GaussRat::from_frac(1, k as i64)) })
            .collect();
        UnitBasis { freqs, independence: self.independence.clone() }
    }

    pub fn without(&self, j: usize) -> UnitBasis {
        let mut freqs = self.freqs.clone();
        freqs.remove(j);
        let independence = frequency_independence(&freqs);
        UnitBasis { freqs, independence }
    }
}

/// Descending degree, then coefficients from the top down.
pub(crate) fn freq_order(a: &ZPoly, b: &ZPoly) -> Ordering {
    b.degree().cmp(&a.degree()).then_with(|| {
        for k in (0..a.coeffs().len()).rev() {
            let o = a.coeff(k).canonical_cmp(&b.coeff(k));
            if o != Ordering::Equal {
                return o.reverse();
            }
        }
        Ordering::Equal
    })
}

/// Decides ℚ-linear independence of the frequencies by exact elimination
/// over ℚ on their real and imaginary coefficient vectors. For finite-order
/// units this is the same as multiplicative independence modulo constants.
pub fn frequency_independence(freqs: &[ZPoly]) -> Independence {
    let n = freqs.len();
    if n == 0 {
        return Independence::Independent;
    }
    let maxdeg = freqs.iter().filter_map(ZPoly::degree).max().unwrap_or(0);
    // rows: (degree, re/im); columns: frequencies
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for k in 0..=maxdeg {
        rows.push(freqs.iter().map(|q| q.coeff(k).re).collect());
        rows.push(freqs.iter().map(|q| q.coeff(k).im).collect());
    }
    let pivots = rref(&mut rows, n);
    let Some(free) = (0..n).find(|c| !pivots.contains(c)) else {
        return Independence::Independent;
    };
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[r][free].clone();
    }
    Independence::Dependent(primitive_integer_vector(&v))
}

/// Reduced row echelon form in place; returns pivot columns in row order.
pub(crate) fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
