//! Sparse multivariate polynomials over ℚ(i), used internally for GCDs.
//! The variables are `x_1..x_n` followed by `z`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::laurent::{LaurentPoly, Monomial};
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::zpoly::ZPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussRat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussRat) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, GaussRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.iter().all(|&e| e == 0))
    }

    fn add_term(&mut self, k: Vec<u32>, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    #[allow(dead_code)]
    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                let k = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(k, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: usize) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> usize {
        self.terms.keys().map(|k| k[v] as usize).max().unwrap_or(0)
    }

    pub fn uses(&self, v: usize) -> bool {
        self.terms.keys().any(|k| k[v] > 0)
    }

    /// Coefficients as a polynomial in `v`, index = power of `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(self.nvars); self.degree_in(v) + 1];
        for (k, c) in &self.terms {
            let mut k2 = k.clone();
            let e = std::mem::replace(&mut k2[v], 0) as usize;
            out[e].terms.insert(k2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, v: usize, cs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (e, c) in cs.iter().enumerate() {
            for (k, a) in &c.terms {
                let mut k2 = k.clone();
                k2[v] += e as u32;
                out.add_term(k2, a.clone());
            }
        }
        out
    }

    pub fn lead_in(&self, v: usize) -> MPoly {
        self.coeffs_in(v).pop().unwrap_or_else(|| MPoly::zero(self.nvars))
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (k, c) in &self.terms {
            if k[v] == 0 {
                continue;
            }
            let mut k2 = k.clone();
            k2[v] -= 1;
            out.add_term(k2, c * &GaussRat::from_int(k[v] as i64));
        }
        out
    }

    /// Exact quotient by lex leading-term division, `None` if inexact.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dk, dc) = d.terms.iter().next_back()?;
        let dinv = dc.inv();
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((k, c)) = r.terms.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            if k.iter().zip(dk).any(|(a, b)| a < b) {
                return None;
            }
            let tk: Vec<u32> = k.iter().zip(dk).map(|(a, b)| a - b).collect();
            let tc = &c * &dinv;
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(tk.clone(), tc.clone());
            r = r.sub(&t.mul(d));
            q.add_term(tk, tc);
        }
        Some(q)
    }

    fn div(&self, d: &MPoly) -> MPoly {
        self.div_exact(d).expect("inexact division in gcd computation")
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn normalized(&self) -> MPoly {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }
}

/// Greatest common divisor in ℚ(i)[vars], normalized lex-leading coefficient 1.
pub(crate) fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let n = a.nvars;
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(n);
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if let Some(v) = (0..n).find(|&v| a.uses(v) && !b.uses(v)) {
            a = content_in(&a, v);
        } else if let Some(v) = (0..n).find(|&v| b.uses(v) && !a.uses(v)) {
            b = content_in(&b, v);
        } else {
            break;
        }
        if a.is_constant() || b.is_constant() {
            return MPoly::one(n);
        }
    }
    let v = (0..n)
        .filter(|&v| a.uses(v))
        .min_by_key(|&v| (a.degree_in(v) + b.degree_in(v), v))
        .expect("nonconstant polynomials share a variable");
    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let pa = a.div(&ca);
    let pb = b.div(&cb);
    let c = gcd(&ca, &cb);
    c.mul(&prs_gcd(pa, pb, v)).normalized()
}

/// Gcd of the coefficients with respect to `v`.
pub(crate) fn content_in(a: &MPoly, v: usize) -> MPoly {
    let mut g = MPoly::zero(a.nvars);
    for c in a.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one(a.nvars);
        }
    }
    g
}

pub(crate) fn primitive_part(a: &MPoly, v: usize) -> MPoly {
    a.div(&content_in(a, v))
}

fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let mut r = a.coeffs_in(v);
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut e = (r.len() - db) as i64;
    while r.last().is_some_and(MPoly::is_zero) {
        r.pop();
    }
    while !r.is_empty() && r.len() > db {
        let lr = r.pop().unwrap();
        let shift = r.len() - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (i, bi) in bc[..db].iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&lr.mul(bi));
        }
        e -= 1;
        while r.last().is_some_and(MPoly::is_zero) {
            r.pop();
        }
    }
    let out = MPoly::from_coeffs_in(a.nvars, v, &r);
    if e > 0 {
        out.mul(&lb.pow(e as usize))
    } else {
        out
    }
}

/// Subresultant remainder sequence for primitive inputs in `v`.
fn prs_gcd(a: MPoly, b: MPoly, v: usize) -> MPoly {
    let n = a.nvars;
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    let mut g = MPoly::one(n);
    let mut h = MPoly::one(n);
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v);
        }
        if r.degree_in(v) == 0 {
            return MPoly::one(n);
        }
        let divisor = g.mul(&h.pow(delta));
        a = b;
        b = r.div(&divisor);
        g = a.lead_in(v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).div(&h.pow(delta - 1)),
        };
    }
}

/// Yun's algorithm on a primitive polynomial in `v`.
fn yun(a: &MPoly, v: usize) -> Vec<(MPoly, u32)> {
    let mut out = Vec::new();
    let b = a.derivative(v);
    let c = gcd(a, &b);
    let mut w = a.div(&c);
    let mut y = b.div(&c);
    let mut z = y.sub(&w.derivative(v));
    let mut i = 1;
    while w.degree_in(v) > 0 {
        let g = gcd(&w, &z);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        w = w.div(&g);
        y = z.div(&g);
        z = y.sub(&w.derivative(v));
        i += 1;
    }
    out
}

/// Square-free factors in the first `xvars` variables; factors depending only
/// on the remaining variables are discarded (they are units over ℚ(i)(z)).
pub(crate) fn squarefree(f: &MPoly, xvars: usize) -> Vec<(MPoly, u32)> {
    let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
    let mut cur = f.clone();
    for v in 0..xvars {
        if !cur.uses(v) {
            continue;
        }
        let c = content_in(&cur, v);
        let pp = cur.div(&c);
        for (g, k) in yun(&pp, v) {
            let e = out.entry(k).or_insert_with(|| MPoly::one(f.nvars));
            *e = e.mul(&g);
        }
        cur = c;
    }
    out.into_iter().map(|(k, g)| (g, k)).collect()
}

/// Clears denominators of a polynomial (nonnegative exponents) and appends
/// `z` as the last variable.
pub(crate) fn from_laurent(p: &LaurentPoly) -> MPoly {
    debug_assert!(!p.has_negative_exponents());
    let n = p.arity();
    let l = p.denominator_lcm();
    let mut out = MPoly::zero(n + 1);
    for (m, c) in p.terms() {
        let scaled = if c.den().is_one() {
            &c.num().clone() * &l
        } else {
            c.num() * &l.div_exact(c.den()).unwrap()
        };
        for (k, a) in scaled.coeffs().iter().enumerate() {
            let mut key: Vec<u32> = m.0.iter().map(|&e| e as u32).collect();
            key.push(k as u32);
            out.add_term(key, a.clone());
        }
    }
    out
}

pub(crate) fn to_laurent(p: &MPoly) -> LaurentPoly {
    let n = p.nvars - 1;
    let mut groups: BTreeMap<Vec<i64>, Vec<GaussRat>> = BTreeMap::new();
    for (k, c) in &p.terms {
        let key: Vec<i64> = k[..n].iter().map(|&e| e as i64).collect();
        let zd = k[n] as usize;
        let v = groups.entry(key).or_default();
        if v.len() <= zd {
            v.resize(zd + 1, GaussRat::zero());
        }
        v[zd] = c.clone();
    }
    LaurentPoly::from_terms(
        n,
        groups.into_iter().map(|(k, cs)| (Monomial(k), RatFunc::from_poly(ZPoly::new(cs)))),
    )
}
