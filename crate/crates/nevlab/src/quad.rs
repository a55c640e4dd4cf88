//! Adaptive Gauss–Kronrod (7, 15) quadrature for real, complex and paired
//! complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::NevError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Values that can be integrated: a vector space over ℝ with a norm.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }
}

/// Two complex integrands integrated together.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pair(pub Complex64, pub Complex64);

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl QuadValue for Pair {
    fn zero() -> Self {
        Pair(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }
    fn norm(&self) -> f64 {
        self.0.norm().max(self.1.norm())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_intervals: usize,
    /// When the interval budget runs out, accept the result anyway if the
    /// error estimate is below this.
    pub fallback_tol: Option<f64>,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, initial_panels: 8, max_intervals: 20_000, fallback_tol: None }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Quad<V> {
    pub value: V,
    pub error: f64,
    pub intervals: usize,
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl<V> Eq for Segment<V> {}

impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<V> Ord for Segment<V> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error).then(o.a.total_cmp(&self.a))
    }
}

fn gk15<V: QuadValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        let s = f1 + f2;
        kron = kron + s * w;
        if k % 2 == 1 {
            gauss = gauss + s * WG[k / 2];
        }
    }
    let err = ((kron - gauss) * h).norm();
    (kron * h, err)
}

/// `∫_a^b f` to `max(abs_tol, rel_tol·|I|)`, bisecting the interval with the
/// largest error estimate first.
pub fn integrate<V: QuadValue>(f: impl Fn(f64) -> V, a: f64, b: f64, opts: &QuadOptions) -> Result<Quad<V>, NevError> {
    let n = opts.initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(2 * n);
    let width = (b - a) / n as f64;
    for k in 0..n {
        let lo = a + width * k as f64;
        let hi = if k + 1 == n { b } else { a + width * (k + 1) as f64 };
        let (value, error) = gk15(&f, lo, hi);
        heap.push(Segment { a: lo, b: hi, value, error });
    }
    loop {
        let (value, error) = heap.iter().fold((V::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error));
        if !value.is_finite() || !error.is_finite() {
            return Err(NevError::Quadrature { intervals: heap.len(), error });
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.norm()) {
            return Ok(Quad { value: ordered_sum(&heap), error, intervals: heap.len() });
        }
        if heap.len() >= opts.max_intervals {
            if opts.fallback_tol.is_some_and(|t| error <= t) {
                return Ok(Quad { value: ordered_sum(&heap), error, intervals: heap.len() });
            }
            return Err(NevError::Quadrature { intervals: heap.len(), error });
        }
        let worst = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(NevError::Quadrature { intervals: heap.len() + 1, error });
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, lo, hi);
            heap.push(Segment { a: lo, b: hi, value, error });
        }
    }
}

/// Sums segment values left to right so the result does not depend on heap
/// layout.
fn ordered_sum<V: QuadValue>(heap: &BinaryHeap<Segment<V>>) -> V {
    let mut segs: Vec<&Segment<V>> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    segs.iter().fold(V::zero(), |acc, s| acc + s.value)
}

/// Mean value `(1/2π) ∫_0^{2π} g(θ) dθ`.
pub fn circle_mean(g: impl Fn(f64) -> f64, opts: &QuadOptions) -> Result<f64, NevError> {
    Ok(integrate(g, 0.0, 2.0 * PI, opts)?.value / (2.0 * PI))
}

/// `∮ g(z) dz` over the segment from `z0` to `z1`.
pub fn segment_integral<V: QuadValue>(
    g: impl Fn(Complex64) -> V,
    z0: Complex64,
    z1: Complex64,
    mul: impl Fn(V, Complex64) -> V,
    opts: &QuadOptions,
) -> Result<Quad<V>, NevError> {
    let d = z1 - z0;
    integrate(|t| mul(g(z0 + d * t), d), 0.0, 1.0, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x: f64| x.powi(5) - 3.0 * x * x, 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((q.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn kink_and_log_singularity() {
        let q = integrate(|x: f64| x.abs(), -1.0, 2.0, &QuadOptions::default()).unwrap();
        assert!((q.value - 2.5).abs() < 1e-9);
        // ∫_0^1 ln x = -1
        let q = integrate(|x: f64| x.ln(), 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((q.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn contour_winding() {
        // ∮ dz/z over the unit circle = 2πi
        let opts = QuadOptions::default().with_panels(4);
        let q = integrate(
            |t: f64| {
                let z = Complex64::from_polar(1.0, t);
                Complex64::i() * z / z
            },
            0.0,
            2.0 * PI,
            &opts,
        )
        .unwrap();
        assert!((q.value - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12);
    }
}
