//! Counting, proximity and characteristic functions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::function::ExpPolyFunction;
use crate::quad::{circle_mean, QuadOptions};
use crate::zeros::{zeros_in_disk, PoleRecord, ZeroOptions, ZeroRecord, ZeroSet};
use crate::NevError;

/// Points this close to the origin count with weight `log r`.
const ORIGIN: f64 = 1e-12;

fn weight(z: Complex64, r: f64) -> f64 {
    let a = z.norm();
    if a <= ORIGIN * r.max(1.0) {
        r.ln()
    } else {
        (r / a).ln()
    }
}

/// `N(r) = Σ_{|z|≤r} min(m, Q)·log(r/|z|)`, with zeros at the origin
/// weighted by `log r`. `trunc = None` counts full multiplicity.
pub fn counting_function(zeros: &[ZeroRecord], r: f64, trunc: Option<u32>) -> f64 {
    zeros
        .iter()
        .filter(|z| z.location.norm() <= r)
        .map(|z| trunc.map_or(z.multiplicity, |q| z.multiplicity.min(q)) as f64 * weight(z.location, r))
        .sum()
}

pub fn pole_counting(poles: &[PoleRecord], r: f64, trunc: Option<u32>) -> f64 {
    poles
        .iter()
        .filter(|p| p.location.norm() <= r)
        .map(|p| trunc.map_or(p.order, |q| p.order.min(q)) as f64 * weight(p.location, r))
        .sum()
}

pub(crate) fn circle_opts(f: &ExpPolyFunction, r: f64) -> QuadOptions {
    let panels = (16.0 + 4.0 * f.exponent_bound(r)).ceil().min(4096.0) as usize;
    QuadOptions { abs_tol: 1e-9, rel_tol: 1e-9, initial_panels: panels, max_intervals: 200_000, fallback_tol: None }
}

/// `m(∞, r) = (1/2π)∫ log⁺|f(re^{iθ})| dθ`.
pub fn proximity_function(f: &ExpPolyFunction, r: f64) -> Result<f64, NevError> {
    circle_mean(|t| f.log_abs(Complex64::from_polar(r, t)).max(0.0), &circle_opts(f, r))
}

/// `m_f(a, r) = (1/2π)∫ log⁺ 1/|f - a|`.
pub fn proximity_at(f: &ExpPolyFunction, a: Complex64, r: f64) -> Result<f64, NevError> {
    let opts = circle_opts(f, r);
    circle_mean(
        |t| {
            let s = f.eval_scaled(Complex64::from_polar(r, t));
            let shifted = s.mantissa - a * (-s.scale).exp();
            let l = s.scale + shifted.norm().ln();
            (-l).max(0.0)
        },
        &opts,
    )
}

/// `T(r) = m(∞, r) + N(∞, r)` given the poles already located.
pub fn characteristic(f: &ExpPolyFunction, poles: &[PoleRecord], r: f64) -> Result<f64, NevError> {
    Ok(proximity_function(f, r)? + pole_counting(poles, r, None))
}

/// Cartan characteristic `(1/2π)∫ log max_j |f_j(re^{iθ})| dθ` of the map
/// `[f_0 : … : f_n]`.
pub fn characteristic_map(fs: &[ExpPolyFunction], r: f64) -> Result<f64, NevError> {
    let panels = fs.iter().map(|f| circle_opts(f, r).initial_panels).max().unwrap_or(16);
    let opts = QuadOptions { initial_panels: panels, ..circle_opts(&fs[0], r) };
    circle_mean(|t| {
        let z = Complex64::from_polar(r, t);
        fs.iter().map(|f| f.log_abs(z)).fold(f64::NEG_INFINITY, f64::max)
    }, &opts)
}

/// `N_gcd(r)`: pairs each zero of `f` with at most one zero of `g` closer than
/// the sum of their enclosure radii and counts `min(m_f, m_g)`.
pub fn gcd_counting(zf: &[ZeroRecord], zg: &[ZeroRecord], r: f64) -> Result<f64, NevError> {
    let mut total = 0.0;
    for a in zf.iter().filter(|z| z.location.norm() <= r) {
        let hits: Vec<&ZeroRecord> = zg
            .iter()
            .filter(|b| (a.location - b.location).norm() <= (a.enclosure_radius + b.enclosure_radius).max(1e-9))
            .collect();
        match hits.as_slice() {
            [] => {}
            [b] => {
                let back = zf
                    .iter()
                    .filter(|c| (c.location - b.location).norm() <= (c.enclosure_radius + b.enclosure_radius).max(1e-9))
                    .count();
                if back > 1 {
                    return Err(NevError::AmbiguousPairing { location: format!("{}", b.location), candidates: back });
                }
                total += a.multiplicity.min(b.multiplicity) as f64 * weight(a.location, r);
            }
            _ => return Err(NevError::AmbiguousPairing { location: format!("{}", a.location), candidates: hits.len() }),
        }
    }
    Ok(total)
}

/// Least-squares slope of `log T` against `log r` over the upper half of the
/// samples. Characteristics that stay bounded give order 0.
pub fn order_estimate(samples: &[(f64, f64)]) -> Result<f64, NevError> {
    if samples.len() < 2 {
        return Err(NevError::DegenerateGrid("order estimate needs at least two radii".into()));
    }
    let top = &samples[samples.len() / 2..];
    let top = if top.len() < 2 { &samples[samples.len() - 2..] } else { top };
    if top.iter().all(|&(_, t)| t.abs() < 1e-9) {
        return Ok(0.0);
    }
    if top.iter().any(|&(r, t)| r <= 0.0 || t <= 0.0) {
        return Err(NevError::DegenerateGrid("characteristic must be positive on the upper half of the grid".into()));
    }
    let xs: Vec<f64> = top.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = top.iter().map(|s| s.1.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(NevError::DegenerateGrid("radii on the upper half coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[derive(Clone, Debug, Serialize)]
pub struct JensenReport {
    pub r: f64,
    /// `N(0, r) - N(∞, r)`.
    pub counting: f64,
    /// `(1/2π)∫ log|f(re^{iθ})| dθ - log|c_f|`, with `c_f` the leading
    /// Laurent coefficient at the origin.
    pub mean: f64,
    pub difference: f64,
}

/// Jensen's formula on the circle used by `zeros`.
pub fn jensen_check(f: &ExpPolyFunction, zeros: &ZeroSet) -> Result<JensenReport, NevError> {
    let r = zeros.radius;
    let counting = counting_function(&zeros.records, r, None) - pole_counting(&zeros.poles, r, None);
    let integral = circle_mean(|t| f.log_abs(Complex64::from_polar(r, t)), &circle_opts(f, r))?;
    // order at the origin from records sitting there
    let k = zeros.records.iter().filter(|z| z.location.norm() <= ORIGIN * r.max(1.0)).map(|z| z.multiplicity as i32).sum::<i32>()
        - zeros.poles.iter().filter(|p| p.location.norm() <= ORIGIN * r.max(1.0)).map(|p| p.order as i32).sum::<i32>();
    let lead = origin_coefficient(f, k);
    let mean = integral - lead;
    Ok(JensenReport { r, counting, mean, difference: counting - mean })
}

/// `log|lim_{z→0} f(z)/z^k|` estimated from a small circle.
fn origin_coefficient(f: &ExpPolyFunction, k: i32) -> f64 {
    if k == 0 {
        return f.log_abs(Complex64::new(0.0, 0.0));
    }
    let h = 1e-4;
    // average over a few directions cancels the linear correction
    let n = 8;
    let s: f64 = (0..n)
        .map(|j| {
            let z = Complex64::from_polar(h, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            f.log_abs(z) - k as f64 * h.ln()
        })
        .sum();
    s / n as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct NevanlinnaSample {
    pub requested_r: f64,
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub n_trunc: BTreeMap<u32, f64>,
    pub n_count: u64,
    pub n_poles: f64,
}

/// Samples of `T, m(∞), N(0), N^{(Q)}(0), n(0)` on a radius grid. Zeros are
/// located once on the largest disk and reused.
pub fn analyze(
    f: &ExpPolyFunction,
    radii: &[f64],
    trunc: &[u32],
    opts: &ZeroOptions,
) -> Result<(Vec<NevanlinnaSample>, ZeroSet), NevError> {
    let rmax = radii.iter().cloned().fold(f64::NAN, f64::max);
    if radii.is_empty() || !rmax.is_finite() {
        return Err(NevError::DegenerateGrid("empty radius grid".into()));
    }
    let zs = zeros_in_disk(f, rmax, opts)?;
    let work: Vec<f64> = radii.to_vec();
    let samples = opts.mode.map(work, |req| -> Result<NevanlinnaSample, NevError> {
        let r = if req == rmax { zs.radius } else { zs.clean_radius(req)? };
        let m = proximity_function(f, r)?;
        let n_poles = pole_counting(&zs.poles, r, None);
        Ok(NevanlinnaSample {
            requested_r: req,
            r,
            t: m + n_poles,
            m,
            n: counting_function(&zs.records, r, None),
            n_trunc: trunc.iter().map(|&q| (q, counting_function(&zs.records, r, Some(q)))).collect(),
            n_count: zs.count(r),
            n_poles,
        })
    });
    Ok((samples.into_iter().collect::<Result<Vec<_>, _>>()?, zs))
}
