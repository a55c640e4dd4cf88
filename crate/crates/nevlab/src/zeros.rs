//! Zeros in a disk by argument-principle quadtree search.
//!
//! Winding numbers come from `(1/2πi)∮ g'/g` along cell edges, where `g` is
//! the entire multiple `D·f`. Cells with winding one are polished by Newton
//! from the first moment; higher windings are subdivided down to the cluster
//! size and reported as one record with that multiplicity.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::exec::ExecMode;
use crate::function::ExpPolyFunction;
use crate::quad::{integrate, Pair, QuadOptions};
use crate::NevError;

#[derive(Clone, Copy, Debug)]
pub struct ZeroOptions {
    /// Newton step tolerance, relative to `max(1, |z|)`.
    pub tol: f64,
    /// Zeros closer than `boundary_clearance · max(1, r)` to the circle force a
    /// nudged radius.
    pub boundary_clearance: f64,
    /// Cells with winding above one stop splitting below this diameter,
    /// relative to `max(1, r)`.
    pub cluster_diameter: f64,
    pub max_depth: usize,
    pub mode: ExecMode,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions { tol: 1e-12, boundary_clearance: 1e-6, cluster_diameter: 1e-5, max_depth: 48, mode: ExecMode::default() }
    }
}

impl ZeroOptions {
    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroRecord {
    #[serde(serialize_with = "ser_complex")]
    pub location: Complex64,
    pub multiplicity: u32,
    /// Radius of a disk around `location` whose winding equals
    /// `multiplicity` and which meets no other record's disk.
    pub enclosure_radius: f64,
    /// `|f(z)|` divided by the sum of the absolute values of its terms.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoleRecord {
    #[serde(serialize_with = "ser_complex")]
    pub location: Complex64,
    pub order: u32,
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroSet {
    pub requested_radius: f64,
    /// Radius actually used; larger than requested when a zero sat on the
    /// requested circle.
    pub radius: f64,
    /// Every zero with `|z| ≤ reach` is recorded; `reach` is slightly larger
    /// than `radius` so smaller nudged radii stay complete.
    pub reach: f64,
    /// Zeros with `|z| ≤ reach`, sorted by modulus then argument.
    pub records: Vec<ZeroRecord>,
    /// Poles of `f` with `|z| ≤ reach`.
    pub poles: Vec<PoleRecord>,
    /// Roots of the coefficient denominator inside the disk.
    #[serde(serialize_with = "ser_complex_vec")]
    pub punctures: Vec<Complex64>,
    /// Winding of `D·f` around the final circle.
    pub outer_winding: i64,
    #[serde(skip)]
    clearance: f64,
}

fn ser_complex_vec<S: serde::Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(zs.len()))?;
    for z in zs {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl ZeroSet {
    /// Total multiplicity of zeros with `|z| ≤ r`.
    pub fn count(&self, r: f64) -> u64 {
        self.records.iter().filter(|z| z.location.norm() <= r).map(|z| z.multiplicity as u64).sum()
    }

    /// Records inside the disk of radius `radius`.
    pub fn inside(&self) -> impl Iterator<Item = &ZeroRecord> {
        self.records.iter().filter(|z| z.location.norm() <= self.radius)
    }

    fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.records.iter().map(|z| z.location).chain(self.poles.iter().map(|p| p.location))
    }

    pub fn is_clean(&self, rho: f64) -> bool {
        let gap = self.clearance * rho.max(1.0);
        rho <= self.reach && self.points().all(|z| (z.norm() - rho).abs() > gap)
    }

    /// Radius to use for a requested `r`, by the same nudge rule as the search.
    pub fn clean_radius(&self, r: f64) -> Result<f64, NevError> {
        common_radius(&[self], r)
    }
}

/// First radius among `r, r(1 + 2^{-k}·10^{-3})`, `k = 0..20`, that is clean
/// for every set.
pub fn common_radius(sets: &[&ZeroSet], r: f64) -> Result<f64, NevError> {
    std::iter::once(r)
        .chain((0..=20).map(|k| r * (1.0 + 2f64.powi(-k) * 1e-3)))
        .find(|&rho| sets.iter().all(|s| s.is_clean(rho)))
        .ok_or(NevError::BoundaryNudge { r })
}

fn order_key(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg()))
}

fn nudge(r: f64, pts: &[Complex64], clearance: f64) -> Result<f64, NevError> {
    let gap = clearance * r.max(1.0);
    let clean = |rho: f64| pts.iter().all(|z| (z.norm() - rho).abs() > gap);
    if clean(r) {
        return Ok(r);
    }
    (0..=20).map(|k| r * (1.0 + 2f64.powi(-k) * 1e-3)).find(|&rho| clean(rho)).ok_or(NevError::BoundaryNudge { r })
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Cell {
    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }

    fn split(&self, fx: f64, fy: f64) -> [Cell; 4] {
        let xm = self.x0 + fx * (self.x1 - self.x0);
        let ym = self.y0 + fy * (self.y1 - self.y0);
        [
            Cell { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Cell { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Cell { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Cell { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

/// A cell with its winding number and first moment `(1/2πi)∮ z g'/g`.
#[derive(Clone, Copy, Debug)]
struct Counted {
    cell: Cell,
    winding: u32,
    moment: Complex64,
}

struct Search<'a> {
    g: &'a ExpPolyFunction,
    opts: ZeroOptions,
    scale: f64,
    slope: f64,
}

const SPLITS: [(f64, f64); 6] = [(0.5, 0.5), (0.537, 0.463), (0.449, 0.551), (0.583, 0.417), (0.403, 0.597), (0.63, 0.37)];

fn as_winding(total: Complex64) -> Result<i64, NevError> {
    let w = total / Complex64::new(0.0, 2.0 * PI);
    let k = w.re.round();
    if (w.re - k).abs() > 0.05 || w.im.abs() > 0.05 {
        return Err(NevError::NonIntegerWinding { value: format!("{:.6}{:+.6}i", w.re, w.im) });
    }
    Ok(k as i64)
}

impl Search<'_> {
    /// Windings only need to be resolved to an integer, so the tolerance sits
    /// well above the rounding noise of `g'/g` near clustered zeros.
    fn quad_opts(&self, length: f64, at: Complex64) -> QuadOptions {
        let panels = (1.0 + length * self.slope / 4.0).ceil().min(256.0) as usize;
        QuadOptions {
            abs_tol: 1e-5 * at.norm().max(1.0),
            rel_tol: 1e-10,
            initial_panels: panels,
            max_intervals: 4000,
            fallback_tol: Some(0.02),
        }
    }

    fn integrand(&self, z: Complex64) -> Pair {
        let ld = self.g.log_deriv(z);
        Pair(ld, z * ld)
    }

    /// `(1/2πi)∮ (g'/g, z g'/g) dz` around a closed polygon.
    fn polygon(&self, pts: &[Complex64]) -> Result<(i64, Complex64), NevError> {
        let mut total = Pair(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for k in 0..pts.len() {
            let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
            let d = b - a;
            let q = integrate(
                |t| {
                    let v = self.integrand(a + d * t);
                    Pair(v.0 * d, v.1 * d)
                },
                0.0,
                1.0,
                &self.quad_opts(d.norm(), a),
            )?;
            total = Pair(total.0 + q.value.0, total.1 + q.value.1);
        }
        let w = as_winding(total.0)?;
        Ok((w, total.1 / Complex64::new(0.0, 2.0 * PI)))
    }

    fn count(&self, cell: Cell) -> Result<Counted, NevError> {
        let (w, moment) = self.polygon(&cell.corners())?;
        if w < 0 {
            return Err(NevError::NonIntegerWinding { value: w.to_string() });
        }
        Ok(Counted { cell, winding: w as u32, moment })
    }

    fn subdivide(&self, c: &Counted) -> Result<Vec<Counted>, NevError> {
        let mut last = None;
        for (fx, fy) in SPLITS {
            let attempt: Result<Vec<Counted>, NevError> = c.cell.split(fx, fy).iter().map(|k| self.count(*k)).collect();
            match attempt {
                Ok(kids) if kids.iter().map(|k| k.winding).sum::<u32>() == c.winding => return Ok(kids),
                Ok(kids) => {
                    last = Some(NevError::WindingMismatch {
                        contour: c.winding as i64,
                        found: kids.iter().map(|k| k.winding as i64).sum(),
                    })
                }
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one split attempted"))
    }

    /// Newton on `g/g'`, scaled by `m` for a cluster of multiplicity `m`.
    fn newton(&self, start: Complex64, m: f64, cell: &Cell, slack: f64) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..80 {
            let ld = self.g.log_deriv(z);
            if !ld.is_finite() || ld.norm() == 0.0 {
                return (self.g.eval_scaled(z).mantissa.norm() == 0.0).then_some(z);
            }
            let step = m / ld;
            z -= step;
            if !cell.contains(z, slack) {
                return None;
            }
            if step.norm() <= self.opts.tol * z.norm().max(1.0) {
                return Some(z);
            }
        }
        None
    }

    fn record(&self, z: Complex64, m: u32) -> ZeroRecord {
        ZeroRecord { location: z, multiplicity: m, enclosure_radius: 0.0, residual: self.g.relative_residual(z) }
    }

    fn solve(&self, c: Counted, depth: usize) -> Result<Vec<ZeroRecord>, NevError> {
        if c.winding == 0 {
            return Ok(Vec::new());
        }
        let diam = c.cell.diameter();
        let mut centroid = c.moment / c.winding as f64;
        if !c.cell.contains(centroid, 0.0) {
            centroid = c.cell.center();
        }
        if c.winding == 1 {
            if let Some(z) = self.newton(centroid, 1.0, &c.cell, 1e-9 * diam) {
                return Ok(vec![self.record(z, 1)]);
            }
            if diam <= 1e-13 * self.scale {
                return Ok(vec![self.record(centroid, 1)]);
            }
        } else if diam <= self.opts.cluster_diameter * self.scale {
            let z = self.newton(centroid, c.winding as f64, &c.cell, diam).unwrap_or(centroid);
            return Ok(vec![self.record(z, c.winding)]);
        }
        if depth >= self.opts.max_depth {
            return Err(NevError::DepthExceeded { depth, location: format!("{centroid}") });
        }
        let kids = match self.subdivide(&c) {
            Ok(k) => k,
            // below floating-point resolution a cluster stays one record
            Err(_) if c.winding > 1 && diam <= 1e-3 * self.scale => {
                let z = self.newton(centroid, c.winding as f64, &c.cell, diam).unwrap_or(centroid);
                return Ok(vec![self.record(z, c.winding)]);
            }
            Err(e) => return Err(e),
        };
        let found = self.opts.mode.map(kids, |k| self.solve(k, depth + 1));
        let mut out = Vec::new();
        for r in found {
            out.extend(r?);
        }
        Ok(out)
    }

    fn circle_winding(&self, center: Complex64, rho: f64) -> Result<i64, NevError> {
        let panels = (8.0 + 2.0 * rho * self.slope).ceil().min(4096.0) as usize;
        let opts =
            QuadOptions { abs_tol: 1e-5, rel_tol: 1e-10, initial_panels: panels, max_intervals: 40_000, fallback_tol: Some(0.02) };
        let q = integrate(
            |t| {
                let e = Complex64::from_polar(rho, t);
                self.g.log_deriv(center + e) * Complex64::i() * e
            },
            0.0,
            2.0 * PI,
            &opts,
        )?;
        as_winding(q.value)
    }
}

/// All zeros of `f` in `|z| ≤ r`, with multiplicities and verified isolating
/// enclosures, sorted by modulus then argument.
pub fn zeros_in_disk(f: &ExpPolyFunction, r: f64, opts: &ZeroOptions) -> Result<ZeroSet, NevError> {
    if f.is_zero() {
        return Err(NevError::ZeroFunction);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(NevError::DegenerateGrid(format!("radius {r}")));
    }
    let g = f.entire_part()?;
    let reach = r * (1.0 + 1.1e-3);
    let scale = r.max(1.0);
    let search = Search {
        g: &g,
        opts: *opts,
        scale,
        slope: (g.order().max(1) as f64) * g.exponent_bound(reach + 1.0) / (reach + 1.0) + 1.0,
    };

    // Off-centre square so that symmetric zero patterns avoid the edges.
    let half = 1.03 * reach + 0.05;
    let (cx, cy) = (0.0101 * reach + 0.0123, 0.0073 * reach + 0.0071);
    let mut root = None;
    for k in 0..6 {
        let h = half * (1.0 + 0.0137 * k as f64);
        let cell = Cell { x0: cx - h, x1: cx + h, y0: cy - h, y1: cy + h };
        match search.count(cell) {
            Ok(c) => {
                root = Some(c);
                break;
            }
            Err(e) if k == 5 => return Err(e),
            Err(_) => {}
        }
    }
    let root = root.expect("loop returns or sets root");
    let mut all = search.solve(root, 0)?;
    all.sort_by(|a, b| order_key(&a.location, &b.location));

    // Zeros of D·f at roots of D are shared with the denominator.
    let poles_all = f.poles();
    let clearance = opts.boundary_clearance;
    let pts: Vec<Complex64> = all.iter().map(|z| z.location).chain(poles_all.iter().map(|p| p.0)).collect();
    let radius = nudge(r, &pts, clearance)?;

    let outer = search.circle_winding(Complex64::new(0.0, 0.0), radius)?;
    let inside: i64 = all.iter().filter(|z| z.location.norm() <= radius).map(|z| z.multiplicity as i64).sum();
    if outer != inside {
        return Err(NevError::WindingMismatch { contour: outer, found: inside });
    }

    let near = |p: Complex64, z: Complex64| (p - z).norm() <= 1e-6 * p.norm().max(1.0);
    let mut records = Vec::new();
    for z in &all {
        match poles_all.iter().find(|(p, _)| near(*p, z.location)) {
            Some(&(_, k)) if z.multiplicity > k => records.push(ZeroRecord { multiplicity: z.multiplicity - k, ..*z }),
            Some(_) => {}
            None => records.push(*z),
        }
    }
    let mut poles = Vec::new();
    for &(p, k) in &poles_all {
        let shared = all.iter().find(|z| near(p, z.location)).map_or(0, |z| z.multiplicity);
        if k > shared && p.norm() <= reach {
            poles.push(PoleRecord { location: p, order: k - shared });
        }
    }

    // Enclosures against every located point, including those outside.
    let others: Vec<Complex64> = all.iter().map(|z| z.location).chain(poles_all.iter().map(|p| p.0)).collect();
    let cap = 1e-3 * scale;
    let kept: Vec<ZeroRecord> = records.into_iter().filter(|z| z.location.norm() <= reach).collect();
    let verified = opts.mode.map(kept, |mut z| {
        let nearest = others
            .iter()
            .filter(|o| (**o - z.location).norm() > 0.0)
            .map(|o| (*o - z.location).norm())
            .fold(f64::INFINITY, f64::min);
        let mut rho = (0.4 * nearest).min(cap);
        for _ in 0..8 {
            if search.circle_winding(z.location, rho).ok() == Some(z.multiplicity as i64) {
                z.enclosure_radius = rho;
                return Ok(z);
            }
            rho *= 0.5;
        }
        Err(NevError::Enclosure { location: format!("{}", z.location) })
    });
    let records = verified.into_iter().collect::<Result<Vec<_>, _>>()?;

    Ok(ZeroSet {
        requested_radius: r,
        radius,
        reach,
        records,
        poles,
        punctures: poles_all.iter().map(|p| p.0).filter(|p| p.norm() <= reach).collect(),
        outer_winding: outer,
        clearance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(text: &str, r: f64) -> ZeroSet {
        zeros_in_disk(&ExpPolyFunction::parse(text).unwrap(), r, &ZeroOptions::default()).unwrap()
    }

    #[test]
    fn polynomial_zeros_with_multiplicity() {
        let zs = find("(z - 1)^2*(z + 2*i)", 3.0);
        assert_eq!(zs.records.len(), 2);
        assert_eq!(zs.records[0].multiplicity, 2);
        assert!((zs.records[0].location - 1.0).norm() < 1e-4);
        assert!((zs.records[1].location - Complex64::new(0.0, -2.0)).norm() < 1e-10);
    }

    #[test]
    fn units_have_no_zeros() {
        let zs = find("exp[z^2]", 6.0);
        assert!(zs.records.is_empty());
        assert_eq!(zs.outer_winding, 0);
    }

    #[test]
    fn boundary_zero_nudges_radius() {
        let zs = find("exp[z] - 1", 2.0 * PI);
        assert!(zs.radius > 2.0 * PI);
        assert_eq!(zs.count(zs.radius), 3);
    }

    #[test]
    fn poles_are_reported_not_counted() {
        let zs = find("(exp[z] - 1)/(z*(z - 3))", 4.0);
        // the zero at the origin cancels the pole there
        assert!(zs.records.iter().all(|z| z.location.norm() > 1.0));
        assert_eq!(zs.poles.len(), 1);
        assert!((zs.poles[0].location - 3.0).norm() < 1e-10);
        assert_eq!(zs.punctures.len(), 2);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = ExpPolyFunction::parse("exp[z^2] + exp[z] + 1").unwrap();
        let a = zeros_in_disk(&f, 4.0, &ZeroOptions::default().with_mode(ExecMode::Sequential)).unwrap();
        let b = zeros_in_disk(&f, 4.0, &ZeroOptions::default().with_mode(ExecMode::Parallel)).unwrap();
        assert_eq!(a.records, b.records);
    }
}
