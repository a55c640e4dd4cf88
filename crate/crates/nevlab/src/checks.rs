//! Numeric checks of the main inequalities on radius grids.
//!
//! Every check returns a [`CheckReport`] whose verdicts can be recomputed
//! from the stored arrays and the `rule` string.

use std::collections::BTreeMap;

use expoly_core::sym::{
    derivation_du, euler_identity, frequency_independence, is_squarefree, jacobian_det, laurent_gcd, resultant_in,
    GaussRat, LaurentPoly, Monomial, RatFunc, UnitBasis, ZPoly,
};
use expoly_core::sym::numeric::poly_roots;
use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{
    characteristic_map, counting_function, gcd_counting, pole_counting, proximity_at, proximity_function,
};
use crate::exec::ExecMode;
use crate::function::ExpPolyFunction;
use crate::quad::circle_mean;
use crate::zeros::{common_radius, zeros_in_disk, ZeroOptions, ZeroSet};
use crate::NevError;

#[derive(Clone, Copy, Debug)]
pub struct CheckSettings {
    pub eps: f64,
    /// Allowed oscillation of bounded error terms.
    pub osc_bound: f64,
    /// Truncation level; checks pick their own default when `None`.
    pub trunc: Option<u32>,
    /// Lower bound for `N^{(1)}/(deg G · T_u)` in the moving-target check.
    pub smt_lower: f64,
    /// Asymptotic checks pass when the verdicts at this many of the largest
    /// radii hold.
    pub tail: usize,
    pub zeros: ZeroOptions,
}

impl Default for CheckSettings {
    fn default() -> Self {
        CheckSettings { eps: 0.05, osc_bound: 1.0, trunc: None, smt_lower: 0.9, tail: 2, zeros: ZeroOptions::default() }
    }
}

impl CheckSettings {
    fn mode(&self) -> ExecMode {
        self.zeros.mode
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub r_grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub margin: Vec<f64>,
    pub verdicts: Vec<bool>,
    pub pass: bool,
    pub rule: String,
    pub series: BTreeMap<String, Vec<f64>>,
    pub metadata: BTreeMap<String, Value>,
}

impl CheckReport {
    fn new(name: &str, rule: &str) -> Self {
        CheckReport {
            name: name.into(),
            r_grid: Vec::new(),
            lhs: Vec::new(),
            rhs: Vec::new(),
            margin: Vec::new(),
            verdicts: Vec::new(),
            pass: false,
            rule: rule.into(),
            series: BTreeMap::new(),
            metadata: BTreeMap::new(),
        }
    }

    fn push_series(&mut self, key: &str, v: f64) {
        self.series.entry(key.to_string()).or_default().push(v);
    }

    fn meta(&mut self, key: &str, v: Value) {
        self.metadata.insert(key.to_string(), v);
    }

    /// Pass iff the verdicts at the `tail` largest radii hold.
    fn pass_on_tail(&mut self, tail: usize) {
        let s = self.verdicts.len().saturating_sub(tail.max(1));
        self.pass = !self.verdicts.is_empty() && self.verdicts[s..].iter().all(|&v| v);
        self.meta("tail", json!(tail.max(1)));
    }
}

fn precondition(msg: impl Into<String>) -> NevError {
    NevError::Precondition(msg.into())
}

fn check_radii(radii: &[f64]) -> Result<f64, NevError> {
    let rmax = radii.iter().cloned().fold(f64::NAN, f64::max);
    if radii.is_empty() || !rmax.is_finite() || radii.iter().any(|&r| r <= 0.0) {
        return Err(NevError::DegenerateGrid("radii must be positive and the grid nonempty".into()));
    }
    Ok(rmax)
}

/// Units `e^{Q_j}` in a sorted basis, with `G(u)` rewritten over it.
struct UnitSystem {
    basis: UnitBasis,
    perm: Vec<usize>,
    units: Vec<ExpPolyFunction>,
}

impl UnitSystem {
    fn new(freqs: &[ZPoly]) -> Result<Self, NevError> {
        match frequency_independence(freqs) {
            ind if ind.is_independent() => {}
            _ => return Err(precondition("units are not multiplicatively independent modulo constants")),
        }
        let (basis, perm) = UnitBasis::sorted(freqs.to_vec())?;
        let n = basis.len();
        let units = (0..n)
            .map(|j| ExpPolyFunction::new(LaurentPoly::var(n, j), basis.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UnitSystem { basis, perm, units })
    }

    /// `P(u)` for `P` written in the caller's variable order.
    fn compose(&self, p: &LaurentPoly) -> Result<ExpPolyFunction, NevError> {
        if p.arity() != self.basis.len() {
            return Err(NevError::Sym(expoly_core::SymError::ArityMismatch(self.basis.len(), p.arity())));
        }
        ExpPolyFunction::new(p.permute_vars(&self.perm), self.basis.clone())
    }

    fn compose_body(&self, p: &LaurentPoly) -> LaurentPoly {
        p.permute_vars(&self.perm)
    }

    /// `max_j T(r, u_j)`.
    fn max_characteristic(&self, r: f64) -> Result<f64, NevError> {
        let mut best = 0.0f64;
        for u in &self.units {
            best = best.max(proximity_function(u, r)?);
        }
        Ok(best)
    }

    /// Cartan characteristic of `[u_0 : … : u_n]` in the caller's order.
    fn map_characteristic(&self, r: f64) -> Result<f64, NevError> {
        characteristic_map(&self.units, r)
    }
}

/// `m_f(a, r) + N_f(a, r) - T_f(r)` stays within `osc_bound` across the grid.
pub fn first_main_check(
    f: &ExpPolyFunction,
    a: &GaussRat,
    radii: &[f64],
    settings: &CheckSettings,
) -> Result<CheckReport, NevError> {
    let rmax = check_radii(radii)?;
    let fa = f.minus_constant(&RatFunc::constant(a.clone()))?;
    let zs = zeros_in_disk(&fa, rmax, &settings.zeros)?;
    let ac = a.to_c64();
    let rows = settings.mode().map(radii.to_vec(), |req| -> Result<(f64, f64, f64, f64, f64), NevError> {
        let r = zs.clean_radius(req)?;
        let m_a = proximity_at(f, ac, r)?;
        let n_a = counting_function(&zs.records, r, None);
        let t = proximity_function(f, r)? + pole_counting(&zs.poles, r, None);
        Ok((r, m_a, n_a, t, m_a + n_a))
    });
    let mut rep = CheckReport::new(
        "first-main",
        "margin = (m(a) + N(a)) - T; verdict: |margin - (max+min)/2| <= osc_bound/2; pass: all verdicts",
    );
    for row in rows {
        let (r, m_a, n_a, t, lhs) = row?;
        rep.r_grid.push(r);
        rep.lhs.push(lhs);
        rep.rhs.push(t);
        rep.margin.push(lhs - t);
        rep.push_series("m_a", m_a);
        rep.push_series("N_a", n_a);
    }
    let hi = rep.margin.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = rep.margin.iter().cloned().fold(f64::INFINITY, f64::min);
    let mid = 0.5 * (hi + lo);
    rep.verdicts = rep.margin.iter().map(|m| (m - mid).abs() <= settings.osc_bound / 2.0).collect();
    rep.pass = rep.verdicts.iter().all(|&v| v);
    rep.meta("a", json!(a.to_string()));
    rep.meta("oscillation", json!(hi - lo));
    rep.meta("osc_bound", json!(settings.osc_bound));
    rep.meta("function", json!(f.render()));
    Ok(rep)
}

/// `m(r, f'/f) <= log⁺T + (1+ε) log⁺log⁺T + osc_bound` at the largest radii; `T(r, f'/f)/T(r, f)` is reported alongside.
pub fn logderiv_check(f: &ExpPolyFunction, radii: &[f64], settings: &CheckSettings) -> Result<CheckReport, NevError> {
    let rmax = check_radii(radii)?;
    let zs = zeros_in_disk(f, rmax, &settings.zeros)?;
    let eps = settings.eps;
    let rows = settings.mode().map(radii.to_vec(), |req| -> Result<[f64; 6], NevError> {
        let r = zs.clean_radius(req)?;
        let t = proximity_function(f, r)? + pole_counting(&zs.poles, r, None);
        let opts = crate::counting::circle_opts(f, r);
        let m_ld = circle_mean(|th| f.log_deriv(Complex64::from_polar(r, th)).norm().ln().max(0.0), &opts)?;
        // poles of f'/f: distinct zeros and poles of f, each simple
        let n_ld = counting_function(&zs.records, r, Some(1)) + pole_counting(&zs.poles, r, Some(1));
        let lt = t.max(1.0).ln();
        let rhs = lt + (1.0 + eps) * lt.max(1.0).ln() + settings.osc_bound;
        Ok([r, t, m_ld, m_ld + n_ld, n_ld, rhs])
    });
    let mut rep = CheckReport::new(
        "logderiv",
        "lhs = m(r, f'/f); rhs = log+T + (1+eps)·log+log+T + osc_bound; verdict: lhs <= rhs; pass: verdicts at the `tail` largest radii",
    );
    for row in rows {
        let [r, t, m_ld, t_ld, n_ld, rhs] = row?;
        rep.r_grid.push(r);
        rep.lhs.push(m_ld);
        rep.rhs.push(rhs);
        rep.margin.push(rhs - m_ld);
        rep.verdicts.push(m_ld <= rhs);
        rep.push_series("T", t);
        rep.push_series("T_logderiv", t_ld);
        rep.push_series("T_logderiv_over_T", if t > 0.0 { t_ld / t } else { f64::NAN });
        rep.push_series("m_logderiv_over_logT", if t > 1.0 { m_ld / t.ln() } else { f64::NAN });
        rep.push_series("N1_zeros_poles_over_T", if t > 0.0 { n_ld / t } else { f64::NAN });
    }
    rep.pass_on_tail(settings.tail);
    rep.meta("eps", json!(eps));
    rep.meta("osc_bound", json!(settings.osc_bound));
    rep.meta("function", json!(f.render()));
    Ok(rep)
}

/// Subsets `I` of `0..len` with `1 <= |I| < len` whose sum vanishes.
fn vanishing_subsums(fs: &[LaurentPoly]) -> Vec<Vec<usize>> {
    let n = fs.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let s = idx.iter().fold(LaurentPoly::zero(fs[0].arity()), |acc, &i| &acc + &fs[i]);
        if s.is_zero() {
            out.push(idx);
        }
    }
    out
}

/// Truncated Borel: for `f_0 + … + f_{n+1} = 0` with no vanishing proper
/// subsum, `T_f <= Σ N^{(n)}(0, f_i) + log⁺T_f + osc_bound` where `T_f` is the
/// Cartan characteristic of `[f_0 : … : f_n]`.
///
/// `fs` are the summands over a common basis; if they do not sum to zero,
/// `f_{n+1} = -(f_0 + … + f_n)` is appended.
pub fn truncated_borel_check(
    fs: &[LaurentPoly],
    basis: &UnitBasis,
    radii: &[f64],
    settings: &CheckSettings,
) -> Result<(CheckReport, Vec<ZeroSet>), NevError> {
    let rmax = check_radii(radii)?;
    if fs.len() < 2 {
        return Err(precondition("need at least two summands"));
    }
    let mut all = fs.to_vec();
    let total = fs.iter().fold(LaurentPoly::zero(basis.len()), |acc, f| &acc + f);
    if !total.is_zero() {
        all.push(-&total);
    }
    if all.len() < 3 {
        return Err(precondition("need f_0, …, f_{n+1} with n >= 1"));
    }
    let n = all.len() - 2;
    if let Some(bad) = vanishing_subsums(&all).first() {
        return Err(precondition(format!("proper subsum over indices {bad:?} vanishes identically")));
    }
    if let Some(i) = all.iter().position(|f| !f.denominator_lcm().is_one()) {
        return Err(precondition(format!("f_{i} has a coefficient with a pole; summands must be entire")));
    }
    let funcs = all.iter().map(|f| ExpPolyFunction::new(f.clone(), basis.clone())).collect::<Result<Vec<_>, _>>()?;
    let q = settings.trunc.unwrap_or(n as u32);
    let sets = settings
        .mode()
        .map(funcs.iter().collect::<Vec<_>>(), |f| zeros_in_disk(f, rmax, &settings.zeros))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&ZeroSet> = sets.iter().collect();
    let rows = settings.mode().map(radii.to_vec(), |req| -> Result<(f64, f64, Vec<f64>), NevError> {
        let r = common_radius(&refs, req)?;
        let t = characteristic_map(&funcs[..=n], r)?;
        let ns = sets.iter().map(|s| counting_function(&s.records, r, Some(q))).collect();
        Ok((r, t, ns))
    });
    let mut rep = CheckReport::new(
        "borel",
        "lhs = T_f (Cartan, f_0..f_n); rhs = sum_i N^(trunc)(0, f_i) + log+T_f + osc_bound; verdict: lhs <= rhs; pass: verdicts at the `tail` largest radii",
    );
    for row in rows {
        let (r, t, ns) = row?;
        let sum: f64 = ns.iter().sum();
        let rhs = sum + t.max(1.0).ln() + settings.osc_bound;
        rep.r_grid.push(r);
        rep.lhs.push(t);
        rep.rhs.push(rhs);
        rep.margin.push(rhs - t);
        rep.verdicts.push(t <= rhs);
        rep.push_series("sum_N_trunc", sum);
        rep.push_series("sum_N_trunc_over_T", if t > 0.0 { sum / t } else { f64::NAN });
        for (i, v) in ns.iter().enumerate() {
            rep.push_series(&format!("N_trunc_f{i}"), *v);
            rep.push_series(&format!("N_trunc_f{i}_over_T"), if t > 0.0 { v / t } else { f64::NAN });
        }
    }
    rep.pass_on_tail(settings.tail);
    rep.meta("n", json!(n));
    rep.meta("trunc", json!(q));
    rep.meta("osc_bound", json!(settings.osc_bound));
    rep.meta(
        "summands",
        json!(all.iter().map(|f| expoly_core::expr::render_laurent(f, basis)).collect::<Vec<_>>()),
    );
    rep.meta("appended_last", json!(!total.is_zero()));
    Ok((rep, sets))
}

/// Moving-target second main theorem for `g = G(u)` with `G` homogeneous of
/// degree `d` in `x_0..x_n`:
/// `(N(0,g) - N^{(1)}(0,g)) / T_u <= ε` and, when no `G(e_j)` vanishes,
/// `N^{(1)}(0,g) / (d·T_u) >= smt_lower`.
pub fn smt_moving_check(
    g: &LaurentPoly,
    freqs: &[ZPoly],
    radii: &[f64],
    settings: &CheckSettings,
) -> Result<(CheckReport, ZeroSet), NevError> {
    let rmax = check_radii(radii)?;
    let sys = UnitSystem::new(freqs)?;
    if g.is_zero() || g.has_negative_exponents() || !g.is_homogeneous() {
        return Err(precondition("G must be a nonzero homogeneous polynomial in x_0..x_n"));
    }
    if !is_squarefree(g)? {
        return Err(precondition("G has a repeated nonmonomial factor"));
    }
    let d = g.total_degree().unwrap_or(0);
    if d < 1 {
        return Err(precondition("G must have positive degree"));
    }
    let nvars = g.arity();
    let vertex_ok = (0..nvars).all(|j| {
        let mut e = vec![0i64; nvars];
        e[j] = d;
        !g.coeff(&Monomial(e)).is_zero()
    });
    let gu = sys.compose(g)?;
    let zs = zeros_in_disk(&gu, rmax, &settings.zeros)?;
    let eps = settings.eps;
    let rows = settings.mode().map(radii.to_vec(), |req| -> Result<[f64; 4], NevError> {
        let r = zs.clean_radius(req)?;
        let t = sys.map_characteristic(r)?;
        Ok([r, t, counting_function(&zs.records, r, None), counting_function(&zs.records, r, Some(1))])
    });
    let mut rep = CheckReport::new(
        "smt-moving",
        "lhs = (N - N1)/T_u; rhs = eps; verdict: lhs <= eps and (when applicable) N1/(deg G·T_u) >= smt_lower; pass: verdicts at the `tail` largest radii",
    );
    for row in rows {
        let [r, t, n, n1] = row?;
        let excess = (n - n1) / t;
        let lower = n1 / (d as f64 * t);
        rep.r_grid.push(r);
        rep.lhs.push(excess);
        rep.rhs.push(eps);
        rep.margin.push(eps - excess);
        rep.verdicts.push(excess <= eps && (!vertex_ok || lower >= settings.smt_lower));
        rep.push_series("T_u", t);
        rep.push_series("N", n);
        rep.push_series("N1", n1);
        rep.push_series("N1_over_degG_T", lower);
    }
    rep.pass_on_tail(settings.tail);
    rep.meta("deg_G", json!(d));
    rep.meta("eps", json!(eps));
    rep.meta("smt_lower", json!(settings.smt_lower));
    rep.meta("lower_bound_applies", json!(vertex_ok));
    rep.meta("zero_count", json!(zs.count(zs.radius)));
    rep.meta("g", json!(gu.render()));
    Ok((rep, zs))
}

fn coprime(f: &LaurentPoly, g: &LaurentPoly) -> Result<bool, NevError> {
    Ok(laurent_gcd(f, g)?.is_constant())
}

/// `N_gcd(F(u), G(u)) / max_j T(u_j) <= ε` at the largest radii, for
/// coprime `F, G` in `x_1..x_n`.
pub fn gcd_smallness_check(
    f: &LaurentPoly,
    g: &LaurentPoly,
    freqs: &[ZPoly],
    radii: &[f64],
    settings: &CheckSettings,
) -> Result<CheckReport, NevError> {
    let rmax = check_radii(radii)?;
    let sys = UnitSystem::new(freqs)?;
    if f.is_zero() || g.is_zero() {
        return Err(precondition("F and G must be nonzero"));
    }
    if !coprime(f, g)? {
        return Err(precondition("F and G are not coprime"));
    }
    let (fu, gu) = (sys.compose(f)?, sys.compose(g)?);
    let zf = zeros_in_disk(&fu, rmax, &settings.zeros)?;
    let zg = zeros_in_disk(&gu, rmax, &settings.zeros)?;
    let rep = ratio_report(
        "gcd-small",
        &sys,
        &zf,
        &zg,
        radii,
        settings,
        None,
    )?;
    Ok(rep)
}

/// For square-free `F`: `N_gcd(F(u), D_u F(u)) / max_j T(u_j) <= ε`, with the
/// implied bound `N_g <= N_gcd/(d-1)` for any `g` with `g^d | F(u)`.
pub fn dpower_obstruction_check(
    f: &LaurentPoly,
    freqs: &[ZPoly],
    d: u32,
    radii: &[f64],
    settings: &CheckSettings,
) -> Result<CheckReport, NevError> {
    let rmax = check_radii(radii)?;
    if d < 2 {
        return Err(precondition("power d must be at least 2"));
    }
    let sys = UnitSystem::new(freqs)?;
    if f.is_zero() || f.is_monomial() {
        return Err(precondition("F must not be a monomial"));
    }
    if !is_squarefree(f)? {
        return Err(precondition("F has a repeated nonmonomial factor"));
    }
    let body = sys.compose_body(f);
    let du = derivation_du(&body, &sys.basis)?;
    if du.is_zero() {
        return Err(precondition("D_u F(u) vanishes identically"));
    }
    let fu = ExpPolyFunction::new(body, sys.basis.clone())?;
    let dfu = ExpPolyFunction::new(du, sys.basis.clone())?;
    let zf = zeros_in_disk(&fu, rmax, &settings.zeros)?;
    let zd = zeros_in_disk(&dfu, rmax, &settings.zeros)?;
    ratio_report("dpower", &sys, &zf, &zd, radii, settings, Some(d))
}

fn ratio_report(
    name: &str,
    sys: &UnitSystem,
    za: &ZeroSet,
    zb: &ZeroSet,
    radii: &[f64],
    settings: &CheckSettings,
    power: Option<u32>,
) -> Result<CheckReport, NevError> {
    let rows = settings.mode().map(radii.to_vec(), |req| -> Result<[f64; 3], NevError> {
        let r = common_radius(&[za, zb], req)?;
        let t = sys.max_characteristic(r)?;
        Ok([r, t, gcd_counting(&za.records, &zb.records, r)?])
    });
    let mut rep = CheckReport::new(
        name,
        "lhs = N_gcd / max_j T(u_j); rhs = eps; verdict: lhs <= eps; pass: verdicts at the `tail` largest radii",
    );
    for row in rows {
        let [r, t, ng] = row?;
        let ratio = ng / t;
        rep.r_grid.push(r);
        rep.lhs.push(ratio);
        rep.rhs.push(settings.eps);
        rep.margin.push(settings.eps - ratio);
        rep.verdicts.push(ratio <= settings.eps);
        rep.push_series("N_gcd", ng);
        rep.push_series("max_T_u", t);
        if let Some(d) = power {
            rep.push_series("implied_N_g_bound", ng / (d - 1) as f64);
        }
    }
    rep.pass_on_tail(settings.tail);
    rep.meta("eps", json!(settings.eps));
    if let Some(d) = power {
        rep.meta("d", json!(d));
    }
    Ok(rep)
}

/// Complex coefficients of a form specialized at `z0`.
struct Form {
    terms: Vec<(Vec<i64>, Complex64)>,
    degree: i64,
    scale: f64,
}

impl Form {
    fn new(p: &BTreeMap<Monomial, GaussRat>, degree: i64) -> Self {
        let terms: Vec<(Vec<i64>, Complex64)> = p.iter().map(|(m, c)| (m.0.clone(), c.to_c64())).collect();
        let scale = terms.iter().map(|t| t.1.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
        Form { terms, degree, scale }
    }

    fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms.iter().fold(Complex64::zero(), |acc, (e, c)| {
            acc + e.iter().zip(x).fold(*c, |v, (&k, xi)| v * xi.powi(k as i32))
        })
    }

    fn grad(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..x.len())
            .map(|j| {
                self.terms.iter().filter(|(e, _)| e[j] > 0).fold(Complex64::zero(), |acc, (e, c)| {
                    let mut v = *c * e[j] as f64;
                    for (i, (&k, xi)) in e.iter().zip(x).enumerate() {
                        let k = if i == j { k - 1 } else { k };
                        v *= xi.powi(k as i32);
                    }
                    acc + v
                })
            })
            .collect()
    }

    /// `|F(P)|` relative to the coefficient size, with `‖P‖ = 1`.
    fn rel(&self, x: &[Complex64]) -> f64 {
        self.eval(x).norm() / self.scale
    }
}

fn normalize_point(x: Vec<Complex64>) -> Vec<Complex64> {
    let k = x.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).map(|p| p.0).unwrap_or(0);
    let piv = x[k];
    let v: Vec<Complex64> = x.iter().map(|c| c / piv).collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|c| c / n).collect()
}

fn det(m: &[Vec<Complex64>]) -> Complex64 {
    match m.len() {
        0 => Complex64::new(1.0, 0.0),
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<Complex64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                m[0][j] * det(&minor) * s
            })
            .sum(),
    }
}

/// Roots of a binary form `Σ c_e x_a^{d-e} x_b^e`, as points `(x_a, x_b)`.
fn binary_roots(coeffs: &[Complex64], d: usize) -> Vec<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::zero();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut top = coeffs.len();
    while top > 0 && coeffs[top - 1].norm() <= 1e-14 * scale {
        top -= 1;
    }
    let mut out: Vec<(Complex64, Complex64)> = poly_roots(&coeffs[..top]).into_iter().map(|t| (one, t)).collect();
    let deficit = d + 1 - top;
    if deficit > 0 && top > 0 {
        out.push((zero, one));
    }
    out
}

/// Common zeros of two plane forms in `P^2`; `a, b` have constant
/// coefficients.
fn plane_intersections(a: &LaurentPoly, b: &LaurentPoly, fa: &Form, fb: &Form) -> Result<Vec<Vec<Complex64>>, NevError> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::zero();
    let mut pts: Vec<Vec<Complex64>> = Vec::new();
    // affine chart x0 = 1: resultant in x2 leaves a polynomial in x1
    let chart = |p: &LaurentPoly| {
        LaurentPoly::from_terms(
            p.arity() - 1,
            p.terms().iter().map(|(m, c)| (Monomial(m.0[1..].to_vec()), c.clone())),
        )
    };
    let res = resultant_in(&chart(a), &chart(b), 1)?;
    if res.is_zero() {
        return Err(precondition("the two divisors share a component"));
    }
    let (ra, _) = (res.split_by_var(0), ());
    let top = ra.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut cs = vec![zero; top + 1];
    for (e, c) in ra {
        cs[e as usize] = c.as_constant().and_then(|c| c.as_constant()).map(|g| g.to_c64()).unwrap_or(zero);
    }
    let mut xs1 = poly_roots(&cs);
    xs1.dedup_by(|p, q| (*p - *q).norm() < 1e-9);
    for x1 in xs1 {
        // candidate x2 from F_a(1, x1, x2) = 0, keep those where F_b is small
        let d = fa.degree as usize;
        let mut c2 = vec![zero; d + 1];
        for (e, c) in &fa.terms {
            c2[e[2] as usize] += c * x1.powi(e[1] as i32);
        }
        for (_, x2) in binary_roots(&c2, d).into_iter().filter(|(h, _)| h.norm() > 0.0) {
            let p = polish(fa, fb, vec![one, x1, x2]);
            if fa.rel(&normalize_point(p.clone())) < 1e-8 && fb.rel(&normalize_point(p.clone())) < 1e-8 {
                pts.push(normalize_point(p));
            }
        }
    }
    // line at infinity x0 = 0
    let mut inf = Vec::new();
    let d = fa.degree as usize;
    let mut c = vec![zero; d + 1];
    for (e, k) in &fa.terms {
        if e[0] == 0 {
            c[e[2] as usize] += k;
        }
    }
    if c.iter().all(|v| v.norm() == 0.0) {
        return Err(precondition("a divisor contains the line at infinity; choose other coordinates"));
    }
    for (h, t) in binary_roots(&c, d) {
        inf.push(vec![zero, h, t]);
    }
    for p in inf {
        let p = normalize_point(p);
        if fb.rel(&p) < 1e-8 {
            pts.push(p);
        }
    }
    dedup_points(&mut pts);
    Ok(pts)
}

/// Newton on the 2×2 system in the chart `x0 = 1`.
fn polish(fa: &Form, fb: &Form, mut p: Vec<Complex64>) -> Vec<Complex64> {
    for _ in 0..30 {
        let (va, vb) = (fa.eval(&p), fb.eval(&p));
        let (ga, gb) = (fa.grad(&p), fb.grad(&p));
        let dt = ga[1] * gb[2] - ga[2] * gb[1];
        if dt.norm() == 0.0 {
            break;
        }
        let d1 = (va * gb[2] - vb * ga[2]) / dt;
        let d2 = (ga[1] * vb - gb[1] * va) / dt;
        p[1] -= d1;
        p[2] -= d2;
        if d1.norm() + d2.norm() < 1e-15 * (1.0 + p[1].norm() + p[2].norm()) {
            break;
        }
    }
    p
}

fn same_point(p: &[Complex64], q: &[Complex64]) -> bool {
    // projective equality: p ∧ q ≈ 0
    let mut m = 0.0f64;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            m = m.max((p[i] * q[j] - p[j] * q[i]).norm());
        }
    }
    m < 1e-7
}

fn dedup_points(pts: &mut Vec<Vec<Complex64>>) {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for p in pts.drain(..) {
        if !out.iter().any(|q| same_point(&p, q)) {
            out.push(p);
        }
    }
    *pts = out;
}

/// Jacobian transversality at a specialization `z = z0` for `n + 1` forms in
/// `x_0..x_n` (`n = 1, 2`): at each point `P` where `n` of the divisors meet
/// transversally and the remaining form is nonzero, the Jacobian determinant
/// `G` is nonzero, and `G(P)·P_j = ±d_k F_k(P)·M_{kj}(P)`. The Euler identity
/// is checked exactly for every form.
pub fn transversality_check(fs: &[LaurentPoly], z0: &GaussRat) -> Result<CheckReport, NevError> {
    let m = fs.len();
    if !(2..=3).contains(&m) {
        return Err(precondition("transversality is checked for n = 1 or 2 (two or three forms)"));
    }
    let mut euler = Vec::new();
    for f in fs {
        euler.push(euler_identity(f)?);
    }
    let g = jacobian_det(fs)?;
    let spec = |p: &LaurentPoly| -> Result<Form, NevError> {
        let s = p.specialize_z(z0).ok_or_else(|| precondition("z0 is a pole of a coefficient"))?;
        if s.is_empty() {
            return Err(precondition("a form vanishes identically at z0"));
        }
        Ok(Form::new(&s, p.total_degree().unwrap_or(0)))
    };
    let forms = fs.iter().map(spec).collect::<Result<Vec<_>, _>>()?;
    // exact copies at z0 for the resultant
    let specialized: Vec<LaurentPoly> = fs
        .iter()
        .map(|p| {
            let s = p.specialize_z(z0).unwrap_or_default();
            LaurentPoly::from_terms(p.arity(), s.into_iter().map(|(m, c)| (m, RatFunc::constant(c))))
        })
        .collect();
    let gform = if g.is_zero() { None } else { Some(spec(&g)?) };
    let n = m - 1;

    let mut rep = CheckReport::new(
        "transversal",
        "per intersection point meeting the hypotheses: lhs = |G(P)|/|G|_coeff, rhs = 1e-8; verdict: lhs > rhs and identity residual < 1e-6; pass: all verdicts and Euler identity for every form",
    );
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for k in 0..m {
        let s: Vec<usize> = (0..m).filter(|&i| i != k).collect();
        let pts = if n == 1 {
            let f = &forms[s[0]];
            let d = f.degree as usize;
            let mut c = vec![Complex64::zero(); d + 1];
            for (e, v) in &f.terms {
                c[e[1] as usize] += v;
            }
            binary_roots(&c, d).into_iter().map(|(a, b)| normalize_point(vec![a, b])).collect::<Vec<_>>()
        } else {
            plane_intersections(&specialized[s[0]], &specialized[s[1]], &forms[s[0]], &forms[s[1]])?
        };
        for p in pts {
            let other = forms[k].rel(&p);
            let rows: Vec<Vec<Complex64>> = s.iter().map(|&i| forms[i].grad(&p)).collect();
            // largest n×n minor of the gradient rows, relative to their size
            let norms: f64 = rows.iter().map(|r| r.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()).product();
            let minors: Vec<f64> = (0..m)
                .map(|j| {
                    let sub: Vec<Vec<Complex64>> =
                        rows.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
                    det(&sub).norm()
                })
                .collect();
            let transverse = minors.iter().cloned().fold(0.0, f64::max) / norms.max(f64::MIN_POSITIVE);
            let desc = json!({
                "point": p.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                "divisors": s,
                "other": k,
                "other_value": other,
                "transversality": transverse,
            });
            if other < 1e-8 || transverse < 1e-8 {
                skipped.push(desc);
                continue;
            }
            let gval = gform.as_ref().map_or(Complex64::zero(), |gf| gf.eval(&p));
            let gscale = gform.as_ref().map_or(1.0, |gf| gf.scale);
            // Cramer: G·P_j = d_k F_k(P)·(-1)^{k+j}·M_{kj}
            let j = (0..m).max_by(|a, b| p[*a].norm().total_cmp(&p[*b].norm())).unwrap_or(0);
            let full: Vec<Vec<Complex64>> = (0..m).map(|i| forms[i].grad(&p)).collect();
            let minor: Vec<Vec<Complex64>> = full
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, r)| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if (k + j) % 2 == 0 { 1.0 } else { -1.0 };
            let predicted = forms[k].eval(&p) * forms[k].degree as f64 * det(&minor) * sign;
            let lhs = gval * p[j];
            let resid = (lhs - predicted).norm() / (lhs.norm().max(predicted.norm()).max(1e-300));
            let rel_g = gval.norm() / gscale;
            rep.r_grid.push(points.len() as f64);
            rep.lhs.push(rel_g);
            rep.rhs.push(1e-8);
            rep.margin.push(rel_g - 1e-8);
            rep.verdicts.push(rel_g > 1e-8 && resid < 1e-6);
            rep.push_series("identity_residual", resid);
            rep.push_series("transversality", transverse);
            let mut desc = desc;
            desc["G_abs"] = json!(gval.norm());
            desc["identity_residual"] = json!(resid);
            points.push(desc);
        }
    }
    rep.pass = euler.iter().all(|&e| e) && rep.verdicts.iter().all(|&v| v);
    rep.meta("n", json!(n));
    rep.meta("z0", json!(z0.to_string()));
    rep.meta("euler_identity", json!(euler));
    rep.meta("points", Value::Array(points));
    rep.meta("skipped_points", Value::Array(skipped));
    rep.meta("jacobian", json!(expoly_core::expr::render_xpoly(&g, 0)));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use expoly_core::expr::{lower_xpoly, parse_expression};

    fn form(text: &str, arity: usize) -> LaurentPoly {
        lower_xpoly(&parse_expression(text).unwrap(), 0, arity).unwrap()
    }

    #[test]
    fn subsums() {
        let a = LaurentPoly::var(1, 0);
        let one = LaurentPoly::one(1);
        let fs = vec![a.clone(), -&a, one.clone(), -&one];
        assert_eq!(vanishing_subsums(&fs), vec![vec![0, 1], vec![2, 3]]);
        assert!(vanishing_subsums(&[a.clone(), one.clone(), -&(&a + &one)]).is_empty());
    }

    #[test]
    fn transversal_lines_in_plane() {
        let fs = [form("x0 + x1 + x2", 3), form("x1 - 2*x2", 3), form("x0*x0 + x1*x2 + x2*x2", 3)];
        let rep = transversality_check(&fs, &GaussRat::from_int(1)).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(!rep.verdicts.is_empty());
    }

    #[test]
    fn transversal_on_line() {
        let fs = [form("x0*x0 - z*x1*x1", 2), form("x0*x1 + x1*x1", 2)];
        let rep = transversality_check(&fs, &GaussRat::from_int(4)).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.verdicts.len(), 4);
    }
}
