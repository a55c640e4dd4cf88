use std::f64::consts::PI;

use expoly_core::expr::{lower_joint, lower_xpoly, parse_expression, parse_frequencies};
use expoly_core::sym::GaussRat;
use expoly_nevlab::*;
use num_complex::Complex64;

fn func(text: &str) -> ExpPolyFunction {
    ExpPolyFunction::parse(text).unwrap()
}

fn xpoly(text: &str, first: u32, arity: usize) -> expoly_core::sym::LaurentPoly {
    lower_xpoly(&parse_expression(text).unwrap(), first, arity).unwrap()
}

/// Trapezoid rule on the circle, an independent proximity oracle.
fn trapezoid_mean(g: impl Fn(Complex64) -> f64, r: f64, n: usize) -> f64 {
    (0..n).map(|k| g(Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64))).sum::<f64>() / n as f64
}

#[test]
fn unit_characteristics_match_closed_form() {
    let e1 = func("exp[z]");
    for r in [5.0, 10.0, 20.0] {
        let t = characteristic(&e1, &[], r).unwrap();
        assert!((t - r / PI).abs() / (r / PI) < 1e-8);
    }
    let e2 = func("exp[z^2]");
    for r in [3.0, 5.0, 8.0] {
        let t = characteristic(&e2, &[], r).unwrap();
        assert!((t - r * r / PI).abs() / (r * r / PI) < 1e-8);
    }
}

#[test]
fn exp_minus_one_zeros_and_jensen() {
    let f = func("exp[z] - 1");
    let zs = zeros_in_disk(&f, 20.0, &ZeroOptions::default()).unwrap();
    assert_eq!(zs.radius, 20.0);
    let inside: Vec<&ZeroRecord> = zs.inside().collect();
    assert_eq!(inside.len(), 7);
    for z in &inside {
        assert_eq!(z.multiplicity, 1);
        let k = (z.location.im / (2.0 * PI)).round();
        assert!((z.location - Complex64::new(0.0, 2.0 * PI * k)).norm() < 1e-9, "{:?}", z.location);
        assert!(z.enclosure_radius > 0.0);
    }
    assert_eq!(zs.outer_winding, 7);
    let j = jensen_check(&f, &zs).unwrap();
    assert!(j.difference.abs() < 1e-4, "{j:?}");
}

#[test]
fn counting_and_proximity_at_seven() {
    let f = func("exp[z] - 1");
    let radii = RGrid::new(1.0, 19.0, 10, false).unwrap().radii();
    let (samples, _) = analyze(&f, &radii, &[1], &ZeroOptions::default()).unwrap();
    let s = samples.iter().find(|s| s.requested_r == 7.0).unwrap();
    let oracle = 7f64.ln() + 2.0 * (7.0 / (2.0 * PI)).ln();
    assert!((s.n - oracle).abs() < 1e-9, "{} vs {}", s.n, oracle);
    assert_eq!(s.n_trunc[&1], s.n);
    assert_eq!(s.n_count, 3);
    let m = trapezoid_mean(|z| (z.exp() - 1.0).norm().ln().max(0.0), 7.0, 400_000);
    assert!((s.m - m).abs() < 1e-6, "{} vs {}", s.m, m);
    let order = order_estimate(&samples.iter().map(|s| (s.r, s.t)).collect::<Vec<_>>()).unwrap();
    assert!((order - 1.0).abs() < 0.1, "{order}");
}

#[test]
fn first_main_theorem_oscillation() {
    let f = func("exp[z]");
    let radii = RGrid::new(5.0, 50.0, 10, false).unwrap().radii();
    let rep = first_main_check(&f, &GaussRat::from_int(1), &radii, &CheckSettings::default()).unwrap();
    assert!(rep.pass, "{:?}", rep.margin);
    let osc = rep.metadata["oscillation"].as_f64().unwrap();
    assert!(osc <= 1.0);
}

#[test]
fn moving_target_instance() {
    let g = xpoly("x0 + x1 + x2", 0, 3);
    let freqs = parse_frequencies("exp[z]; exp[i*z]; exp[z^2]").unwrap();
    let radii = RGrid::new(2.0, 8.0, 7, false).unwrap().radii();
    let (rep, zs) = smt_moving_check(&g, &freqs, &radii, &CheckSettings::default()).unwrap();
    assert!(rep.pass);
    let n = rep.r_grid.len();
    for i in n - 2..n {
        assert!(rep.lhs[i] <= 0.05);
        assert!(rep.series["N1_over_degG_T"][i] >= 0.9);
    }
    let count = zs.count(zs.radius);
    assert!((30..=60).contains(&count), "{count}");
}

#[test]
fn moving_target_preconditions() {
    let g = xpoly("x0 + x1", 0, 2);
    let dep = parse_frequencies("exp[z]; exp[2*z]").unwrap();
    let err = smt_moving_check(&g, &dep, &[4.0], &CheckSettings::default()).unwrap_err();
    assert!(err.is_precondition());
    let sq = xpoly("(x0 + x1)^2", 0, 2);
    let ok = parse_frequencies("exp[z]; exp[z^2]").unwrap();
    assert!(smt_moving_check(&sq, &ok, &[4.0], &CheckSettings::default()).unwrap_err().is_precondition());
}

#[test]
fn gcd_smallness_instance() {
    let f = xpoly("x1 + 1", 1, 2);
    let g = xpoly("x2 + 1", 1, 2);
    let freqs = parse_frequencies("exp[z]; exp[z^2]").unwrap();
    let radii = RGrid::new(1.0, 10.0, 10, false).unwrap().radii();
    let rep = gcd_smallness_check(&f, &g, &freqs, &radii, &CheckSettings::default()).unwrap();
    assert!(rep.lhs.iter().all(|&x| x == 0.0));
    assert!(rep.pass);
    let h = xpoly("(x1 + 1)*(x2 - 1)", 1, 2);
    assert!(gcd_smallness_check(&f, &h, &freqs, &radii, &CheckSettings::default()).unwrap_err().is_precondition());
}

#[test]
fn shared_zeros_are_counted() {
    // F(u) = e^z - 1 and G(u) = e^{2z} - 1... written over independent units
    // with a shared factor in the numerical sense only through z = 0 style
    // coincidences: e^z - 1 and e^{iz} - 1 share exactly the zero at 0.
    let f = xpoly("x1 - 1", 1, 2);
    let g = xpoly("x2 - 1", 1, 2);
    let freqs = parse_frequencies("exp[z]; exp[i*z]").unwrap();
    let rep = gcd_smallness_check(&f, &g, &freqs, &[3.0, 6.0, 12.0], &CheckSettings::default()).unwrap();
    for (r, ng) in rep.r_grid.iter().zip(&rep.series["N_gcd"]) {
        assert!((ng - r.ln()).abs() < 1e-12, "{ng} vs log {r}");
    }
}

#[test]
fn dpower_instance() {
    let f = xpoly("x1^2 + x2 + 1", 1, 2);
    let freqs = parse_frequencies("exp[z]; exp[z^2]").unwrap();
    let rep = dpower_obstruction_check(&f, &freqs, 2, &[2.0, 4.0, 6.0], &CheckSettings::default()).unwrap();
    assert!(rep.series.contains_key("implied_N_g_bound"));
    assert!(rep.lhs.iter().all(|x| x.is_finite() && *x >= 0.0));
    let sq = xpoly("(x1 + 1)^2", 1, 2);
    assert!(dpower_obstruction_check(&sq, &freqs, 2, &[2.0], &CheckSettings::default()).unwrap_err().is_precondition());
}

#[test]
fn borel_instance() {
    let exprs: Vec<_> = ["exp[z^2]", "exp[z]", "1"].iter().map(|s| parse_expression(s).unwrap()).collect();
    let refs: Vec<&_> = exprs.iter().collect();
    let (fs, basis) = lower_joint(&refs).unwrap();
    let radii = RGrid::new(2.0, 8.0, 7, false).unwrap().radii();
    let settings = CheckSettings { trunc: Some(2), ..CheckSettings::default() };
    let (rep, _) = truncated_borel_check(&fs, &basis, &radii, &settings).unwrap();
    let ratio = *rep.series["N_trunc_f3_over_T"].last().unwrap();
    assert!((0.9..=1.05).contains(&ratio), "{ratio}");
    assert!(rep.pass);
    assert_eq!(rep.metadata["appended_last"], true);
}

#[test]
fn borel_rejects_vanishing_subsum() {
    let exprs: Vec<_> = ["exp[z]", "-exp[z]", "1"].iter().map(|s| parse_expression(s).unwrap()).collect();
    let refs: Vec<&_> = exprs.iter().collect();
    let (fs, basis) = lower_joint(&refs).unwrap();
    let err = truncated_borel_check(&fs, &basis, &[3.0], &CheckSettings::default()).unwrap_err();
    assert!(err.is_precondition());
}

#[test]
fn logderiv_is_small() {
    let f = func("exp[z^2] + exp[z] + 1");
    let radii = RGrid::new(2.0, 8.0, 4, false).unwrap().radii();
    let rep = logderiv_check(&f, &radii, &CheckSettings::default()).unwrap();
    assert!(rep.pass, "{:?} {:?}", rep.lhs, rep.rhs);
    // with few zeros the logarithmic derivative is small against T
    let g = func("z*exp[z^2]");
    let rep = logderiv_check(&g, &radii, &CheckSettings::default()).unwrap();
    let ratio = rep.series["T_logderiv_over_T"].last().unwrap();
    assert!(*ratio < 0.5, "{ratio}");
}

#[test]
fn transversality_example() {
    let fs = [xpoly("x0*x1 - z*x2^2", 0, 3), xpoly("x0 + x1 + x2", 0, 3), xpoly("x0^2 + 2*x1^2 - x2^2", 0, 3)];
    let rep = transversality_check(&fs, &GaussRat::from_int(3)).unwrap();
    assert!(rep.pass, "{:#?}", rep.metadata);
    assert!(rep.verdicts.len() >= 4);
}

#[test]
fn modes_agree_exactly() {
    let f = func("exp[z^2] - z*exp[z] + 2");
    let radii = [2.0, 3.0, 4.0];
    let a = analyze(&f, &radii, &[1, 2], &ZeroOptions::default().with_mode(ExecMode::Sequential)).unwrap();
    let b = analyze(&f, &radii, &[1, 2], &ZeroOptions::default().with_mode(ExecMode::Parallel)).unwrap();
    assert_eq!(serde_json::to_string(&a.0).unwrap(), serde_json::to_string(&b.0).unwrap());
    assert_eq!(a.1.records, b.1.records);
}
