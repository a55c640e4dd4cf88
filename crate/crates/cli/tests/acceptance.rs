//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use expoly_core::expr::{lower_joint, lower_to_symbolic, lower_xpoly, parse_expression, parse_frequencies};
use expoly_core::sym::{
    critical_pair, derivation_du, discriminant, is_squarefree, squarefree_decompose, GaussRat, LaurentPoly, Monomial,
    MonicYPoly, RatFunc, UnitBasis, ZPoly,
};
use expoly_nevlab::{
    characteristic, first_main_check, gcd_smallness_check, jensen_check, smt_moving_check, truncated_borel_check,
    zeros_in_disk, CheckSettings, ExpPolyFunction, RGrid, ZeroOptions,
};
use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Verdict = Result<String, String>;

fn func(text: &str) -> ExpPolyFunction {
    ExpPolyFunction::parse(text).expect("valid expression")
}

fn xpoly(text: &str, first: u32, arity: usize) -> LaurentPoly {
    lower_xpoly(&parse_expression(text).expect("parses"), first, arity).expect("lowers")
}

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn characteristic_oracle() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (text, power, radii) in [("exp[z]", 1, [5.0, 10.0, 20.0]), ("exp[z^2]", 2, [3.0, 5.0, 8.0])] {
        let f = func(text);
        for r in radii {
            let start = Instant::now();
            let t = characteristic(&f, &[], r).map_err(|e| e.to_string())?;
            slowest = slowest.max(start.elapsed());
            let exact = f64::powi(r, power) / PI;
            worst = worst.max((t - exact).abs() / exact);
        }
    }
    ensure(
        worst <= 0.01 && slowest < Duration::from_secs(5),
        format!("max relative error {worst:.3e} (limit 0.01), slowest {slowest:.2?}"),
    )
}

fn zero_count_oracle() -> Verdict {
    let f = func("exp[z] - 1");
    let zs = zeros_in_disk(&f, 20.0, &ZeroOptions::default()).map_err(|e| e.to_string())?;
    let inside: Vec<_> = zs.inside().collect();
    let mut worst: f64 = 0.0;
    let mut matched = [false; 7];
    for z in &inside {
        let k = (z.location.im / (2.0 * PI)).round() as i64;
        if z.multiplicity != 1 || !(-3..=3).contains(&k) {
            return Err(format!("unexpected record {:?}", z));
        }
        matched[(k + 3) as usize] = true;
        worst = worst.max((z.location - Complex64::new(0.0, 2.0 * PI * k as f64)).norm());
    }
    let jensen = jensen_check(&f, &zs).map_err(|e| e.to_string())?;
    ensure(
        inside.len() == 7 && matched.iter().all(|&m| m) && worst <= 1e-9 && jensen.difference.abs() <= 1e-4,
        format!(
            "{} simple zeros, max distance to 2πik {worst:.1e}, Jensen difference {:.1e}",
            inside.len(),
            jensen.difference
        ),
    )
}

fn first_main() -> Verdict {
    let radii = RGrid::new(5.0, 50.0, 10, false).map_err(|e| e.to_string())?.radii();
    let rep = first_main_check(&func("exp[z]"), &GaussRat::from_int(1), &radii, &CheckSettings::default())
        .map_err(|e| e.to_string())?;
    let hi = rep.margin.iter().cloned().fold(f64::MIN, f64::max);
    let lo = rep.margin.iter().cloned().fold(f64::MAX, f64::min);
    ensure(rep.pass && hi - lo <= 1.0, format!("oscillation of m+N-T over 10 radii in [5, 50]: {:.4}", hi - lo))
}

fn moving_target() -> Verdict {
    let start = Instant::now();
    let g = xpoly("x0 + x1 + x2", 0, 3);
    let freqs = parse_frequencies("exp[z]; exp[i*z]; exp[z^2]").map_err(|e| e.to_string())?;
    let radii = RGrid::new(2.0, 8.0, 7, false).map_err(|e| e.to_string())?.radii();
    let (rep, zs) = smt_moving_check(&g, &freqs, &radii, &CheckSettings::default()).map_err(|e| e.to_string())?;
    let ratio = &rep.series["N1_over_degG_T"];
    let k = rep.r_grid.len();
    let tail: Vec<(f64, f64, f64)> = (k - 2..k).map(|i| (rep.r_grid[i], rep.lhs[i], ratio[i])).collect();
    let ok = tail.iter().all(|&(_, excess, r1)| excess <= 0.05 && r1 >= 0.9);
    let elapsed = start.elapsed();
    ensure(
        ok && elapsed < Duration::from_secs(180),
        format!(
            "{} zeros at r = 8; (N - N1)/T and N1/T at r = {}: {:.4}, {:.4}; at r = {}: {:.4}, {:.4}; {elapsed:.2?}",
            zs.count(zs.radius),
            tail[0].0,
            tail[0].1,
            tail[0].2,
            tail[1].0,
            tail[1].1,
            tail[1].2
        ),
    )
}

fn gcd_smallness() -> Verdict {
    let freqs = parse_frequencies("exp[z]; exp[z^2]").map_err(|e| e.to_string())?;
    let radii = RGrid::new(1.0, 10.0, 10, false).map_err(|e| e.to_string())?.radii();
    let rep = gcd_smallness_check(&xpoly("x1 + 1", 1, 2), &xpoly("x2 + 1", 1, 2), &freqs, &radii, &CheckSettings::default())
        .map_err(|e| e.to_string())?;
    let max = rep.lhs.iter().cloned().fold(0.0, f64::max);
    ensure(max == 0.0, format!("largest N_gcd/T over r = 1..10: {max}"))
}

fn borel() -> Verdict {
    let texts = ["exp[z^2]", "exp[z]", "1"];
    let asts: Vec<_> = texts.iter().map(|t| parse_expression(t).expect("parses")).collect();
    let (fs, basis) = lower_joint(&asts.iter().collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    // independent subsum test on f0..f3 with f3 = -(f0 + f1 + f2)
    let mut all = fs.clone();
    all.push(-&fs.iter().fold(LaurentPoly::zero(basis.len()), |a, f| &a + f));
    let m = all.len();
    let vanishing = (1u32..(1 << m) - 1)
        .filter(|mask| mask.count_ones() >= 2)
        .filter(|mask| (0..m).filter(|i| mask & (1 << i) != 0).fold(LaurentPoly::zero(basis.len()), |a, i| &a + &all[i]).is_zero())
        .count();
    let radii = RGrid::new(2.0, 8.0, 7, false).map_err(|e| e.to_string())?.radii();
    let settings = CheckSettings { trunc: Some(2), ..CheckSettings::default() };
    let (rep, _) = truncated_borel_check(&fs, &basis, &radii, &settings).map_err(|e| e.to_string())?;
    let ratio = *rep.series["N_trunc_f3_over_T"].last().expect("nonempty grid");
    ensure(
        vanishing == 0 && (0.9..=1.05).contains(&ratio),
        format!("vanishing proper subsums: {vanishing}; N2(f3)/T at r = 8: {ratio:.4}"),
    )
}

fn scalar(rng: &mut ChaCha8Rng) -> GaussRat {
    let c = GaussRat::gaussian(rng.gen_range(-3..=3), rng.gen_range(-2..=2));
    &c / &GaussRat::from_int(rng.gen_range(1..=3))
}

fn ratfunc(rng: &mut ChaCha8Rng) -> RatFunc {
    let num = ZPoly::new((0..rng.gen_range(1..=2)).map(|_| scalar(rng)).collect());
    let den = match rng.gen_range(0..3) {
        0 => ZPoly::new(vec![GaussRat::from_int(1)]),
        1 => ZPoly::new(vec![GaussRat::from_int(1), GaussRat::from_int(1)]),
        _ => ZPoly::new(vec![GaussRat::from_int(0), GaussRat::from_int(1)]),
    };
    RatFunc::new(num, den)
}

fn laurent(rng: &mut ChaCha8Rng, arity: usize, max_terms: usize) -> LaurentPoly {
    loop {
        let terms: Vec<(Monomial, RatFunc)> = (0..rng.gen_range(1..=max_terms))
            .map(|_| (Monomial((0..arity).map(|_| rng.gen_range(-1..=2)).collect()), ratfunc(rng)))
            .collect();
        let p = LaurentPoly::from_terms(arity, terms);
        if !p.is_zero() {
            return p;
        }
    }
}

fn symbolic_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let zp = |cs: &[i64]| ZPoly::new(cs.iter().map(|&c| GaussRat::from_int(c)).collect());
    let basis = UnitBasis::new(vec![zp(&[0, 0, 1]), zp(&[0, 1])]).map_err(|e| e.to_string())?;
    let du = |p: &LaurentPoly| derivation_du(p, &basis).map_err(|e| e.to_string());

    let mut product = 0;
    for _ in 0..200 {
        let (f, g) = (laurent(&mut rng, 2, 3), laurent(&mut rng, 2, 3));
        if du(&(&f * &g))? == &(&du(&f)? * &g) + &(&f * &du(&g)?) {
            product += 1;
        }
    }

    let mut squarefree = 0;
    for _ in 0..100 {
        let (f, g) = (laurent(&mut rng, 2, 3), laurent(&mut rng, 2, 2));
        let p = &(&f * &g) * &g;
        let sf = squarefree_decompose(&p).map_err(|e| e.to_string())?;
        let parts_ok = sf.factors.iter().all(|(s, _)| is_squarefree(s).unwrap_or(false));
        if sf.reassemble(2) == p && parts_ok {
            squarefree += 1;
        }
    }

    // irreducible, pairwise distinct, free of monomial factors
    let u1 = LaurentPoly::var(2, 0);
    let u2 = LaurentPoly::var(2, 1);
    let c = |n: i64| LaurentPoly::from_int(2, n);
    let z = LaurentPoly::constant(2, RatFunc::z());
    let irreducible = [
        &u1 - &c(1),
        &u1 + &c(2),
        &u2 - &z,
        &(&u1 + &u2) + &c(1),
        &(&u1 * &u2) - &c(3),
        &(&u1 * &u1) - &z,
        &(&u2 * &u2) + &u1,
    ];
    let mut coprime = 0;
    for _ in 0..50 {
        let mut f = LaurentPoly::one(2);
        for _ in 0..rng.gen_range(1..=3) {
            f = &f * &irreducible[rng.gen_range(0..irreducible.len())].pow(rng.gen_range(1..=3));
        }
        if critical_pair(&f, &basis).map_err(|e| e.to_string())?.is_coprime() {
            coprime += 1;
        }
    }
    ensure(
        product == 200 && squarefree == 100 && coprime == 50,
        format!("product rule {product}/200, square-free reassembly {squarefree}/100, coprime critical pairs {coprime}/50"),
    )
}

fn cli_roots(fy: &str) -> Result<Vec<String>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_expoly")).args(["extract-root", fy]).output().map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("extract-root {fy:?} exited with {:?}", out.status.code()));
    }
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok(v["roots"].as_array().ok_or("no roots array")?.iter().map(|r| r["root"].as_str().unwrap_or("").to_string()).collect())
}

/// `F(g) = 0` by textual substitution and exact re-lowering.
fn substitutes_to_zero(fy: &str, root: &str) -> bool {
    let text = fy.replace('Y', &format!("({root})"));
    parse_expression(&text).ok().and_then(|e| lower_to_symbolic(&e).ok()).is_some_and(|(p, _)| p.is_zero())
}

fn root_extraction() -> Verdict {
    let cases: [(&str, &[&str]); 3] = [
        ("Y^2 - 2*z*Y + z^2 - exp[2*z]", &["z + exp[z]", "z - exp[z]"]),
        ("Y^2 - exp[2*z]", &["-exp[z]", "exp[z]"]),
        ("Y^2 - z", &[]),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (fy, expect) in cases {
        let roots = cli_roots(fy)?;
        let sound = roots.iter().all(|r| substitutes_to_zero(fy, r));
        ok &= roots == expect && sound;
        notes.push(format!("{fy} -> {{{}}}", roots.join(", ")));
    }
    ensure(ok, notes.join("; "))
}

fn discriminant_specialization() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let coeffs: Vec<LaurentPoly> = (0..3)
            .map(|_| {
                let terms: Vec<(Monomial, RatFunc)> = (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let c = ZPoly::new((0..rng.gen_range(1..=2)).map(|_| scalar(&mut rng)).collect());
                        (Monomial(vec![rng.gen_range(-1..=2)]), RatFunc::from_poly(c))
                    })
                    .collect();
                LaurentPoly::from_terms(1, terms)
            })
            .collect();
        let f = MonicYPoly::new(1, coeffs.clone()).map_err(|e| e.to_string())?;
        let delta = discriminant(&f);
        let z0 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let u0 = [z0.exp()];
        let [c0, c1, c2] = [0, 1, 2].map(|k| coeffs[k].eval_c64(z0, &u0));
        let companion = Matrix3::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            -c0,
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            -c1,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            -c2,
        );
        let ev = companion.eigenvalues().ok_or("no eigenvalues")?;
        let mut numeric = Complex64::new(1.0, 0.0);
        for i in 0..3 {
            for j in i + 1..3 {
                numeric *= (ev[i] - ev[j]).powi(2);
            }
        }
        let exact = delta.eval_c64(z0, &u0);
        worst = worst.max((exact - numeric).norm() / exact.norm().max(f64::MIN_POSITIVE));
    }
    ensure(worst <= 1e-10, format!("20 cubics, worst relative difference {worst:.2e} (limit 1e-10)"))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("characteristic oracle", characteristic_oracle),
        ("zero-count oracle", zero_count_oracle),
        ("first main theorem", first_main),
        ("moving-target instance", moving_target),
        ("gcd smallness instance", gcd_smallness),
        ("truncated Borel instance", borel),
        ("symbolic exactness", symbolic_exactness),
        ("root extraction", root_extraction),
        ("discriminant specialization", discriminant_specialization),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} [{tag}] {name}: {detail}", i + 1);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
