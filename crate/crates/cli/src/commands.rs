//! One function per subcommand. Each returns an [`Outcome`]; `pass` decides
//! between exit codes 0 and 1.

use expoly_core::expr::{
    lower_joint, lower_to_symbolic, lower_xpoly, lower_ypoly, parse_constant, parse_expression, parse_frequencies,
    render_laurent, render_xpoly, render_ypoly, Expr,
};
use expoly_core::sym::{
    derivation_du, discriminant, extract_exp_poly_roots, frequency_independence, separate_variable, squarefree_decompose,
    Independence, LaurentPoly, MonicYPoly, RatFunc, UnitBasis, ZPoly,
};
use expoly_nevlab::{
    analyze, common_radius, counting_function, dpower_obstruction_check, first_main_check, gcd_counting,
    gcd_smallness_check, jensen_check, logderiv_check, order_estimate, smt_moving_check, transversality_check,
    truncated_borel_check, zeros_in_disk, CheckReport, CheckSettings, ExpPolyFunction, ZeroOptions,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Outcome, Table};

fn ast(text: &str) -> Result<Expr, CliError> {
    parse_expression(text).map_err(|e| CliError::parse(text, e))
}

fn freqs(text: &str) -> Result<Vec<ZPoly>, CliError> {
    parse_frequencies(text).map_err(|e| CliError::parse(text, e))
}

fn function(text: &str) -> Result<ExpPolyFunction, CliError> {
    let (p, b) = lower_to_symbolic(&ast(text)?).map_err(|e| CliError::parse(text, e))?;
    Ok(ExpPolyFunction::new(p, b)?)
}

fn xpoly(text: &str, first: u32, arity: usize) -> Result<LaurentPoly, CliError> {
    lower_xpoly(&ast(text)?, first, arity).map_err(|e| CliError::parse(text, e))
}

fn ypoly(text: &str) -> Result<(MonicYPoly, UnitBasis), CliError> {
    lower_ypoly(&ast(text)?).map_err(|e| CliError::parse(text, e))
}

fn basis_json(b: &UnitBasis) -> Value {
    json!(b.freqs().iter().map(|q| q.to_string()).collect::<Vec<_>>())
}

fn zero_options(cfg: &RunConfig) -> ZeroOptions {
    ZeroOptions::default().with_tol(cfg.tol).with_mode(cfg.mode)
}

fn settings(cfg: &RunConfig) -> CheckSettings {
    CheckSettings { eps: cfg.eps, trunc: cfg.trunc.first().copied(), zeros: zero_options(cfg), ..CheckSettings::default() }
}

fn single<'a>(inputs: &'a [String], what: &str) -> Result<&'a str, CliError> {
    match inputs {
        [x] => Ok(x),
        _ => Err(CliError::Usage(format!("expected one {what}, got {}", inputs.len()))),
    }
}

pub fn indep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "basis")?;
    let qs = freqs(text)?;
    let verdict = frequency_independence(&qs);
    let vector: Option<Vec<String>> = match &verdict {
        Independence::Independent => None,
        Independence::Dependent(v) => Some(v.iter().map(|c| c.to_string()).collect()),
    };
    let mut table = Table::new(&["index", "frequency", "coefficient"]);
    for (j, q) in qs.iter().enumerate() {
        let c = vector.as_ref().map_or("0".to_string(), |v| v[j].clone());
        table.push(vec![Cell::Int(j as i64 + 1), q.to_string().into(), c.into()]);
    }
    let coeffs: Option<Vec<Value>> =
        vector.as_ref().map(|v| v.iter().map(|c| c.parse::<i64>().map_or_else(|_| json!(c), |n| json!(n))).collect());
    let summary = match &vector {
        None => vec!["independent".to_string()],
        Some(v) => vec![format!("dependent: ({})", v.join(", "))],
    };
    Ok(Outcome {
        json: json!({
            "frequencies": qs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "independent": verdict.is_independent(),
            "dependence": coeffs,
        }),
        table,
        summary,
        pass: verdict.is_independent(),
    })
}

pub fn disc(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "polynomial in Y")?;
    let (f, basis) = ypoly(text)?;
    let d = discriminant(&f);
    let shown = render_laurent(&d, &basis);
    let mut table = Table::new(&["input", "discriminant"]);
    table.push(vec![render_ypoly(&f, &basis).into(), shown.clone().into()]);
    Ok(Outcome {
        json: json!({
            "input": render_ypoly(&f, &basis),
            "basis": basis_json(&basis),
            "discriminant": shown,
            "is_zero": d.is_zero(),
        }),
        table,
        summary: vec![format!("discriminant: {shown}")],
        pass: true,
    })
}

pub fn squarefree(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "expression")?;
    let (p, basis) = lower_to_symbolic(&ast(text)?).map_err(|e| CliError::parse(text, e))?;
    let sf = squarefree_decompose(&p)?;
    let n = basis.len();
    let content = render_laurent(&LaurentPoly::term(n, sf.monomial.clone(), RatFunc::from_int(1)), &basis);
    let mut table = Table::new(&["factor", "multiplicity"]);
    let mut factors = Vec::new();
    for (s, k) in &sf.factors {
        let shown = render_laurent(s, &basis);
        table.push(vec![shown.clone().into(), Cell::Int(*k as i64)]);
        factors.push(json!({"factor": shown, "multiplicity": k}));
    }
    let ok = sf.is_squarefree();
    Ok(Outcome {
        json: json!({
            "input": render_laurent(&p, &basis),
            "basis": basis_json(&basis),
            "squarefree": ok,
            "unit": sf.unit.to_string(),
            "monomial_content": content,
            "factors": factors,
        }),
        table,
        summary: vec![format!("squarefree: {ok}")],
        pass: ok,
    })
}

pub fn du(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "expression")?;
    let (p, basis) = lower_to_symbolic(&ast(text)?).map_err(|e| CliError::parse(text, e))?;
    let d = derivation_du(&p, &basis)?;
    let shown = render_laurent(&d, &basis);
    let mut table = Table::new(&["input", "du"]);
    table.push(vec![render_laurent(&p, &basis).into(), shown.clone().into()]);
    Ok(Outcome {
        json: json!({"input": render_laurent(&p, &basis), "basis": basis_json(&basis), "du": shown}),
        table,
        summary: vec![shown],
        pass: true,
    })
}

pub fn separate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "polynomial in Y")?;
    let (f, basis) = ypoly(text)?;
    let var = cfg.var.ok_or_else(|| CliError::Usage("separate needs --var J (1-based)".into()))?;
    if var == 0 || var > basis.len() {
        return Err(CliError::Usage(format!("--var {var} outside 1..={}", basis.len())));
    }
    let sep = separate_variable(&f, &basis, var - 1)?;
    let exact = sep.recompose() == f.map_coeffs(|p| p.rescale_var(sep.var, sep.k as i64));
    let refined = sep.refined_basis.clone();
    let reduced_basis = sep.reduced_basis();
    let fields = [
        ("var", var.to_string()),
        ("s", sep.s.to_string()),
        ("t", sep.t.to_string()),
        ("k", sep.k.to_string()),
        ("s_refined", sep.s_refined.to_string()),
        ("t_refined", sep.t_refined.to_string()),
        ("shift", render_laurent(&sep.shift, &refined)),
        ("reduced", render_ypoly(&sep.reduced, &reduced_basis)),
        ("recomposition_exact", exact.to_string()),
    ];
    let mut table = Table::new(&["field", "value"]);
    for (k, v) in &fields {
        table.push(vec![(*k).into(), v.clone().into()]);
    }
    Ok(Outcome {
        json: json!({
            "input": render_ypoly(&f, &basis),
            "basis": basis_json(&basis),
            "var": var,
            "s": sep.s.to_string(),
            "t": sep.t.to_string(),
            "k": sep.k,
            "s_refined": sep.s_refined,
            "t_refined": sep.t_refined,
            "refined_basis": basis_json(&refined),
            "shift": render_laurent(&sep.shift, &refined),
            "reduced": render_ypoly(&sep.reduced, &reduced_basis),
            "reduced_basis": basis_json(&reduced_basis),
            "recomposition_exact": exact,
        }),
        table,
        summary: fields.iter().map(|(k, v)| format!("{k} = {v}")).collect(),
        pass: exact,
    })
}

pub fn extract_root(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "polynomial in Y")?;
    let (f, basis) = ypoly(text)?;
    let roots = extract_exp_poly_roots(&f, &basis)?;
    let mut shown: Vec<(String, Value, bool)> = roots
        .iter()
        .map(|r| {
            let fk = f.map_coeffs(|p| p.rescale_vars(&r.factors));
            let ok = fk.eval(&r.root).is_zero();
            let v = json!({
                "root": render_laurent(&r.root, &r.basis),
                "basis": basis_json(&r.basis),
                "refinement": r.factors,
                "verified": ok,
            });
            (render_laurent(&r.root, &r.basis), v, ok)
        })
        .collect();
    shown.sort_by(|a, b| a.0.cmp(&b.0));
    let verified = shown.iter().all(|r| r.2);
    let mut table = Table::new(&["root", "verified"]);
    for (s, _, ok) in &shown {
        table.push(vec![s.clone().into(), (*ok).into()]);
    }
    let mut summary: Vec<String> = shown.iter().map(|r| r.0.clone()).collect();
    summary.push(format!("verified={verified}"));
    Ok(Outcome {
        json: json!({
            "input": render_ypoly(&f, &basis),
            "basis": basis_json(&basis),
            "roots": shown.into_iter().map(|r| r.1).collect::<Vec<_>>(),
            "verified": verified,
        }),
        table,
        summary,
        pass: verified,
    })
}

pub fn zeros(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "expression")?;
    let f = function(text)?;
    let r = cfg.r.ok_or_else(|| CliError::Usage("zeros needs --r R".into()))?;
    let zs = zeros_in_disk(&f, r, &zero_options(cfg))?;
    let mut table = Table::new(&["re", "im", "modulus", "multiplicity", "enclosure_radius", "residual"]);
    for z in zs.inside() {
        table.push(vec![
            z.location.re.into(),
            z.location.im.into(),
            z.location.norm().into(),
            Cell::Int(z.multiplicity as i64),
            z.enclosure_radius.into(),
            z.residual.into(),
        ]);
    }
    let count = zs.count(zs.radius);
    let mut json = json!({"function": f.render(), "zero_set": zs, "count": count});
    let mut summary = vec![format!("{count} zeros with multiplicity in |z| <= {}", crate::output::fmt_float(zs.radius))];
    if f.poles().is_empty() {
        let j = jensen_check(&f, &zs)?;
        summary.push(format!("jensen difference {}", crate::output::fmt_float(j.difference)));
        json["jensen"] = serde_json::to_value(j).expect("report serializes");
    }
    Ok(Outcome { json, table, summary, pass: true })
}

pub fn analyze_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let text = single(&cfg.inputs, "expression")?;
    let f = function(text)?;
    let radii = cfg.radii()?;
    let mut trunc = vec![1, 2];
    trunc.extend(&cfg.trunc);
    trunc.sort_unstable();
    trunc.dedup();
    let (samples, zs) = analyze(&f, &radii, &trunc, &zero_options(cfg))?;
    let mut header = vec!["r".to_string(), "requested_r".into(), "T".into(), "m".into(), "N".into()];
    header.extend(trunc.iter().map(|q| format!("N{q}")));
    header.extend(["n_count".to_string(), "n_poles".into()]);
    let mut table = Table { header, rows: Vec::new() };
    for s in &samples {
        let mut row: Vec<Cell> = vec![s.r.into(), s.requested_r.into(), s.t.into(), s.m.into(), s.n.into()];
        row.extend(trunc.iter().map(|q| Cell::Num(s.n_trunc[q])));
        row.extend([Cell::Int(s.n_count as i64), s.n_poles.into()]);
        table.push(row);
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.r, s.t)).collect();
    let order = if pts.len() >= 4 { order_estimate(&pts).ok() } else { None };
    Ok(Outcome {
        json: json!({
            "function": f.render(),
            "samples": samples,
            "zeros_found": zs.count(zs.radius),
            "radius": zs.radius,
            "order_estimate": order,
        }),
        table,
        summary: vec![format!("{} samples", samples.len())],
        pass: true,
    })
}

pub fn gcd_count(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let [a, b] = cfg.inputs.as_slice() else {
        return Err(CliError::Usage("gcd-count takes two expressions".into()));
    };
    let f = function(a)?;
    let g = function(b)?;
    let radii = cfg.radii()?;
    let rmax = radii.iter().cloned().fold(f64::MIN, f64::max);
    let opts = zero_options(cfg);
    let zf = zeros_in_disk(&f, rmax, &opts)?;
    let zg = zeros_in_disk(&g, rmax, &opts)?;
    let mut table = Table::new(&["r", "requested_r", "N_gcd", "N_f", "N_g"]);
    let mut rows = Vec::new();
    for &req in &radii {
        let r = common_radius(&[&zf, &zg], req)?;
        let ng = gcd_counting(&zf.records, &zg.records, r)?;
        let (nf, nh) = (counting_function(&zf.records, r, None), counting_function(&zg.records, r, None));
        table.push(vec![r.into(), req.into(), ng.into(), nf.into(), nh.into()]);
        rows.push(json!({"r": r, "requested_r": req, "N_gcd": ng, "N_f": nf, "N_g": nh}));
    }
    Ok(Outcome {
        json: json!({"f": f.render(), "g": g.render(), "samples": rows}),
        table,
        summary: vec![],
        pass: true,
    })
}

fn report_outcome(report: &CheckReport, extra: Value) -> Outcome {
    let mut header = vec!["r".to_string(), "lhs".into(), "rhs".into(), "margin".into(), "verdict".into()];
    header.extend(report.series.keys().cloned());
    let mut table = Table { header, rows: Vec::new() };
    for (i, r) in report.r_grid.iter().enumerate() {
        let mut row: Vec<Cell> =
            vec![(*r).into(), report.lhs[i].into(), report.rhs[i].into(), report.margin[i].into(), report.verdicts[i].into()];
        row.extend(report.series.values().map(|s| Cell::Num(s[i])));
        table.push(row);
    }
    let mut json = serde_json::to_value(report).expect("report serializes");
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Outcome {
        json,
        table,
        summary: vec![format!("{}: {} ({})", report.name, if report.pass { "PASS" } else { "FAIL" }, report.rule)],
        pass: report.pass,
    }
}

pub fn smt_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let [g, basis] = cfg.inputs.as_slice() else {
        return Err(CliError::Usage("smt-check takes G and BASIS".into()));
    };
    let qs = freqs(basis)?;
    let gp = xpoly(g, 0, qs.len())?;
    let (report, zs) = smt_moving_check(&gp, &qs, &cfg.radii()?, &settings(cfg))?;
    Ok(report_outcome(&report, json!({"G": render_xpoly(&gp, 0), "zeros_found": zs.count(zs.radius)})))
}

pub fn first_main(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = function(single(&cfg.inputs, "expression")?)?;
    let a_text = cfg.a.clone().unwrap_or_else(|| "1".into());
    let a = parse_constant(&a_text).map_err(|e| CliError::parse(&a_text, e))?;
    let report = first_main_check(&f, &a, &cfg.radii()?, &settings(cfg))?;
    Ok(report_outcome(&report, json!({"function": f.render(), "a": a.to_string()})))
}

pub fn logderiv(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = function(single(&cfg.inputs, "expression")?)?;
    let report = logderiv_check(&f, &cfg.radii()?, &settings(cfg))?;
    Ok(report_outcome(&report, json!({"function": f.render()})))
}

pub fn borel(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.inputs.len() < 2 {
        return Err(CliError::Usage("borel takes at least two summands".into()));
    }
    let asts = cfg.inputs.iter().map(|t| ast(t)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&Expr> = asts.iter().collect();
    let (fs, basis) = lower_joint(&refs).map_err(|e| CliError::parse(&cfg.inputs.join("; "), e))?;
    let (report, _) = truncated_borel_check(&fs, &basis, &cfg.radii()?, &settings(cfg))?;
    Ok(report_outcome(&report, json!({"summands": fs.iter().map(|p| render_laurent(p, &basis)).collect::<Vec<_>>()})))
}

pub fn gcd_small(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let [f, g, basis] = cfg.inputs.as_slice() else {
        return Err(CliError::Usage("gcd-small takes F, G and BASIS".into()));
    };
    let qs = freqs(basis)?;
    let (fp, gp) = (xpoly(f, 1, qs.len())?, xpoly(g, 1, qs.len())?);
    let report = gcd_smallness_check(&fp, &gp, &qs, &cfg.radii()?, &settings(cfg))?;
    Ok(report_outcome(&report, json!({"F": render_xpoly(&fp, 1), "G": render_xpoly(&gp, 1)})))
}

pub fn dpower(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let [f, basis] = cfg.inputs.as_slice() else {
        return Err(CliError::Usage("dpower takes F and BASIS".into()));
    };
    let qs = freqs(basis)?;
    let fp = xpoly(f, 1, qs.len())?;
    let d = cfg.d.unwrap_or(2);
    let report = dpower_obstruction_check(&fp, &qs, d, &cfg.radii()?, &settings(cfg))?;
    Ok(report_outcome(&report, json!({"F": render_xpoly(&fp, 1), "d": d})))
}

pub fn transversal(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = cfg.inputs.len();
    let forms = cfg.inputs.iter().map(|t| xpoly(t, 0, n)).collect::<Result<Vec<_>, _>>()?;
    let z_text = cfg.z0.clone().unwrap_or_else(|| "1".into());
    let z0 = parse_constant(&z_text).map_err(|e| CliError::parse(&z_text, e))?;
    let report = transversality_check(&forms, &z0)?;
    let mut out = report_outcome(
        &report,
        json!({"forms": forms.iter().map(|p| render_xpoly(p, 0)).collect::<Vec<_>>(), "z0": z0.to_string()}),
    );
    // rows are intersection points, not radii
    out.table.header[0] = "point".into();
    Ok(out)
}
