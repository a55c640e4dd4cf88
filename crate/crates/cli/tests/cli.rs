use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn expoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expoly")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

/// Every stderr line is a JSON object.
fn diagnostics(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stderr)
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).expect("json diagnostic"))
        .collect()
}

#[test]
fn extract_root_example() {
    let o = expoly(&["extract-root", "Y^2 - 2*z*Y + z^2 - exp[2*z]"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let roots: Vec<&str> = v["roots"].as_array().unwrap().iter().map(|r| r["root"].as_str().unwrap()).collect();
    assert_eq!(roots, ["z + exp[z]", "z - exp[z]"]);
    assert_eq!(v["verified"], true);
}

#[test]
fn dependent_basis_exits_one() {
    let o = expoly(&["indep", "exp[z]; exp[2*z]"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["dependence"], serde_json::json!([2, -1]));
    assert_eq!(code(&expoly(&["indep", "exp[z]; exp[(1+i)*z]"])), 0);
}

#[test]
fn analyze_csv_counting_column() {
    let o = expoly(&["analyze", "exp[z] - 1", "--r-grid", "1:19:10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&header[..7], ["r", "requested_r", "T", "m", "N", "N1", "N2"]);
    let row: Vec<f64> = lines.find(|l| l.starts_with("7,")).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    // zeros 0, ±2πi
    let expect = 7f64.ln() + 2.0 * (7.0 / (2.0 * PI)).ln();
    assert!((row[4] - expect).abs() < 1e-9, "{}", row[4]);
    assert_eq!(row[4], row[5]);
}

#[test]
fn exit_codes_and_diagnostics() {
    let o = expoly(&["zeros", "exp[z^y]", "--r", "2"]);
    assert_eq!(code(&o), 3);
    let d = diagnostics(&o);
    assert_eq!(d[0]["kind"], "parse");
    assert_eq!(d[0]["offset"], 6);

    assert_eq!(code(&expoly(&["frobnicate"])), 3);
    assert_eq!(code(&expoly(&["analyze", "exp[z]", "--r-grid", "5:1:3"])), 3);
    assert_eq!(code(&expoly(&["zeros", "exp[z]"])), 3);

    let o = expoly(&["check", "borel", "exp[z]; -exp[z]; 1", "--r-grid", "2:4:2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(diagnostics(&o)[0]["kind"], "precondition");

    let o = expoly(&["smt-check", "x0 + x1", "exp[z]; exp[2*z]", "--r-grid", "1:2:2"]);
    assert_eq!(code(&o), 2);

    assert_eq!(code(&expoly(&["--help"])), 0);
}

#[test]
fn squarefree_verdict() {
    let o = expoly(&["squarefree", "(exp[z] - 1)^2*(exp[z] + 1)"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert_eq!(v["factors"][1]["multiplicity"], 2);
    assert_eq!(code(&expoly(&["squarefree", "exp[z^2] + exp[z]"])), 0);
}

#[test]
fn symbolic_commands() {
    let v = stdout_json(&expoly(&["du", "exp[2*z] + z*exp[z]"]));
    assert_eq!(v["du"], "(z + 1)*exp[z] + 2*exp[z]^2");
    let v = stdout_json(&expoly(&["disc", "Y^3 + exp[z]*Y + z"]));
    assert_eq!(v["discriminant"], "-27*z^2 - 4*exp[z]^3");
    let o = expoly(&["separate", "Y^2 - 2*z*Y + z^2 - exp[2*z]", "--var", "1"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["t"], "-1/2");
    assert_eq!(v["reduced"], "Y^2 - 1");
    assert_eq!(v["recomposition_exact"], true);
    assert_eq!(code(&expoly(&["separate", "Y^2 - exp[z]", "--var", "2"])), 3);
}

#[test]
fn out_writes_artifact_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("zeros.json");
    let o = expoly(&["zeros", "exp[z] - 1", "--r", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["count"], 3);
    let m: Value = serde_json::from_slice(&std::fs::read(dir.path().join("zeros.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["tool"], "expoly");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["exit_code"], 0);
    assert_eq!(m["config"]["r"], 7.0);
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    // nothing but the two files
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn failed_run_still_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let o = expoly(&["check", "borel", "exp[z]; -exp[z]; 1", "--r-grid", "2:4:2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
    let m: Value = serde_json::from_slice(&std::fs::read(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["exit_code"], 2);
    assert_eq!(m["artifact"], Value::Null);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_sections_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    write(&cfg, "[analyze]\nr-grid = \"1:19:10\"\nformat = \"csv\"\n\n[check]\nformat = \"json\"\n\n[check.first-main]\nr-grid = \"5:50:10\"\na = \"1\"\n");
    let c = cfg.to_str().unwrap();

    let o = expoly(&["analyze", "exp[z] - 1", "--config", c]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);

    // flag beats file
    let o = expoly(&["analyze", "exp[z] - 1", "--config", c, "--r-grid", "1:3:3"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 4);

    let o = expoly(&["check", "first-main", "exp[z]", "--config", c]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["r_grid"].as_array().unwrap().len(), 10);

    write(&cfg, "[zeros]\nradius = 3\n");
    assert_eq!(code(&expoly(&["zeros", "exp[z]", "--config", c])), 3);
}

#[test]
fn output_is_byte_stable_across_modes() {
    let args = ["analyze", "exp[z^2] + exp[z] + 1", "--r-grid", "1:4:4", "--trunc", "1,3"];
    let a = expoly(&[&args[..], &["--mode", "sequential"]].concat());
    let b = expoly(&[&args[..], &["--mode", "parallel"]].concat());
    let c = expoly(&[&args[..], &["--mode", "parallel"]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
    let v = stdout_json(&a);
    let trunc = v["samples"][3]["n_trunc"].as_object().unwrap();
    assert_eq!(trunc.keys().collect::<Vec<_>>(), ["1", "2", "3"]);
}

#[test]
fn checks_run_from_the_command_line() {
    let o = expoly(&["check", "gcd-small", "x1 + 1", "x2 + 1", "exp[z]; exp[z^2]", "--r-grid", "1:10:10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout_json(&o)["lhs"].as_array().unwrap().iter().all(|x| x == 0.0));

    let o = expoly(&["check", "transversal", "x0*x1 - z*x2^2; x0 + x1 + x2; x0^2 + 2*x1^2 - x2^2", "--z0", "2"]);
    assert_eq!(code(&o), 0);

    let o = expoly(&["check", "logderiv", "z*exp[z^2]", "--r-grid", "2:8:4", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("logderiv: PASS"));

    let o = expoly(&["check", "dpower", "x1^2 + x2 + 1", "exp[z]; exp[z^2]", "--d", "2", "--r-grid", "2:6:3"]);
    assert_eq!(code(&o), 0);

    let o = expoly(&["gcd-count", "exp[z] - 1", "exp[2*z] - 1", "--r-grid", "2:10:3"]);
    let v = stdout_json(&o);
    for s in v["samples"].as_array().unwrap() {
        assert_eq!(s["N_gcd"], s["N_f"]);
    }
}
