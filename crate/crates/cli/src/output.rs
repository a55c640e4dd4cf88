//! Artifact formatting, atomic writes and run manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// A cell of a flat table.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub json: Value,
    pub table: Table,
    /// Short human-readable lines printed before the table in text format.
    pub summary: Vec<String>,
    pub pass: bool,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let y = round12(x);
    if y != 0.0 && (y.abs() < 1e-4 || y.abs() >= 1e15) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_json),
        Value::Object(m) => m.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn render(outcome: &Outcome, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut v = outcome.json.clone();
            round_json(&mut v);
            let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io { path: "<csv>".into(), source: e.into() };
            w.write_record(&outcome.table.header).map_err(io)?;
            for row in &outcome.table.rows {
                w.write_record(row.iter().map(Cell::render)).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::Io { path: "<csv>".into(), source: e.into_error() })
        }
        Format::Text => {
            let mut s = String::new();
            for line in &outcome.summary {
                s.push_str(line);
                s.push('\n');
            }
            if !outcome.table.rows.is_empty() {
                let cells: Vec<Vec<String>> = std::iter::once(outcome.table.header.clone())
                    .chain(outcome.table.rows.iter().map(|r| r.iter().map(Cell::render).collect()))
                    .collect();
                let widths: Vec<usize> = (0..outcome.table.header.len())
                    .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                    .collect();
                for r in &cells {
                    let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    s.push_str(line.join("  ").trim_end());
                    s.push('\n');
                }
            }
            Ok(s.into_bytes())
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn manifest_path(artifact: &Path) -> PathBuf {
    let mut name = artifact.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    artifact.with_file_name(name)
}

pub fn manifest(args: &[String], config: Option<&RunConfig>, exit_code: u8, wall_time: f64, artifact: Option<&Path>) -> Value {
    let mut v = json!({
        "tool": "expoly",
        "version": env!("CARGO_PKG_VERSION"),
        "arguments": args,
        "config": config.map(|c| serde_json::to_value(c).expect("config serializes")),
        "exit_code": exit_code,
        "wall_time_s": wall_time,
        "artifact": artifact.map(|p| p.display().to_string()),
    });
    round_json(&mut v);
    v
}
