//! Run settings: flags layered over an optional TOML file with one section
//! per subcommand.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use expoly_nevlab::{ExecMode, RGrid};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    Parallel,
}

impl From<Mode> for ExecMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sequential => ExecMode::Sequential,
            Mode::Parallel => ExecMode::Parallel,
        }
    }
}

/// Every setting a subcommand may take, all optional. Used both for the
/// flag layer and for a config-file section.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Layer {
    pub r_grid: Option<String>,
    pub log: Option<bool>,
    pub tol: Option<f64>,
    pub trunc: Option<Vec<u32>>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub var: Option<usize>,
    pub r: Option<f64>,
    pub a: Option<String>,
    pub d: Option<u32>,
    pub z0: Option<String>,
    pub mode: Option<Mode>,
}

impl Layer {
    /// Fields set here win over `base`.
    pub fn over(self, base: Layer) -> Layer {
        Layer {
            r_grid: self.r_grid.or(base.r_grid),
            log: self.log.or(base.log),
            tol: self.tol.or(base.tol),
            trunc: self.trunc.or(base.trunc),
            eps: self.eps.or(base.eps),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            var: self.var.or(base.var),
            r: self.r.or(base.r),
            a: self.a.or(base.a),
            d: self.d.or(base.d),
            z0: self.z0.or(base.z0),
            mode: self.mode.or(base.mode),
        }
    }
}

/// Reads the section for `path` (e.g. `["check", "first-main"]`) from a TOML
/// file. A missing section is an empty layer.
pub fn load_section(file: &Path, path: &[&str]) -> Result<Layer, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", file.display())))?;
    let root: toml::Table =
        text.parse().map_err(|e| CliError::Usage(format!("config {}: {e}", file.display())))?;
    for (k, v) in &root {
        if !v.is_table() {
            return Err(CliError::Usage(format!("config key {k} must be inside a subcommand section")));
        }
    }
    let mut node = toml::Value::Table(root);
    for key in path {
        match node.get(*key) {
            Some(v) => node = v.clone(),
            None => return Ok(Layer::default()),
        }
    }
    // `[check]` holds only the per-check subsections
    if let toml::Value::Table(t) = &mut node {
        if path.len() == 1 && path[0] == "check" {
            t.retain(|_, v| !v.is_table());
        }
    }
    node.try_into().map_err(|e| CliError::Usage(format!("config section [{}]: {e}", path.join("."))))
}

/// Fully resolved settings, echoed into the manifest.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    pub r_grid: Option<RGrid>,
    pub tol: f64,
    pub trunc: Vec<u32>,
    pub eps: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub var: Option<usize>,
    pub r: Option<f64>,
    pub a: Option<String>,
    pub d: Option<u32>,
    pub z0: Option<String>,
    pub mode: ExecMode,
}

impl RunConfig {
    pub fn resolve(command: String, inputs: Vec<String>, layer: Layer) -> Result<RunConfig, CliError> {
        let r_grid = match &layer.r_grid {
            Some(text) => {
                let g: RGrid = text.parse().map_err(|e| CliError::Usage(format!("--r-grid {text}: {e}")))?;
                if g.count < 2 || g.start >= g.stop {
                    return Err(CliError::Usage(format!("--r-grid {text}: need A < B and N >= 2")));
                }
                Some(g.with_log(layer.log.unwrap_or(false)))
            }
            None => None,
        };
        let tol = layer.tol.unwrap_or(1e-12);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
        }
        let eps = layer.eps.unwrap_or(0.05);
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(CliError::Usage(format!("--eps must be positive, got {eps}")));
        }
        let trunc = layer.trunc.unwrap_or_default();
        if trunc.contains(&0) {
            return Err(CliError::Usage("--trunc levels must be at least 1".into()));
        }
        if let Some(r) = layer.r {
            if !(r > 0.0 && r.is_finite()) {
                return Err(CliError::Usage(format!("--r must be positive, got {r}")));
            }
        }
        Ok(RunConfig {
            command,
            inputs,
            r_grid,
            tol,
            trunc,
            eps,
            out: layer.out,
            format: layer.format.unwrap_or_default(),
            var: layer.var,
            r: layer.r,
            a: layer.a,
            d: layer.d,
            z0: layer.z0,
            mode: layer.mode.map(ExecMode::from).unwrap_or_default(),
        })
    }

    pub fn radii(&self) -> Result<Vec<f64>, CliError> {
        self.r_grid.map(|g| g.radii()).ok_or_else(|| CliError::Usage(format!("{} needs --r-grid A:B:N", self.command)))
    }
}
