//! `expoly`: symbolic and numeric experiments on exponential polynomials.

mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use config::{Format, Layer, Mode, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "expoly", version, about = "Exact and numeric tools for finite-order exponential polynomials")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Radius grid `A:B:N`
    #[arg(long = "r-grid", global = true, value_name = "A:B:N")]
    r_grid: Option<String>,
    /// Geometric instead of linear grid spacing
    #[arg(long, global = true)]
    log: bool,
    /// Newton tolerance for zero polishing
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Truncation levels, comma separated
    #[arg(long, global = true, value_delimiter = ',', value_name = "Q1,Q2")]
    trunc: Option<Vec<u32>>,
    /// Relative pass threshold
    #[arg(long, global = true, value_name = "X")]
    eps: Option<f64>,
    /// Artifact path; a manifest is written next to it
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// TOML file with one section per subcommand; flags win
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Variable index (1-based) for `separate`
    #[arg(long, global = true, value_name = "J")]
    var: Option<usize>,
    /// Scheduling of the numeric work
    #[arg(long, global = true, value_enum)]
    mode: Option<Mode>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linear independence of unit frequencies, e.g. "exp[z]; exp[2*z]"
    Indep { basis: String },
    /// Discriminant of a monic polynomial in Y
    Disc { fy: String },
    /// Square-free decomposition over the minimal unit basis
    Squarefree { expr: String },
    /// The derivation D_u, i.e. the exact derivative
    Du { expr: String },
    /// Separate one unit from a polynomial in Y (`--var J`)
    Separate { fy: String },
    /// Exponential-polynomial roots of a monic polynomial in Y
    ExtractRoot { fy: String },
    /// Zeros in the disk |z| <= R
    Zeros {
        expr: String,
        #[arg(long, value_name = "R")]
        r: Option<f64>,
    },
    /// T, m, N and truncated N on a radius grid
    Analyze { expr: String },
    /// Counting function of common zeros of two functions
    GcdCount { f: String, g: String },
    /// Moving-target check for G(x0..xn) at a basis of units
    SmtCheck { g: String, basis: String },
    /// Numeric checks of the main inequalities
    #[command(subcommand)]
    Check(Check),
}

#[derive(Subcommand, Debug)]
enum Check {
    /// m(a) + N(a) - T stays bounded
    FirstMain {
        expr: String,
        /// Target value a (constant)
        #[arg(long, value_name = "A")]
        a: Option<String>,
    },
    /// Log-derivative growth
    Logderiv { expr: String },
    /// Truncated Borel check on summands given as separate arguments or
    /// separated by `;`. The negated sum is appended when the sum is nonzero
    Borel {
        #[arg(required = true, num_args = 1..)]
        summands: Vec<String>,
    },
    /// gcd counting of F(u), G(u) in x1..xn
    GcdSmall { f: String, g: String, basis: String },
    /// d-th power obstruction for F(u) in x1..xn
    Dpower {
        f: String,
        basis: String,
        #[arg(long, value_name = "D")]
        d: Option<u32>,
    },
    /// Jacobian and Euler identity for forms in x0..xn at z0 (separate
    /// arguments or `;`-separated)
    Transversal {
        #[arg(required = true, num_args = 1..)]
        forms: Vec<String>,
        #[arg(long, value_name = "Z")]
        z0: Option<String>,
    },
}

type Runner = fn(&RunConfig) -> Result<output::Outcome, CliError>;

impl Command {
    /// Config section path, inputs, command-specific flags and runner.
    fn plan(self) -> (Vec<&'static str>, Vec<String>, Layer, Runner) {
        let none = Layer::default();
        match self {
            Command::Indep { basis } => (vec!["indep"], vec![basis], none, commands::indep),
            Command::Disc { fy } => (vec!["disc"], vec![fy], none, commands::disc),
            Command::Squarefree { expr } => (vec!["squarefree"], vec![expr], none, commands::squarefree),
            Command::Du { expr } => (vec!["du"], vec![expr], none, commands::du),
            Command::Separate { fy } => (vec!["separate"], vec![fy], none, commands::separate),
            Command::ExtractRoot { fy } => (vec!["extract-root"], vec![fy], none, commands::extract_root),
            Command::Zeros { expr, r } => (vec!["zeros"], vec![expr], Layer { r, ..none }, commands::zeros),
            Command::Analyze { expr } => (vec!["analyze"], vec![expr], none, commands::analyze_cmd),
            Command::GcdCount { f, g } => (vec!["gcd-count"], vec![f, g], none, commands::gcd_count),
            Command::SmtCheck { g, basis } => (vec!["smt-check"], vec![g, basis], none, commands::smt_check),
            Command::Check(c) => match c {
                Check::FirstMain { expr, a } => {
                    (vec!["check", "first-main"], vec![expr], Layer { a, ..none }, commands::first_main)
                }
                Check::Logderiv { expr } => (vec!["check", "logderiv"], vec![expr], none, commands::logderiv),
                Check::Borel { summands } => (vec!["check", "borel"], split_list(summands), none, commands::borel),
                Check::GcdSmall { f, g, basis } => {
                    (vec!["check", "gcd-small"], vec![f, g, basis], none, commands::gcd_small)
                }
                Check::Dpower { f, basis, d } => {
                    (vec!["check", "dpower"], vec![f, basis], Layer { d, ..none }, commands::dpower)
                }
                Check::Transversal { forms, z0 } => {
                    (vec!["check", "transversal"], split_list(forms), Layer { z0, ..none }, commands::transversal)
                }
            },
        }
    }
}

/// Expression lists may be given as several arguments, `;`-separated, or both.
fn split_list(args: Vec<String>) -> Vec<String> {
    args.iter().flat_map(|a| a.split(';')).map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl Flags {
    fn layer(self) -> Layer {
        Layer {
            r_grid: self.r_grid,
            log: self.log.then_some(true),
            tol: self.tol,
            trunc: self.trunc,
            eps: self.eps,
            out: self.out,
            format: self.format,
            var: self.var,
            mode: self.mode,
            ..Layer::default()
        }
    }
}

fn diagnostic(v: serde_json::Value) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{v}");
}

fn resolve(cli: Cli) -> Result<(RunConfig, Runner), CliError> {
    let config_file = cli.flags.config.clone();
    let (section, inputs, specific, runner) = cli.command.plan();
    let mut layer = specific.over(cli.flags.layer());
    if let Some(file) = config_file {
        let mut from_file = config::load_section(&file, &section)?;
        if section.len() == 2 {
            from_file = from_file.over(config::load_section(&file, &section[..1])?);
        }
        layer = layer.over(from_file);
    }
    Ok((RunConfig::resolve(section.join(" "), inputs, layer)?, runner))
}

fn execute(config: &RunConfig, runner: Runner) -> Result<(u8, Vec<u8>), CliError> {
    let outcome = runner(config)?;
    let bytes = output::render(&outcome, config.format)?;
    Ok((if outcome.pass { 0 } else { 1 }, bytes))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            diagnostic(json!({"level": "error", "kind": "usage", "exit": 3, "message": e.kind().to_string()}));
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let (config, runner) = match resolve(cli) {
        Ok(x) => x,
        Err(e) => {
            diagnostic(e.diagnostic());
            return ExitCode::from(e.exit_code());
        }
    };

    let result = execute(&config, runner).and_then(|(code, bytes)| {
        match &config.out {
            Some(path) => output::write_atomic(path, &bytes)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
            }
        }
        Ok(code)
    });
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            diagnostic(e.diagnostic());
            e.exit_code()
        }
    };

    let wall = start.elapsed().as_secs_f64();
    let written = if code <= 1 { config.out.as_deref() } else { None };
    let manifest = output::manifest(&args, Some(&config), code, wall, written);
    match &config.out {
        Some(path) => {
            let bytes = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
            if let Err(e) = output::write_atomic(&output::manifest_path(path), bytes.as_bytes()) {
                diagnostic(e.diagnostic());
                return ExitCode::from(e.exit_code().max(code));
            }
        }
        None => diagnostic(json!({"level": "info", "kind": "manifest", "manifest": manifest})),
    }
    ExitCode::from(code)
}
