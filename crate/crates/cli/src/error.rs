use expoly_core::{ParseError, SymError};
use expoly_nevlab::NevError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error in {input:?}: {source}")]
    Parse { input: String, source: ParseError },
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Nev(#[from] NevError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn parse(input: &str, source: ParseError) -> Self {
        CliError::Parse { input: input.to_string(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } | CliError::Nev(NevError::Parse(_)) => "parse",
            CliError::Nev(NevError::DegenerateGrid(_)) => "usage",
            CliError::Sym(e) if sym_precondition(e) => "precondition",
            CliError::Nev(e) if e.is_precondition() => "precondition",
            CliError::Sym(_) => "symbolic",
            CliError::Nev(_) => "numeric",
            CliError::Io { .. } => "io",
        }
    }

    /// 2 for preconditions and failed computations, 3 for bad invocations.
    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "usage" | "parse" => 3,
            _ => 2,
        }
    }

    pub fn diagnostic(&self) -> Value {
        let mut d = json!({
            "level": "error",
            "kind": self.kind(),
            "exit": self.exit_code(),
            "message": self.to_string(),
        });
        let offset = match self {
            CliError::Parse { source, .. } | CliError::Nev(NevError::Parse(source)) => source.offset(),
            _ => None,
        };
        if let Some(o) = offset {
            d["offset"] = json!(o);
        }
        if let CliError::Parse { input, .. } = self {
            d["input"] = json!(input);
        }
        d
    }
}

fn sym_precondition(e: &SymError) -> bool {
    NevError::Sym(e.clone()).is_precondition()
}
