//! The `mvkit` command line: a small declaration language, a command
//! dispatcher and deterministic reports.
//!
//! Exit codes: `0` success, `1` a verification failed (the report carries
//! the witness), `2` usage, syntax or domain errors.

mod commands;
pub mod env;
pub mod syntax;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::config::Config;
use crate::error::MvError;

pub use commands::COMMANDS;
pub use env::Env;
pub use syntax::{parse_spec, SpecFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("unknown name `{name}` at {line}:{col}")]
    UnknownName { name: String, line: usize, col: usize },
    #[error("`{name}` at {line}:{col} takes {expected} argument(s), got {found}")]
    Arity { name: String, expected: usize, found: usize, line: usize, col: usize },
    #[error("`{name}` at {line}:{col} is already declared")]
    DuplicateName { name: String, line: usize, col: usize },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Mv(#[from] MvError),
}

impl CliError {
    pub(crate) fn syntax(pos: syntax::Pos, expected: impl Into<String>, found: impl Into<String>) -> CliError {
        CliError::Syntax { line: pos.line, col: pos.col, expected: expected.into(), found: found.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax { .. } => "SyntaxError",
            CliError::UnknownName { .. } => "UnknownName",
            CliError::Arity { .. } => "ArityError",
            CliError::DuplicateName { .. } => "DuplicateName",
            CliError::Usage(_) => "UsageError",
            CliError::Mv(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Mv(MvError::VerificationFailed { .. }) => 1,
            _ => 2,
        }
    }
}

/// One command together with the declarations it may refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub command: String,
    pub args: Vec<String>,
    /// Text of the specification file, if any.
    pub spec: Option<String>,
    pub config: Config,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub args: Vec<String>,
    pub config: Config,
    /// `ok`, `verification-failed` or `error`.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surrogate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            "ok" => 0,
            "verification-failed" => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// `path: value` lines, one per leaf of the JSON report.
    pub fn to_text(&self) -> String {
        fn walk(prefix: &str, v: &Value, out: &mut String) {
            match v {
                Value::Object(m) => {
                    for (k, v) in m {
                        walk(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, v, out);
                    }
                }
                Value::Array(xs) if !xs.is_empty() => {
                    for (i, v) in xs.iter().enumerate() {
                        walk(&format!("{prefix}[{i}]"), v, out);
                    }
                }
                Value::String(s) => out.push_str(&format!("{prefix:<40} {s}\n")),
                other => out.push_str(&format!("{prefix:<40} {other}\n")),
            }
        }
        let mut out = String::new();
        walk("", &serde_json::to_value(self).expect("reports serialize"), &mut out);
        out
    }
}

/// Parses the specification, runs the command and wraps the outcome in a
/// report. Never panics on bad input; errors become `status: error`.
pub fn run(inv: &Invocation) -> Report {
    let mut report = Report {
        command: inv.command.clone(),
        args: inv.args.clone(),
        config: inv.config.clone(),
        status: "ok",
        surrogate: None,
        result: None,
        error: None,
    };
    let outcome = (|| {
        let spec = match &inv.spec {
            Some(text) => parse_spec(text)?,
            None => SpecFile::default(),
        };
        let env = Env::load(&spec, &inv.config)?;
        commands::dispatch(&inv.command, &inv.args, &env, &inv.config)
    })();
    match outcome {
        Ok(out) => {
            report.surrogate = out.surrogate;
            report.status = if out.verified { "ok" } else { "verification-failed" };
            report.result = Some(out.result);
        }
        Err(e) => {
            report.status = if e.exit_code() == 1 { "verification-failed" } else { "error" };
            report.error = Some(ErrorReport { kind: e.kind(), message: e.to_string() });
        }
    }
    report
}
