//! Command line front end: expression parsing, configuration and report
//! emission for the `abint` tool.

pub mod commands;
pub mod config;
pub mod parse;

use serde_json::Value;

pub use commands::{run, Cli, Command};
pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] abint_core::Error),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => e.exit_code(),
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Rounds `v` to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let r: f64 = format!("{:.*e}", digits - 1, v).parse().expect("formatted float");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Rounds every floating value in `v` so that reports are byte-stable.
pub fn fix_precision(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"), digits);
            *v = serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        }
        Value::Array(a) => a.iter_mut().for_each(|x| fix_precision(x, digits)),
        Value::Object(o) => o.values_mut().for_each(|x| fix_precision(x, digits)),
        _ => {}
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(mut v: Value, digits: usize) -> String {
    fix_precision(&mut v, digits);
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}
