//! Output helpers: JSON with numbers rounded to 12 significant digits, or
//! plain text with 6 decimals.

use std::io::Write;

use serde_json::Value;
use voronoi_iso::format::round_sig;

pub const JSON_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Human,
    Json,
}

impl From<bool> for Emit {
    fn from(json: bool) -> Self {
        if json {
            Emit::Json
        } else {
            Emit::Human
        }
    }
}

impl Emit {
    pub fn print(self, json: impl FnOnce() -> Value, human: impl FnOnce() -> String) {
        let text = match self {
            Emit::Json => render_json(&json()) + "\n",
            Emit::Human => human(),
        };
        write_stdout(&text);
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn write_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

pub fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialise")
}

/// Non-finite values become `null`.
pub fn num(x: f64) -> Value {
    let r = round_sig(x, JSON_DIGITS);
    serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r }).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}
