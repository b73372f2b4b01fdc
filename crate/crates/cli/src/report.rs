use clap::ValueEnum;
use serde_json::Value;
use thiserror::Error;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] milnor::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Command output: a JSON document, an optional hand-written text form, and
/// whether every internal cross-check agreed.
pub struct Report {
    pub value: Value,
    pub text: Option<String>,
    pub consistent: bool,
}

impl Report {
    pub fn new(value: Value) -> Self {
        Report {
            value,
            text: None,
            consistent: true,
        }
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn with_consistency(mut self, ok: bool) -> Self {
        self.consistent = ok;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json_text(&self.value),
            Format::Text => self.text.clone().unwrap_or_else(|| generic_text(&self.value)),
        }
    }
}

/// Pretty JSON with sorted keys and a trailing newline; stable under parse and re-emit.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// `key: value` lines for an object, compact JSON for nested values.
fn generic_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| format!("{k}: {}\n", scalar(x)))
            .collect(),
        other => format!("{}\n", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let v = serde_json::json!({"b": ["1/2", "-3"], "a": {"z": 1, "y": null}});
        let once = json_text(&v);
        let again: Value = serde_json::from_str(&once).unwrap();
        assert_eq!(json_text(&again), once);
    }
}
