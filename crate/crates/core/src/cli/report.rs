use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Result of one CLI command.
///
/// Serialized through [`serde_json::Value`], whose maps keep keys sorted, so
/// the JSON text of a report is canonical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub bounds: Value,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, status: impl Into<String>, result: Value) -> Self {
        Self {
            command: command.into(),
            status: status.into(),
            result,
            witness: None,
            bounds: Value::Object(Default::default()),
            elapsed_ms: 0,
        }
    }

    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_bounds(mut self, b: Value) -> Self {
        self.bounds = b;
        self
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string_pretty(&v).expect("values serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.status);
        match &self.result {
            Value::Null => {}
            Value::String(s) => {
                let _ = writeln!(out, "{s}");
            }
            Value::Object(m) if m.contains_key("table") => {
                for row in m["table"].as_array().into_iter().flatten() {
                    let _ = writeln!(out, "{}", row.as_str().unwrap_or_default().trim_end());
                }
            }
            Value::Array(items) if items.iter().all(|v| v.get("condition").is_some()) => {
                for v in items {
                    let _ = write!(out, "{} {} {}", v["condition"].as_str().unwrap_or("?"), v["status"].as_str().unwrap_or("?"), v["bounds"]);
                    if let Some(n) = v.get("n_phi") {
                        let _ = write!(out, " n_phi={n}");
                    }
                    if let Some(f) = v.get("normal_form") {
                        let _ = write!(out, " normal form: {}", f.as_str().unwrap_or_default());
                    }
                    out.push('\n');
                }
            }
            v => {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).unwrap_or_default());
            }
        }
        if let Some(w) = &self.witness {
            let text = match (w.get("left_literals"), w.get("right_literals")) {
                (Some(Value::String(l)), Some(Value::String(r))) => match w.get("formula") {
                    Some(Value::String(f)) => format!("{l}  vs  {r}  separated by {f}"),
                    _ => format!("{l}  vs  {r}"),
                },
                _ => serde_json::to_string_pretty(w).unwrap_or_default(),
            };
            let _ = writeln!(out, "witness: {text}");
        }
        out
    }
}
