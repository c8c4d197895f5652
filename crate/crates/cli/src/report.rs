use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One named claim and whether it held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
}

/// Machine-readable outcome of one command.
///
/// Everything except `timing_ms` is a function of the input and the budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub timing_ms: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        RunReport {
            command: command.into(),
            inputs,
            results: Value::Null,
            verdicts: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn verdict(&mut self, claim: impl Into<String>, pass: bool) {
        self.verdicts.push(Verdict {
            claim: claim.into(),
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Pretty JSON with a trailing newline; parsing and re-rendering is the identity.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.command).unwrap();
        render_value(&mut s, &self.results, 1);
        for v in &self.verdicts {
            writeln!(s, "{} {}", if v.pass { "PASS" } else { "FAIL" }, v.claim).unwrap();
        }
        writeln!(s, "({} ms)", self.timing_ms).unwrap();
        s
    }
}

fn is_scalar_list(v: &Value) -> bool {
    v.as_array()
        .is_some_and(|a| a.iter().all(|x| !x.is_array() && !x.is_object()))
}

fn is_matrix(v: &Value) -> bool {
    v.as_array()
        .is_some_and(|a| !a.is_empty() && a.iter().all(is_scalar_list))
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || (x.is_array() && !is_scalar_list(x)) {
                    writeln!(out, "{pad}{k}:").unwrap();
                    render_value(out, x, depth + 1);
                } else {
                    writeln!(out, "{pad}{k}: {}", inline(x)).unwrap();
                }
            }
        }
        Value::Array(a) if is_matrix(v) => {
            for row in a {
                writeln!(out, "{pad}{}", inline(row)).unwrap();
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                if x.is_object() || x.is_array() {
                    writeln!(out, "{pad}[{i}]").unwrap();
                    render_value(out, x, depth + 1);
                } else {
                    writeln!(out, "{pad}{}", inline(x)).unwrap();
                }
            }
        }
        Value::Null => {}
        _ => writeln!(out, "{pad}{}", inline(v)).unwrap(),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) if m.len() == 2 && m.contains_key("num") && m.contains_key("den") => {
            format!("{}/{}", inline(&m["num"]), inline(&m["den"]))
        }
        other => other.to_string(),
    }
}
