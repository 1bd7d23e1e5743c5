//! Report document and its two serializations.

use std::fmt::Write as _;

use blocklie::lie::{Verdict, Witness};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Positive,
    Negative,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Positive => "positive",
            Outcome::Negative => "negative",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub outcome: Outcome,
    pub body: Value,
}

impl Report {
    /// Fixed key order: version, job echo, outcome, verdicts, results.
    pub fn new(job: Value, outcome: Outcome, verdicts: Vec<Value>, results: Value) -> Self {
        let mut body = Map::new();
        body.insert("report_version".into(), json!(1));
        body.insert("job".into(), job);
        body.insert("outcome".into(), json!(outcome.name()));
        body.insert("verdicts".into(), Value::Array(verdicts));
        body.insert("results".into(), results);
        // Wall-clock time goes to stderr so that reports stay byte-identical.
        body.insert("timing".into(), Value::Null);
        Report {
            outcome,
            body: Value::Object(body),
        }
    }
}

pub fn witness_json(w: &Witness) -> Value {
    let point: Map<String, Value> = w.point.iter().map(|(s, v)| (s.clone(), json!(v.to_string()))).collect();
    let residual = match w.residual_element() {
        Some(e) => json!(e.to_string()),
        None => Value::Array(
            w.residual
                .iter()
                .map(|t| {
                    json!({
                        "central": t.central,
                        "grade": t.grade.to_string(),
                        "level": t.level.to_string(),
                        "coeff": t.coeff.to_string(),
                    })
                })
                .collect(),
        ),
    };
    json!({ "point": point, "residual": residual })
}

/// One verdict with the domain it was established on.
pub fn verdict_json(name: &str, v: &Verdict, domain: Value) -> Value {
    json!({
        "name": name,
        "verdict": v.name(),
        "domain": domain,
        "witness": v.witness().map_or(Value::Null, witness_json),
    })
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(&report.body).expect("string keys only");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            flatten("", &report.body, &mut s);
            s
        }
    }
}

/// `path: value` lines, arrays indexed from 0; empty containers are written
/// as `[]` / `{}` so that no key disappears.
fn flatten(path: &str, v: &Value, out: &mut String) {
    let child = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&child(k), x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (k, x) in a.iter().enumerate() {
                flatten(&child(&k.to_string()), x, out);
            }
        }
        Value::Object(_) => writeln!(out, "{path}: {{}}").unwrap(),
        Value::Array(_) => writeln!(out, "{path}: []").unwrap(),
        Value::String(s) => writeln!(out, "{path}: {s}").unwrap(),
        other => writeln!(out, "{path}: {other}").unwrap(),
    }
}
