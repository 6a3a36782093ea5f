//! Stable JSON reports: `{suite, config, metrics, witnesses, pass}` with
//! sorted keys and floats written with 17 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: String,
    pub config: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub witnesses: Vec<Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            config: BTreeMap::new(),
            metrics: BTreeMap::new(),
            witnesses: Vec::new(),
            pass: true,
        }
    }

    pub fn config(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.config.insert(key.into(), to_value(value));
        self
    }

    pub fn metric(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.metrics.insert(key.into(), to_value(value));
        self
    }

    pub fn witness(&mut self, value: impl Serialize) -> &mut Self {
        self.witnesses.push(to_value(value));
        self
    }

    /// Records a named check; a failing check clears `pass`.
    pub fn check(&mut self, name: &str, ok: bool) -> bool {
        let checks = self
            .metrics
            .entry("checks".into())
            .or_insert_with(|| Value::Object(Map::new()));
        if let Value::Object(m) = checks {
            m.insert(name.into(), Value::Bool(ok));
        }
        if !ok {
            self.pass = false;
        }
        ok
    }

    /// Folds a sub-report in under `metrics.<suite>`, carrying its witnesses
    /// along tagged with the suite name.
    pub fn absorb(&mut self, sub: Report) {
        for w in &sub.witnesses {
            let mut tagged = Map::new();
            tagged.insert("suite".into(), Value::String(sub.suite.clone()));
            tagged.insert("witness".into(), w.clone());
            self.witnesses.push(Value::Object(tagged));
        }
        self.pass &= sub.pass;
        let mut body = Map::new();
        body.insert("metrics".into(), Value::Object(sub.metrics.into_iter().collect()));
        body.insert("pass".into(), Value::Bool(sub.pass));
        self.metrics.insert(sub.suite, Value::Object(body));
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), Value::String(self.suite.clone()));
        m.insert("config".into(), Value::Object(self.config.clone().into_iter().collect()));
        m.insert("metrics".into(), Value::Object(self.metrics.clone().into_iter().collect()));
        m.insert("witnesses".into(), Value::Array(self.witnesses.clone()));
        m.insert("pass".into(), Value::Bool(self.pass));
        Value::Object(m)
    }

    /// The canonical text form, newline terminated.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_value(&mut out, &self.to_value(), 0);
        out.push('\n');
        out
    }
}

/// Serializes through `serde_json`, mapping non-finite floats to `null`.
pub fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

/// A float as a JSON value (`null` when not finite).
pub fn float(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn write_number(out: &mut String, n: &Number) {
    if n.is_f64() {
        let x = n.as_f64().unwrap();
        let _ = write!(out, "{x:.16e}");
    } else {
        let _ = write!(out, "{n}");
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // short numeric arrays stay on one line
            if items.len() <= 8 && items.iter().all(|x| x.is_number() || x.is_null()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, level);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, x, level + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, level);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&serde_json::to_string(k).expect("string serializes"));
                out.push_str(": ");
                write_value(out, &map[*k], level + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            indent(out, level);
            out.push('}');
        }
    }
}

/// Writes `report` to `path`, or to stdout when `path` is `None`.
pub fn emit(report: &Report, path: Option<&std::path::Path>) -> Result<()> {
    let text = report.to_json();
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
