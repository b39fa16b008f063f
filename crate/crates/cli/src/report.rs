//! Rendering of command results as JSON, CSV or plain text.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Finite numbers as JSON numbers, infinities as `"inf"` / `"-inf"`.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
    } else if v.is_nan() {
        Value::String("nan".into())
    } else if v > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

pub fn strings(v: &[String]) -> Value {
    Value::Array(v.iter().cloned().map(Value::String).collect())
}

/// Ordered object builder.
#[derive(Default)]
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        self.put(key, num(value))
    }

    pub fn nums(self, key: &str, value: &[f64]) -> Self {
        self.put(key, nums(value))
    }
}

impl From<Report> for Value {
    fn from(r: Report) -> Value {
        Value::Object(r.0)
    }
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("values serialise") + "\n",
        Format::Text => {
            let mut out = String::new();
            text(value, 0, &mut out);
            out
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", value, &mut rows);
            let mut out = String::from("field,value\n");
            for (k, v) in rows {
                out.push_str(&csv_field(&k));
                out.push(',');
                out.push_str(&csv_field(&v));
                out.push('\n');
            }
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_array() && !i.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if is_flat(v) {
                    let shown = match v {
                        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join("  "),
                        other => scalar(other),
                    };
                    out.push_str(&format!("{pad}{k}: {shown}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(v, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_flat(item) {
                    let shown = match item {
                        Value::Array(xs) => xs.iter().map(scalar).collect::<Vec<_>>().join("  "),
                        other => scalar(other),
                    };
                    out.push_str(&format!("{pad}- {shown}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), item, rows);
            }
        }
        other => rows.push((prefix.to_owned(), scalar(other))),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_become_strings() {
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        assert_eq!(num(f64::NEG_INFINITY), Value::String("-inf".into()));
        assert_eq!(num(0.5), serde_json::json!(0.5));
    }

    #[test]
    fn csv_is_long_format() {
        let v: Value = Report::new().nums("b", &[0.25, 0.75]).num("w", 1.0).into();
        assert_eq!(render(&v, Format::Csv), "field,value\nb[0],0.25\nb[1],0.75\nw,1.0\n");
    }

    #[test]
    fn text_lists_vectors_inline() {
        let v: Value = Report::new().nums("b", &[0.25, 0.75]).into();
        assert_eq!(render(&v, Format::Text), "b: 0.25  0.75\n");
    }
}
