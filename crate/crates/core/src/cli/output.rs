use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use funcqaoa::{Error, Result};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// `round12`, rendered without a trailing `.0` on integral values.
pub fn fmt12(x: f64) -> String {
    let r = round12(x);
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round12(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Report available only as JSON.
pub struct JsonReport(pub Value);

impl JsonReport {
    pub fn json(self, format: Option<Format>) -> Result<String> {
        if format == Some(Format::Csv) {
            return Err(Error::precondition("this command only writes JSON"));
        }
        Ok(render_json(self.0))
    }
}

pub fn render_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_value(v)).unwrap_or_default();
    s.push('\n');
    s
}

/// Rows that render as CSV by default or as a JSON array of objects.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Extra top-level fields of the JSON rendering.
    pub extra: serde_json::Map<String, Value>,
}

impl Table {
    pub fn render(self, format: Option<Format>) -> String {
        match format.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.iter().map(|&x| fmt12(x)).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(self.header.iter().zip(r).map(|(h, &x)| (h.to_string(), number(x))).collect())
                    })
                    .collect();
                let mut obj = self.extra;
                obj.insert("rows".into(), Value::Array(rows));
                render_json(Value::Object(obj))
            }
        }
    }
}

fn number(x: f64) -> Value {
    if x == x.trunc() && x.abs() < 9e15 {
        Value::from(x as i64)
    } else {
        serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
    }
}

pub fn emit(report: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, report).map_err(|e| Error::resource(format!("cannot write `{}`: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(report.as_bytes())
            .map_err(|e| Error::resource(format!("cannot write stdout: {e}"))),
    }
}
