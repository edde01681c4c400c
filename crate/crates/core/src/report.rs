//! Output records shared by the command-line front end and the verification
//! suites, with JSON, CSV and plain-text renderings.
//!
//! JSON numbers carry 17 significant digits so that every `f64` round-trips;
//! the text rendering uses 6. Non-finite reals are written as `null`.

use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::Error;

/// Output format selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::domain(format!("unknown format {other:?}"))),
        }
    }
}

/// Machine-readable description of a failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorInfo {
    pub fn from_error(err: &Error) -> Self {
        let kind = match err {
            Error::Domain(_) => "domain",
            Error::Singular => "singular",
            Error::CoincidentModulus { .. } => "coincident_modulus",
            Error::NearIntegerNu { .. } => "near_integer_nu",
            Error::UnsupportedCharge(_) => "unsupported_charge",
            Error::NonConvergence { .. } => "non_convergence",
        };
        ErrorInfo { kind: kind.to_string(), message: err.to_string(), exit_code: exit_code(err) }
    }
}

/// Process exit code for a library error: 2 for numerical failures, 1 for
/// invalid input.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

/// One row of output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: IndexMap<String, Value>,
    #[serde(with = "real_map")]
    pub outputs: IndexMap<String, f64>,
    pub metadata: IndexMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        OutputRecord {
            command: command.to_string(),
            inputs: IndexMap::new(),
            outputs: IndexMap::new(),
            metadata: IndexMap::new(),
            error: None,
        }
    }

    pub fn failed(command: &str, err: &Error) -> Self {
        let mut rec = OutputRecord::new(command);
        rec.error = Some(ErrorInfo::from_error(err));
        rec
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn input_real(self, key: &str, x: f64) -> Self {
        self.input(key, real(x))
    }

    pub fn input_vector(self, key: &str, v: &[f64]) -> Self {
        self.input(key, vector(v))
    }

    pub fn output(mut self, key: &str, x: f64) -> Self {
        self.outputs.insert(key.to_string(), x);
        self
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn meta_real(self, key: &str, x: f64) -> Self {
        self.meta(key, real(x))
    }
}

/// JSON number with 17 significant digits, or `null` if not finite.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = format!("{x:.16e}");
    Value::Number(serde_json::from_str::<Number>(&text).expect("formatted float is valid JSON"))
}

pub fn vector(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| real(x)).collect())
}

mod real_map {
    use indexmap::IndexMap;
    use serde::de::Deserializer;
    use serde::ser::{SerializeMap, Serializer};
    use serde::Deserialize;
    use serde_json::Value;

    pub fn serialize<S: Serializer>(map: &IndexMap<String, f64>, ser: S) -> Result<S::Ok, S::Error> {
        let mut out = ser.serialize_map(Some(map.len()))?;
        for (k, &v) in map {
            out.serialize_entry(k, &super::real(v))?;
        }
        out.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<IndexMap<String, f64>, D::Error> {
        let raw = IndexMap::<String, Value>::deserialize(de)?;
        raw.into_iter()
            .map(|(k, v)| match v {
                Value::Null => Ok((k, f64::NAN)),
                Value::Number(n) => n.as_f64().map(|x| (k, x)).ok_or_else(|| serde::de::Error::custom("bad number")),
                _ => Err(serde::de::Error::custom(format!("output {k} is not a number"))),
            })
            .collect()
    }
}

/// `x` with 6 significant digits.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => n.as_f64().map(format_sig6).unwrap_or_else(|| n.to_string()),
        Value::Array(items) => format!("({})", items.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}

fn cell_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell_value).collect::<Vec<_>>().join(";"),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render_json(records: &[OutputRecord]) -> String {
    let mut out = serde_json::to_string_pretty(records).expect("records serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> serde_json::Result<Vec<OutputRecord>> {
    serde_json::from_str(text)
}

/// CSV with one header row; columns are the union of all keys in first-seen
/// order, prefixed `in.`, `out.` and `meta.`.
pub fn render_csv(records: &[OutputRecord]) -> String {
    let mut columns: IndexMap<String, ()> = IndexMap::new();
    columns.insert("command".into(), ());
    for rec in records {
        for k in rec.inputs.keys() {
            columns.insert(format!("in.{k}"), ());
        }
        for k in rec.outputs.keys() {
            columns.insert(format!("out.{k}"), ());
        }
        for k in rec.metadata.keys() {
            columns.insert(format!("meta.{k}"), ());
        }
        if rec.error.is_some() {
            columns.insert("error.kind".into(), ());
            columns.insert("error.message".into(), ());
        }
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(columns.keys()).expect("in-memory write");
    for rec in records {
        let row: Vec<String> = columns
            .keys()
            .map(|col| {
                if col == "command" {
                    return rec.command.clone();
                }
                if let Some(k) = col.strip_prefix("in.") {
                    return rec.inputs.get(k).map(cell_value).unwrap_or_default();
                }
                if let Some(k) = col.strip_prefix("out.") {
                    return rec.outputs.get(k).map(|&x| cell_value(&real(x))).unwrap_or_default();
                }
                if let Some(k) = col.strip_prefix("meta.") {
                    return rec.metadata.get(k).map(cell_value).unwrap_or_default();
                }
                match (col.as_str(), &rec.error) {
                    ("error.kind", Some(e)) => e.kind.clone(),
                    ("error.message", Some(e)) => e.message.clone(),
                    _ => String::new(),
                }
            })
            .collect();
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("csv is utf-8")
}

pub fn render_text(records: &[OutputRecord]) -> String {
    let mut out = String::new();
    for (i, rec) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "{}", rec.command);
        let inputs: Vec<String> = rec.inputs.iter().map(|(k, v)| format!("{k}={}", text_value(v))).collect();
        if !inputs.is_empty() {
            let _ = writeln!(out, "  inputs: {}", inputs.join("  "));
        }
        for (k, &v) in &rec.outputs {
            let _ = writeln!(out, "  {k:<24} {}", format_sig6(v));
        }
        for (k, v) in &rec.metadata {
            let _ = writeln!(out, "  [{k}] {}", text_value(v));
        }
        if let Some(e) = &rec.error {
            let _ = writeln!(out, "  error ({}): {}", e.kind, e.message);
        }
    }
    out
}

pub fn render(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Text => render_text(records),
        Format::Json => render_json(records),
        Format::Csv => render_csv(records),
    }
}
