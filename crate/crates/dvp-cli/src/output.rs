//! Output document assembly: one JSON document per invocation, or CSV rows
//! with a header. Both formats carry the same records with identically
//! formatted numbers.

use serde_json::{Map, Number, Value};
use std::time::{SystemTime, UNIX_EPOCH};

pub type Record = Map<String, Value>;

/// Convenience builder for one flat output record.
#[derive(Default)]
pub struct RecordBuilder {
    map: Record,
}

impl RecordBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn str(mut self, key: &str, value: impl Into<String>) -> Self {
        self.map.insert(key.into(), Value::String(value.into()));
        self
    }

    pub fn f64(mut self, key: &str, value: f64) -> Self {
        let number = Number::from_f64(value)
            .unwrap_or_else(|| Number::from_f64(0.0).unwrap());
        self.map.insert(key.into(), Value::Number(number));
        self
    }

    pub fn u64(mut self, key: &str, value: u64) -> Self {
        self.map.insert(key.into(), Value::Number(value.into()));
        self
    }

    pub fn bool(mut self, key: &str, value: bool) -> Self {
        self.map.insert(key.into(), Value::Bool(value));
        self
    }

    pub fn build(self) -> Record {
        self.map
    }
}

/// Normalized comma string for echoing a probability vector.
pub fn p_string(entries: &[f64]) -> String {
    entries
        .iter()
        .map(|&v| {
            Number::from_f64(v)
                .map(|n| n.to_string())
                .unwrap_or_else(|| "0".into())
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn emit_json(command: &str, records: &[Record]) -> String {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String(command.into()));
    doc.insert(
        "timestamp_unix".into(),
        Value::Number(Number::from_f64(timestamp).unwrap()),
    );
    doc.insert(
        "records".into(),
        Value::Array(records.iter().cloned().map(Value::Object).collect()),
    );
    serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable")
}

/// RFC-4180-style CSV: header row from the union of record keys in first
/// appearance order, one row per record, `.` decimal separator (numbers are
/// rendered exactly as in the JSON output).
pub fn emit_csv(records: &[Record]) -> String {
    let mut columns: Vec<String> = Vec::new();
    for record in records {
        for key in record.keys() {
            if !columns.iter().any(|c| c == key) {
                columns.push(key.clone());
            }
        }
    }
    let mut out = String::new();
    out.push_str(
        &columns
            .iter()
            .map(|c| csv_escape(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push_str("\r\n");
    for record in records {
        let row = columns
            .iter()
            .map(|c| match record.get(c) {
                Some(Value::String(s)) => csv_escape(s),
                Some(Value::Number(n)) => n.to_string(),
                Some(Value::Bool(b)) => b.to_string(),
                Some(other) => csv_escape(&other.to_string()),
                None => String::new(),
            })
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&row);
        out.push_str("\r\n");
    }
    out
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
