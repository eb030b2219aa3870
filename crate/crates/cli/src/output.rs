//! Report documents: canonical JSON and a flat CSV view.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use hcube_core::report::{worst_violation, InequalityReport};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{Format, Output};
use crate::CliError;

const CSV_COLUMNS: [&str; 14] = [
    "law",
    "n",
    "p",
    "lhs",
    "rhs_unit",
    "ratio",
    "constant",
    "direction",
    "pass",
    "slack",
    "witness_hex",
    "tol",
    "params",
    "note",
];

/// Everything a command hands back: its rows, any structured result, and
/// extra failures not carried by a row.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<InequalityReport>,
    pub result: Option<Value>,
    pub extra_violations: usize,
}

impl Outcome {
    pub fn violations(&self) -> usize {
        self.reports.iter().filter(|r| !r.pass).count() + self.extra_violations
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// The JSON document. Only `timestamp_unix` changes between identical runs.
pub fn document(command: &str, argv: &[String], outcome: &Outcome) -> Value {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let worst = worst_violation(&outcome.reports).map(to_value);
    let mut doc = Map::new();
    doc.insert("tool".into(), json!("hcube"));
    doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    doc.insert("command".into(), json!(command));
    doc.insert("args".into(), json!(argv));
    doc.insert("timestamp_unix".into(), json!(timestamp));
    doc.insert(
        "summary".into(),
        json!({
            "rows": outcome.reports.len(),
            "violations": outcome.violations(),
            "worst": worst,
        }),
    );
    if let Some(result) = &outcome.result {
        doc.insert("result".into(), result.clone());
    }
    doc.insert(
        "reports".into(),
        Value::Array(outcome.reports.iter().map(to_value).collect()),
    );
    Value::Object(doc)
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Object(map)) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", cell(Some(v))))
            .collect::<Vec<_>>()
            .join(";"),
        Some(other) => other.to_string(),
    }
}

/// One CSV row per entry of the document's `reports` array.
pub fn csv_from_document(doc: &Value) -> Result<Vec<u8>, CliError> {
    let rows = doc
        .get("reports")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Usage("document has no `reports` array".into()))?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.write_record(CSV_COLUMNS.iter().map(|c| cell(row.get(*c))))?;
    }
    w.into_inner()
        .map_err(|e| CliError::Io(e.into_error().to_string()))
}

pub fn render(doc: &Value, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut bytes =
                serde_json::to_vec_pretty(doc).map_err(|e| CliError::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => csv_from_document(doc),
    }
}

pub fn emit(doc: &Value, output: &Output) -> Result<(), CliError> {
    let bytes = render(doc, output.format)?;
    match &output.out {
        Some(path) => write_file(path, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
