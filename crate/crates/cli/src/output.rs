use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use snl_core::Error;

/// Flat table for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub json: Value,
    pub table: Table,
}

impl Report {
    pub fn new(value: &impl Serialize, table: Table) -> Self {
        Self {
            json: serde_json::to_value(value).expect("report values serialize"),
            table,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec(&report.json).expect("JSON values serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&report.table.header).expect("in-memory write");
            for row in &report.table.rows {
                w.write_record(row).expect("in-memory write");
            }
            w.into_inner().expect("in-memory write")
        }
    }
}

pub fn write_out(bytes: &[u8], out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

/// Exit code and JSON body for an error.
pub fn error_report(e: &Error) -> (i32, Value) {
    let (code, body) = match e {
        Error::Validation(msg) => (2, json!({"kind": "validation", "message": msg})),
        Error::SearchLimit { budget, best } => (
            3,
            json!({"kind": "search_limit", "message": e.to_string(), "budget": budget, "best": best}),
        ),
        Error::WindowTooSmall { window, required } => (
            3,
            json!({"kind": "window_too_small", "message": e.to_string(), "window": window, "required": required}),
        ),
        Error::Construction(msg) => (1, json!({"kind": "construction", "message": msg})),
        Error::CheckFailed(msg) => (1, json!({"kind": "check_failed", "message": msg})),
    };
    (code, json!({ "error": body }))
}

pub fn emit_error(code: i32, body: &Value) -> ! {
    eprintln!("{body}");
    std::process::exit(code)
}

pub fn num(x: f64) -> String {
    serde_json::to_string(&x).unwrap_or_else(|_| "null".into())
}
