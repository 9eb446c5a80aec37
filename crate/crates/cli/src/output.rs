//! Rendering of command results as JSON, CSV or plain text.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Everything needed to rerun a command and get identical output.
#[derive(Clone, Debug, Serialize)]
pub struct Meta {
    pub command: Vec<String>,
    pub version: &'static str,
    pub seed: u64,
    pub bounds: Bounds,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bounds {
    pub max_group_order: u64,
    pub max_subgroups: u64,
    pub max_tuples: u64,
    pub max_trunc: usize,
}

/// A command result in all three shapes.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: Vec<String>,
}

impl Meta {
    fn comment_lines(&self) -> Vec<String> {
        vec![
            format!("# hlmoments {} seed={}", self.version, self.seed),
            format!(
                "# bounds: max_group_order={} max_subgroups={} max_tuples={} max_trunc={}",
                self.bounds.max_group_order, self.bounds.max_subgroups, self.bounds.max_tuples, self.bounds.max_trunc
            ),
            format!("# command: {}", self.command.join(" ")),
        ]
    }
}

pub fn emit(format: Format, meta: &Meta, report: &Report) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let doc = json!({ "meta": meta, "result": report.json });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            for line in meta.comment_lines() {
                writeln!(out, "{line}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.header)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for line in &report.text {
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

pub fn emit_error(format: Format, meta: &Meta, kind: &str, message: &str) {
    eprintln!("error: {message}");
    if format == Format::Json {
        let doc = json!({ "meta": meta, "error": { "kind": kind, "message": message } });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
}
