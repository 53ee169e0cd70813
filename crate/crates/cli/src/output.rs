use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;
use unitary_maps::ncpoly::{format_key, TraceExpression};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

/// One command result in all three renderings. `failed` marks a computation that ran but
/// whose identity or bound did not hold.
pub struct Output {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub pretty: String,
    pub failed: bool,
}

impl Output {
    pub fn new(json: Value, pretty: impl Into<String>) -> Self {
        Self {
            json,
            header: Vec::new(),
            rows: Vec::new(),
            pretty: pretty.into(),
            failed: false,
        }
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.header = header.iter().map(|h| h.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn failed(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json)?),
            Format::Pretty => writeln!(out, "{}", self.pretty),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
        }
    }
}

pub fn expression_json(t: &TraceExpression) -> Value {
    serde_json::json!({ "value": t.to_string(), "terms": t.term_strings() })
}

pub fn expression_rows(t: &TraceExpression) -> Vec<Vec<String>> {
    t.terms()
        .map(|(k, c)| vec![c.to_string(), format_key(k)])
        .collect()
}

/// A trace expression as the whole output.
pub fn expression(t: &TraceExpression) -> Output {
    Output::new(expression_json(t), t.to_string()).table(&["coeff", "traces"], expression_rows(t))
}
