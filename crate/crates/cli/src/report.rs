//! Report rows and their CSV / JSON rendering.

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

/// Reports with more rows than this drop their records from JSON output
/// unless `--full` is given.
pub const JSON_RECORD_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Index(usize),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    /// Extra field carried by the JSON record only.
    pub extra: Option<(&'static str, Value)>,
}

impl Row {
    pub fn new(cells: Vec<Cell>) -> Self {
        Self { cells, extra: None }
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub header: Vec<&'static str>,
    pub rows: Vec<Row>,
    /// Summary entries, in output order.
    pub summary: Vec<(&'static str, Value)>,
    pub passed: bool,
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => real(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# entbound {}\n", scalar(&json!(self.config.command))));
        out.push_str(&format!("# version={}\n", env!("CARGO_PKG_VERSION")));
        if let Value::Object(fields) = serde_json::to_value(&self.config).expect("config serializes") {
            for (k, v) in fields.iter().filter(|(k, _)| k.as_str() != "command") {
                out.push_str(&format!("# {k}={}\n", scalar(v)));
            }
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary.{k}={}\n", scalar(v)));
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .cells
                .iter()
                .map(|c| match c {
                    Cell::Index(i) => i.to_string(),
                    Cell::Real(x) => real(*x),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut summary = Map::new();
        for (k, v) in &self.summary {
            summary.insert((*k).to_string(), v.clone());
        }
        summary.insert("passed".into(), Value::Bool(self.passed));
        let mut doc = Map::new();
        doc.insert("config".into(), serde_json::to_value(&self.config).expect("config serializes"));
        doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        doc.insert("summary".into(), Value::Object(summary));
        if self.config.full || self.rows.len() <= JSON_RECORD_LIMIT {
            let records: Vec<Value> = self
                .rows
                .iter()
                .map(|row| {
                    let mut rec = Map::new();
                    for (name, cell) in self.header.iter().zip(&row.cells) {
                        let v = match cell {
                            Cell::Index(i) => json!(i),
                            Cell::Real(x) => json!(x),
                        };
                        rec.insert((*name).to_string(), v);
                    }
                    if let Some((k, v)) = &row.extra {
                        rec.insert((*k).to_string(), v.clone());
                    }
                    Value::Object(rec)
                })
                .collect();
            doc.insert("records".into(), Value::Array(records));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serializes");
        s.push('\n');
        s
    }
}
