//! Report rendering. JSON output is wrapped in a versioned envelope and CSV
//! tables write `NA` for undefined values.

use serde_json::{Map, Value};

pub const SCHEMA: &str = "rkhs-geometry/1";

/// `{"schema": "rkhs-geometry/1", "results": [..]}` on one line, keys in insertion order.
pub fn render_json(results: &[Value]) -> String {
    let mut o = Map::new();
    o.insert("schema".into(), Value::String(SCHEMA.into()));
    o.insert("results".into(), Value::Array(results.to_vec()));
    let mut s = Value::Object(o).to_string();
    s.push('\n');
    s
}

/// Inverse of [`render_json`]; `None` if the envelope or schema is wrong.
pub fn parse_report(text: &str) -> Option<Vec<Value>> {
    let v: Value = serde_json::from_str(text).ok()?;
    if v.get("schema")?.as_str()? != SCHEMA {
        return None;
    }
    v.get("results")?.as_array().cloned()
}

pub fn csv_float(x: Option<f64>) -> String {
    match x {
        Some(x) if x.is_finite() => format!("{x:.16e}"),
        _ => "NA".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| escape(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}
