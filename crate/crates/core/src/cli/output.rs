//! Tables rendered as CSV or as a single JSON document.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Scalars outside the row structure; only the JSON form carries them.
    pub meta: Vec<(&'static str, Cell)>,
}

pub const UNITS: &str = "hbar = 2m = 1, E = k^2";

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Table {
            command,
            columns,
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => self.csv(precision),
            Format::Json => self.json(precision),
        }
    }

    fn csv(&self, precision: usize) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| cell_text(c, precision)).collect();
            w.write_record(&fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    fn json(&self, precision: usize) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.into()));
        doc.insert("units".into(), Value::String(UNITS.into()));
        if !self.meta.is_empty() {
            let meta: Map<String, Value> = self
                .meta
                .iter()
                .map(|(k, c)| (k.to_string(), cell_json(c, precision)))
                .collect();
            doc.insert("meta".into(), Value::Object(meta));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.to_string(), cell_json(c, precision)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }
}

/// Rounds to `precision` significant digits.
pub fn round_sig(x: f64, precision: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", precision.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

fn non_finite(x: f64) -> Option<&'static str> {
    if x.is_nan() {
        Some("nan")
    } else if x == f64::INFINITY {
        Some("inf")
    } else if x == f64::NEG_INFINITY {
        Some("-inf")
    } else {
        None
    }
}

pub fn number_text(x: f64, precision: usize) -> String {
    if let Some(s) = non_finite(x) {
        return s.to_string();
    }
    // Normalize -0 so equal values print identically.
    let r = round_sig(x, precision) + 0.0;
    Number::from_f64(r).map_or_else(|| r.to_string(), |n| n.to_string())
}

fn cell_text(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Num(x) => number_text(*x, precision),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Flag(b) => b.to_string(),
    }
}

fn cell_json(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Num(x) => match non_finite(*x) {
            Some(s) => Value::String(s.into()),
            None => Number::from_f64(round_sig(*x, precision) + 0.0).map_or(Value::Null, Value::Number),
        },
        Cell::Int(i) => Value::Number((*i).into()),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Flag(b) => Value::Bool(*b),
    }
}
