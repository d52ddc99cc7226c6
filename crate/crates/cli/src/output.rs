//! Table assembly and deterministic CSV/JSON rendering.
//!
//! Floats are written with Rust's shortest round-trip formatting, so
//! identical runs produce byte-identical files and every number re-parses
//! exactly.

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    U32(u32),
    Usize(usize),
    F64(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U32(v) => v.to_string(),
            Cell::Usize(v) => v.to_string(),
            Cell::F64(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::U32(v) => json!(v),
            Cell::Usize(v) => json!(v),
            Cell::F64(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// CSV: a units comment, optional metadata comments, header, rows.
pub fn render_csv(table: &Table, metadata: &[(String, String)], warnings: &[String]) -> String {
    let mut out = String::from("# units: hbar=c=1\n");
    for (k, v) in metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    for w in warnings {
        out.push_str(&format!("# warning: {w}\n"));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// JSON: { request, results, solver_metadata, warnings }.
pub fn render_json(
    request: Value,
    table: &Table,
    metadata: &[(String, String)],
    warnings: &[String],
) -> String {
    let results: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in table.columns.iter().zip(row) {
                obj.insert((*name).to_string(), cell.json());
            }
            Value::Object(obj)
        })
        .collect();
    let mut meta = Map::new();
    for (k, v) in metadata {
        meta.insert(k.clone(), json!(v));
    }
    let doc = json!({
        "request": request,
        "results": results,
        "solver_metadata": Value::Object(meta),
        "warnings": warnings,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("json rendering");
    text.push('\n');
    text
}
