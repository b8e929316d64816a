//! Tabular results and their CSV/JSON encodings.

use std::fmt::Write as _;

use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            // NaN and infinities become null
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(v) => json!(v),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match columns");
        self.rows.push(row);
    }

    /// Header row plus one line per row, `\n`-terminated.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// `{"command": ..., "columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self, command: &str) -> String {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({ "command": command, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["t", "entropy"]);
        t.push(vec![1usize.into(), 1.0.into()]);
        t.push(vec![2usize.into(), 0.8112781244591328.into()]);
        assert_eq!(t.to_csv(), "t,entropy\n1,1\n2,0.8112781244591328\n");
    }

    #[test]
    fn csv_quotes_text() {
        let mut t = Table::new(&["check", "detail"]);
        t.push(vec!["a".into(), "x, \"y\"".into()]);
        assert_eq!(t.to_csv(), "check,detail\na,\"x, \"\"y\"\"\"\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["t", "y"]);
        t.push(vec![3usize.into(), f64::NAN.into()]);
        let v: Value = serde_json::from_str(&t.to_json("demo")).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["columns"][1], "y");
        assert_eq!(v["rows"][0][0], 3);
        assert!(v["rows"][0][1].is_null());
    }
}
