//! Column-ordered result tables and their serializations.
//!
//! Every subcommand produces one table.  CSV output has a header row, `.` as
//! the decimal separator regardless of locale (Rust float formatting is
//! locale-independent), and floats printed with 17 significant digits so a
//! round-trip through text reproduces the exact binary value.  JSON output is
//! an array of row objects whose field names match the CSV header.

use std::fmt::Write as _;

/// One typed value in a result row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Bool(bool),
    Text(&'static str),
}

/// Format a float with 17 significant digits (scientific notation), enough
/// for `f64` text round-trips to be exact.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Cell {
    fn push_csv(&self, out: &mut String) {
        match self {
            Cell::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Float(v) => out.push_str(&format_float(*v)),
            Cell::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Text(v) => out.push_str(v),
        }
    }

    fn push_json(&self, out: &mut String) {
        match self {
            Cell::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Float(v) if v.is_finite() => out.push_str(&format_float(*v)),
            // Non-finite numbers are not representable in JSON; emit strings.
            Cell::Float(v) => {
                let _ = write!(out, "\"{}\"", format_float(*v));
            }
            Cell::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Text(v) => {
                let _ = write!(out, "\"{v}\"");
            }
        }
    }
}

/// A fixed-column table of result rows.
#[derive(Debug, Clone)]
pub struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the column count"
        );
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.push_csv(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                out.push(',');
            }
            out.push_str("\n  {");
            for (i, (name, cell)) in self.columns.iter().zip(row.iter()).enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{name}\": ");
                cell.push_json(&mut out);
            }
            out.push('}');
        }
        if !self.rows.is_empty() {
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }
}
