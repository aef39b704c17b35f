//! Rectangular named tables carrying figure datasets, with deterministic
//! CSV and JSON rendering.
//!
//! Floats render with 9 significant digits and a '.' separator so that
//! re-running an export on the same inputs yields byte-identical files.

use crate::error::{Error, Result};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum CellValue {
    Text(String),
    Float(f64),
    Int(i64),
    Bool(bool),
    Null,
}

impl From<&str> for CellValue {
    fn from(v: &str) -> Self {
        CellValue::Text(v.to_string())
    }
}

impl From<String> for CellValue {
    fn from(v: String) -> Self {
        CellValue::Text(v)
    }
}

impl From<f64> for CellValue {
    fn from(v: f64) -> Self {
        CellValue::Float(v)
    }
}

impl From<i64> for CellValue {
    fn from(v: i64) -> Self {
        CellValue::Int(v)
    }
}

impl From<usize> for CellValue {
    fn from(v: usize) -> Self {
        CellValue::Int(v as i64)
    }
}

impl From<bool> for CellValue {
    fn from(v: bool) -> Self {
        CellValue::Bool(v)
    }
}

impl<T: Into<CellValue>> From<Option<T>> for CellValue {
    fn from(v: Option<T>) -> Self {
        match v {
            Some(v) => v.into(),
            None => CellValue::Null,
        }
    }
}

/// A named rectangular table: unique column names, rows all of equal arity.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    name: String,
    columns: Vec<String>,
    rows: Vec<Vec<CellValue>>,
}

impl FigureTable {
    /// Builds an empty table. Panics on duplicate column names; tables are
    /// constructed by library code with fixed schemas.
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        let columns: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        for (i, c) in columns.iter().enumerate() {
            assert!(
                !columns[..i].contains(c),
                "duplicate column name '{c}' in table"
            );
        }
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics if the arity does not match the columns.
    pub fn push_row(&mut self, row: Vec<CellValue>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row arity {} does not match {} columns in table '{}'",
            row.len(),
            self.columns.len(),
            self.name
        );
        self.rows.push(row);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<CellValue>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// The cell at (row, column name), if both exist.
    pub fn cell(&self, row: usize, column: &str) -> Option<&CellValue> {
        let col = self.column_index(column)?;
        self.rows.get(row)?.get(col)
    }

    /// Same data under a different name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Projection onto a subset of columns, in the given order.
    pub fn select(&self, name: impl Into<String>, columns: &[&str]) -> Result<FigureTable> {
        let indices: Vec<usize> = columns
            .iter()
            .map(|c| {
                self.column_index(c).ok_or_else(|| {
                    Error::InvalidArgument(format!("no column '{c}' in table '{}'", self.name))
                })
            })
            .collect::<Result<_>>()?;
        let mut out = FigureTable::new(name, columns);
        for row in &self.rows {
            out.push_row(indices.iter().map(|&i| row[i].clone()).collect());
        }
        Ok(out)
    }

    /// Rows satisfying the predicate, as a new table.
    pub fn filtered(
        &self,
        name: impl Into<String>,
        predicate: impl Fn(&[CellValue]) -> bool,
    ) -> FigureTable {
        let mut out = FigureTable::new(name, &self.columns.iter().map(String::as_str).collect::<Vec<_>>());
        for row in &self.rows {
            if predicate(row) {
                out.push_row(row.clone());
            }
        }
        out
    }

    /// RFC 4180-style CSV with a header row and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| csv_field(c)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(cell_to_csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON object `{"name", "columns", "rows"}` with rows as arrays.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"name\": {},\n", json_string(&self.name)));
        let columns: Vec<String> = self.columns.iter().map(|c| json_string(c)).collect();
        out.push_str(&format!("  \"columns\": [{}],\n", columns.join(", ")));
        out.push_str("  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    [");
            let cells: Vec<String> = row.iter().map(cell_to_json).collect();
            out.push_str(&cells.join(", "));
            out.push(']');
        }
        if !self.rows.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }
}

/// Formats a float with 9 significant digits and a '.' decimal separator.
/// Zero collapses to "0"; non-finite values render as text markers (CSV) and
/// must be screened out before JSON.
pub fn format_float(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if value.is_nan() {
        return "NaN".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // The exponent from the scientific rendering pins the digit count without
    // relying on platform log10.
    let sci = format!("{value:e}");
    let exponent: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    let decimals = (8 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn cell_to_csv(cell: &CellValue) -> String {
    match cell {
        CellValue::Text(s) => csv_field(s),
        CellValue::Float(v) => format_float(*v),
        CellValue::Int(v) => v.to_string(),
        CellValue::Bool(v) => v.to_string(),
        CellValue::Null => String::new(),
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn cell_to_json(cell: &CellValue) -> String {
    match cell {
        CellValue::Text(s) => json_string(s),
        CellValue::Float(v) if v.is_finite() => format_float(*v),
        CellValue::Float(_) => "null".to_string(),
        CellValue::Int(v) => v.to_string(),
        CellValue::Bool(v) => v.to_string(),
        CellValue::Null => "null".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_examples() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(0.508), "0.508000000");
        assert_eq!(format_float(-0.1), "-0.100000000");
        assert_eq!(format_float(15.0), "15.0000000");
        assert_eq!(format_float(2.0 / 3.0), "0.666666667");
        assert_eq!(format_float(1234567891.0), "1234567891");
    }

    #[test]
    fn csv_rendering_quotes_when_needed() {
        let mut t = FigureTable::new("demo", &["id", "value"]);
        t.push_row(vec!["plain".into(), 0.5.into()]);
        t.push_row(vec!["with,comma".into(), CellValue::Null]);
        t.push_row(vec![CellValue::Text("say \"hi\"".into()), 3usize.into()]);
        let csv = t.to_csv();
        assert_eq!(
            csv,
            "id,value\nplain,0.500000000\n\"with,comma\",\n\"say \"\"hi\"\"\",3\n"
        );
    }

    #[test]
    fn json_rendering_is_valid_and_typed() {
        let mut t = FigureTable::new("demo", &["id", "flag", "value"]);
        t.push_row(vec!["a".into(), true.into(), 0.25.into()]);
        t.push_row(vec!["b".into(), false.into(), CellValue::Null]);
        let json = t.to_json();
        assert!(json.contains("\"name\": \"demo\""));
        assert!(json.contains("[\"a\", true, 0.250000000]"));
        assert!(json.contains("[\"b\", false, null]"));
    }

    #[test]
    fn select_and_filter() {
        let mut t = FigureTable::new("demo", &["id", "keep", "value"]);
        t.push_row(vec!["a".into(), true.into(), 1.0.into()]);
        t.push_row(vec!["b".into(), false.into(), 2.0.into()]);
        let kept = t.filtered("kept", |row| row[1] == CellValue::Bool(true));
        assert_eq!(kept.row_count(), 1);
        let projected = kept.select("narrow", &["id", "value"]).unwrap();
        assert_eq!(projected.columns(), ["id", "value"]);
        assert_eq!(projected.rows()[0].len(), 2);
        assert!(t.select("bad", &["missing"]).is_err());
    }

    #[test]
    #[should_panic(expected = "row arity")]
    fn ragged_rows_panic() {
        let mut t = FigureTable::new("demo", &["a", "b"]);
        t.push_row(vec![1usize.into()]);
    }
}
