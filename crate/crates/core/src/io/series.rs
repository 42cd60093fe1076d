//! Tabular curve data with bit-stable CSV and JSON serialization.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64`. Segments are separated by an empty line in
//! CSV and are nested arrays in JSON.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{MslvError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self { name: name.into(), unit: unit.into() }
    }

    fn header(&self) -> String {
        format!("{}[{}]", self.name, self.unit)
    }
}

/// Named columns and rows, grouped into segments.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSeries {
    pub name: String,
    pub columns: Vec<Column>,
    /// Each segment is a list of rows; each row has one value per column.
    pub segments: Vec<Vec<Vec<f64>>>,
    /// Ordered key/value pairs describing how the data was generated.
    pub metadata: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = MslvError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(MslvError::Domain(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

impl CurveSeries {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        Self { name: name.into(), columns, segments: Vec::new(), metadata: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Appends a segment; empty segments are dropped.
    pub fn push_segment(&mut self, rows: Vec<Vec<f64>>) -> Result<()> {
        if let Some(bad) = rows.iter().find(|r| r.len() != self.columns.len()) {
            return Err(MslvError::Domain(format!(
                "row has {} values, schema has {} columns",
                bad.len(),
                self.columns.len()
            )));
        }
        if !rows.is_empty() {
            self.segments.push(rows);
        }
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// All values of one column across segments.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows().map(|r| r[i]).collect())
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.segments.iter().flatten()
    }

    pub fn row_count(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# name = {}", self.name);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let header: Vec<String> = self.columns.iter().map(Column::header).collect();
        let _ = writeln!(out, "{}", header.join(","));
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for row in seg {
                let cells: Vec<String> = row.iter().map(|&x| float(x)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut series = CurveSeries::new("", Vec::new());
        let mut header_seen = false;
        let mut current: Vec<Vec<f64>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| MslvError::Parse { line, message };
            if let Some(comment) = raw.strip_prefix('#') {
                let (k, v) = comment.split_once('=').ok_or_else(|| err("metadata needs 'key = value'".into()))?;
                let (k, v) = (k.trim(), v.trim());
                if k == "name" && series.name.is_empty() {
                    series.name = v.into();
                } else {
                    series.meta(k, v);
                }
                continue;
            }
            if !header_seen {
                for cell in raw.split(',') {
                    let (name, unit) = cell
                        .strip_suffix(']')
                        .and_then(|c| c.split_once('['))
                        .ok_or_else(|| err(format!("header cell '{cell}' is not 'name[unit]'")))?;
                    series.columns.push(Column::new(name, unit));
                }
                header_seen = true;
                continue;
            }
            if raw.trim().is_empty() {
                series.push_segment(std::mem::take(&mut current))?;
                continue;
            }
            let row = raw
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| err(format!("'{c}' is not a number"))))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != series.columns.len() {
                return Err(err(format!("{} values for {} columns", row.len(), series.columns.len())));
            }
            current.push(row);
        }
        series.push_segment(current)?;
        Ok(series)
    }

    pub fn to_json(&self) -> String {
        let q = |s: &str| Value::String(s.into()).to_string();
        let num = |x: f64| if x.is_finite() { float(x) } else { "null".into() };
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"name\": {},", q(&self.name));
        let meta: Vec<String> = self.metadata.iter().map(|(k, v)| format!("{}: {}", q(k), q(v))).collect();
        let _ = writeln!(out, "  \"metadata\": {{{}}},", meta.join(", "));
        let cols: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{{\"name\": {}, \"unit\": {}}}", q(&c.name), q(&c.unit)))
            .collect();
        let _ = writeln!(out, "  \"columns\": [{}],", cols.join(", "));
        out.push_str("  \"segments\": [");
        for (i, seg) in self.segments.iter().enumerate() {
            out.push_str(if i == 0 { "\n    [" } else { ",\n    [" });
            for (j, row) in seg.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
                let sep = if j == 0 { "\n" } else { ",\n" };
                let _ = write!(out, "{sep}      [{}]", cells.join(", "));
            }
            out.push_str("\n    ]");
        }
        out.push_str(if self.segments.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| MslvError::Parse { line: 0, message: m.into() };
        let v: Value = serde_json::from_str(text).map_err(|e| MslvError::Parse { line: e.line(), message: e.to_string() })?;
        let name = v["name"].as_str().ok_or_else(|| bad("missing name"))?;
        let columns = v["columns"]
            .as_array()
            .ok_or_else(|| bad("missing columns"))?
            .iter()
            .map(|c| match (c["name"].as_str(), c["unit"].as_str()) {
                (Some(n), Some(u)) => Ok(Column::new(n, u)),
                _ => Err(bad("column needs name and unit")),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut series = CurveSeries::new(name, columns);
        if let Some(meta) = v["metadata"].as_object() {
            for (k, val) in meta {
                series.meta(k, val.as_str().ok_or_else(|| bad("metadata values must be strings"))?);
            }
        }
        for seg in v["segments"].as_array().ok_or_else(|| bad("missing segments"))? {
            let rows = seg
                .as_array()
                .ok_or_else(|| bad("segment must be an array"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("row must be an array"))?
                        .iter()
                        .map(|x| if x.is_null() { Ok(f64::NAN) } else { x.as_f64().ok_or_else(|| bad("non-numeric cell")) })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            series.push_segment(rows)?;
        }
        Ok(series)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format))
            .map_err(|e| MslvError::Io(format!("cannot write '{}': {e}", path.display())))
    }

    pub fn read(path: &Path, format: Format) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MslvError::Io(format!("cannot read '{}': {e}", path.display())))?;
        match format {
            Format::Csv => Self::from_csv(&text),
            Format::Json => Self::from_json(&text),
        }
    }
}
