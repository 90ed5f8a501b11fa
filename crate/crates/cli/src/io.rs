//! CSV reading and writing. Files are plain comma-separated UTF-8 with a
//! header row, `.` as the decimal point and no quoting; every parse error
//! carries the offending line number.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rqa_core::TimeSeries;

/// A parsed numeric CSV: column names plus column-major data.
#[derive(Debug, Clone)]
pub struct NumericTable {
    pub columns: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn n_rows(&self) -> usize {
        self.data.first().map(|c| c.len()).unwrap_or(0)
    }

    /// Column by name, or an error naming the column and listing what the
    /// file actually has.
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        match self.columns.iter().position(|c| c == name) {
            Some(idx) => Ok(&self.data[idx]),
            None => bail!(
                "missing column {name:?}; file has columns: {}",
                self.columns.join(", ")
            ),
        }
    }

    pub fn series(&self, name: &str, sample_rate_hz: f64) -> Result<TimeSeries> {
        let values = self.column(name)?.to_vec();
        TimeSeries::new(values, sample_rate_hz, name)
            .with_context(|| format!("column {name:?} is not a valid series"))
    }
}

/// Read a CSV file whose every body cell is a finite number.
pub fn read_numeric_csv(path: &Path) -> Result<NumericTable> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    let header = match lines.next() {
        Some(h) if !h.trim().is_empty() => h,
        _ => bail!("{}: missing header row", path.display()),
    };
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let width = columns.len();
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); width];
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2; // 1-based, after the header
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            bail!(
                "{}: line {line_no} has {} fields, expected {width}",
                path.display(),
                fields.len()
            );
        }
        for (col, field) in fields.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| {
                anyhow::anyhow!(
                    "{}: line {line_no}, column {:?}: cannot parse {field:?} as a number",
                    path.display(),
                    columns[col]
                )
            })?;
            if !value.is_finite() {
                bail!(
                    "{}: line {line_no}, column {:?}: non-finite value {field:?}",
                    path.display(),
                    columns[col]
                );
            }
            data[col].push(value);
        }
    }
    Ok(NumericTable { columns, data })
}

/// `index,value` serialization of a series.
pub fn series_to_csv(series: &TimeSeries) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in series.samples().iter().enumerate() {
        let _ = writeln!(out, "{i},{v}");
    }
    out
}

pub fn write_series_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    fs::write(path, series_to_csv(series))
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Multi-column numeric CSV from named columns of equal length.
pub fn write_columns_csv(path: &Path, names: &[&str], columns: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&names.join(","));
    out.push('\n');
    let rows = columns.first().map(|c| c.len()).unwrap_or(0);
    for r in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| c[r].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}
