// SPDX-License-Identifier: MIT OR Apache-2.0

//! Reading observations from plain text or CSV.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {text:?} is not a number")]
    NotNumeric { line: usize, text: String },
    #[error("line {line}: value {text:?} is not finite")]
    NotFinite { line: usize, text: String },
    #[error("column {0:?} not found in CSV header")]
    MissingColumn(String),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

fn parse_value(text: &str, line: usize) -> Result<f64, InputError> {
    let v: f64 = text.parse().map_err(|_| InputError::NotNumeric {
        line,
        text: text.to_string(),
    })?;
    if !v.is_finite() {
        return Err(InputError::NotFinite {
            line,
            text: text.to_string(),
        });
    }
    Ok(v)
}

/// One value per line; blank lines are skipped. Line numbers are 1-based.
pub fn parse_lines(text: &str) -> Result<Vec<f64>, InputError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        out.push(parse_value(t, idx + 1)?);
    }
    Ok(out)
}

/// Values of the named column of a headed CSV. Line numbers count the header.
pub fn parse_csv_column<R: io::Read>(reader: R, column: &str) -> Result<Vec<f64>, InputError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let idx = rdr
        .headers()?
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| InputError::MissingColumn(column.to_string()))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = rec.get(idx).unwrap_or("");
        out.push(parse_value(field, line)?);
    }
    Ok(out)
}

pub fn read_values(path: &Path, column: Option<&str>) -> Result<Vec<f64>, InputError> {
    let io_err = |source| InputError::Io {
        path: path.to_path_buf(),
        source,
    };
    match column {
        Some(col) => parse_csv_column(fs::File::open(path).map_err(io_err)?, col),
        None => parse_lines(&fs::read_to_string(path).map_err(io_err)?),
    }
}
