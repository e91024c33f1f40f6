//! Matrix input: CSV rows of decimals, or JSON `{"n": int, "entries": [[...]]}`.
//!
//! Numbers use a decimal point; a decimal comma splits a CSV field and is
//! reported as a ragged row.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Json,
}

impl InputFormat {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "json" => Ok(InputFormat::Json),
            other => Err(Error::Parse(format!("unknown format '{other}'"))),
        }
    }
}

/// Blank lines and lines starting with `#` are skipped.
pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    Error::Parse(format!("record {}: '{field}' is not a number", line + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no rows".into()));
    }
    Matrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Matrix> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse(text: &str, format: InputFormat) -> Result<Matrix> {
    match format {
        InputFormat::Csv => parse_csv(text),
        InputFormat::Json => parse_json(text),
    }
}

pub fn read_matrix(path: &Path, format: Option<InputFormat>) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text, format.unwrap_or_else(|| InputFormat::from_path(path)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_basic() {
        let m = parse_csv("# signed 3x3\n8.5, 0, 6.1\n-5.6,3.2,-7.4\n\n6,-2.8,6.6\n").unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m[(1, 0)], -5.6);
        assert_eq!(m[(2, 2)], 6.6);
    }

    #[test]
    fn csv_rejects_decimal_comma_and_junk() {
        assert!(parse_csv("8,5 0\n1 2").is_err());
        assert!(parse_csv("1,2\n3,4,5").is_err());
        assert!(parse_csv("1,x\n3,4").is_err());
        assert!(parse_csv("").is_err());
        assert!(parse_csv("1,nan\n3,4").is_err());
    }

    #[test]
    fn json_basic() {
        let m = parse_json(r#"{"n": 2, "entries": [[1, 2], [3, 4.5]]}"#).unwrap();
        assert_eq!(m[(1, 1)], 4.5);
        assert!(parse_json(r#"{"n": 3, "entries": [[1, 2], [3, 4]]}"#).is_err());
        assert!(parse_json("[1,2]").is_err());
    }

    #[test]
    fn format_selection() {
        assert_eq!(InputFormat::from_path(Path::new("a.JSON")), InputFormat::Json);
        assert_eq!(InputFormat::from_path(Path::new("a.txt")), InputFormat::Csv);
        assert_eq!("csv".parse::<InputFormat>().unwrap(), InputFormat::Csv);
        assert!("xml".parse::<InputFormat>().is_err());
    }
}
