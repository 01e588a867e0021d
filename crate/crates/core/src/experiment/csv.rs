use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Rectangular table of finite numbers with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::InvalidParameter(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.header.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite table value {v}")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Comma-separated, 17 significant digits, LF line endings.
    pub fn to_csv_string(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{v:.16e}").expect("write to String");
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        let mut t = CsvTable::new(["a", "b"]);
        t.push_row(vec![0.1, -2.0]).unwrap();
        assert_eq!(t.to_csv_string(), "a,b\n1.0000000000000001e-1,-2.0000000000000000e0\n");
        assert_eq!(t.column("b").unwrap(), vec![-2.0]);
    }

    #[test]
    fn rejects_ragged_and_non_finite_rows() {
        let mut t = CsvTable::new(["a", "b"]);
        assert!(t.push_row(vec![1.0]).is_err());
        assert!(t.push_row(vec![1.0, f64::NAN]).is_err());
        assert!(t.rows().is_empty());
    }

    #[test]
    fn round_trips_exactly() {
        let mut t = CsvTable::new(["x"]);
        let v = std::f64::consts::PI / 7.0;
        t.push_row(vec![v]).unwrap();
        let text = t.to_csv_string();
        let parsed: f64 = text.lines().nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, v);
    }
}
