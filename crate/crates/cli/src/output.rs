//! Deterministic CSV output. Every table starts with one comment line
//! carrying the tool version and the full parameter set; values are written
//! with 17 significant digits so files round-trip exactly and identical
//! configurations yield byte-identical artifacts.

use std::path::Path;

use crate::error::Result;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// The leading comment line: tool version plus `key=value` metadata.
pub fn header_line(meta: &[(String, String)]) -> String {
    let pairs = meta
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    format!("# subrad-sync {ARTIFACT_VERSION} | {pairs}")
}

/// A numeric table plus its header metadata.
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(meta: Vec<(String, String)>, columns: Vec<String>) -> Self {
        Table {
            meta,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&header_line(&self.meta));
        out.push('\n');
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line = row
                .iter()
                .map(|v| fmt_value(*v))
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Writes a text artifact (JSON or SVG) with a trailing newline.
pub fn write_text(path: &Path, body: &str) -> Result<()> {
    let mut text = body.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}
