//! CSV tables and their JSON metadata sidecars.
//!
//! Tables start with `#` comment lines, then one fixed header row. Numbers
//! use 12 significant digits in exponent form, and missing values are empty
//! fields. Nothing time-dependent goes into the CSV, so identical configs
//! produce identical bytes; timing lives in the sidecar.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Formats a value with 12 significant digits.
pub fn number(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn optional(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

/// In-memory CSV table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().copied().map(number).collect());
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    pub fn write_file(&self, path: &Path) -> io::Result<()> {
        self.write_to(io::BufWriter::new(File::create(path)?))
    }
}

/// Contents of the `.json` file written next to every table.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Every resolved setting, model parameters included.
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub n_max: usize,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell_seconds: Option<Vec<f64>>,
    /// Command-specific notes, e.g. the propagation method or advisories.
    pub notes: Vec<String>,
}

/// Settings as JSON, numbers where they parse as numbers.
pub fn parameter_map(pairs: &[(String, String)]) -> serde_json::Map<String, serde_json::Value> {
    pairs
        .iter()
        .map(|(k, v)| {
            let value = match v.parse::<f64>() {
                Ok(x) => serde_json::json!(x),
                Err(_) => serde_json::json!(v),
            };
            (k.clone(), value)
        })
        .collect()
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn write_metadata(path: &Path, meta: &Metadata) -> io::Result<()> {
    let file = io::BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(file, meta).map_err(io::Error::other)
}
