//! CSV tables with a provenance comment line, and JSON sidecars.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, Result};

/// A numeric table; every row has one value per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub units: String,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest representation that round-trips, switching to exponent form for
/// very large or small magnitudes.
pub fn format_value(x: f64) -> String {
    format!("{x:?}")
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
}

/// Writes `# <command> config_sha256=<hash> units: <units>`, the header row
/// and the data rows.
pub fn write_csv(path: &Path, command: &str, config_hash: &str, table: &Table) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# {command} config_sha256={config_hash} units: {}", table.units).expect("write to Vec");
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&table.columns).expect("write to Vec");
        for row in &table.rows {
            debug_assert_eq!(row.len(), table.columns.len());
            w.write_record(row.iter().map(|&x| format_value(x))).expect("write to Vec");
        }
        w.flush().expect("write to Vec");
    }
    fs::write(path, buf).map_err(|e| LabError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

/// `<dir>/<stem>.csv` and its sidecar `<dir>/<stem>.json`.
pub fn output_paths(dir: &Path, stem: &str) -> (PathBuf, PathBuf) {
    (dir.join(format!("{stem}.csv")), dir.join(format!("{stem}.json")))
}
