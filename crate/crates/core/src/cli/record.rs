//! Run records, CSV tables and output files.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// One persisted execution. Written once with `create_new`, never updated.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub argv: Vec<String>,
    pub config_snapshot: BTreeMap<String, String>,
    pub ignored_keys: Vec<String>,
    pub warnings: Vec<String>,
    pub results: serde_json::Value,
    pub residuals: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub error: Option<String>,
    pub started_at: String,
    pub duration_s: f64,
    pub artifact_version: String,
    pub outputs: Vec<String>,
}

/// `value ≤ limit` (or `≥` when `at_least`).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub at_least: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            at_least: false,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            at_least: true,
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        if self.at_least {
            self.value >= self.limit
        } else {
            self.value <= self.limit
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Floats with 17 significant digits.
    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(v) => format!("{v:.16e}"),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

/// `runs/<timestamp>-<slug>.json`, with a counter appended on collision.
pub fn append_record(dir: &Path, record: &RunRecord) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.9fZ");
    let slug = record.command.replace(' ', "-");
    let body = serde_json::to_string_pretty(record)?;
    for k in 0u32.. {
        let name = if k == 0 {
            format!("{stamp}-{slug}.json")
        } else {
            format!("{stamp}-{slug}-{k}.json")
        };
        let path = dir.join(name);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                f.write_all(body.as_bytes())?;
                f.write_all(b"\n")?;
                return Ok(path);
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e),
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let mut t = Table::new("x", &["n", "v"]);
        t.push(vec![Cell::Int(-3), Cell::Float(0.1)]);
        assert_eq!(t.render(), "n,v\n-3,1.0000000000000001e-1\n");
    }

    #[test]
    fn checks() {
        assert!(Check::at_most("r", 1e-10, 1e-9).passed());
        assert!(!Check::at_most("r", f64::NAN, 1e-9).passed());
        assert!(Check::at_least("d", 1e4, 1e3).passed());
    }

    #[test]
    fn records_never_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let rec = RunRecord {
            command: "verify delta".into(),
            argv: vec![],
            config_snapshot: BTreeMap::new(),
            ignored_keys: vec![],
            warnings: vec![],
            results: serde_json::Value::Null,
            residuals: BTreeMap::new(),
            checks: vec![],
            passed: true,
            error: None,
            started_at: String::new(),
            duration_s: 0.0,
            artifact_version: String::new(),
            outputs: vec![],
        };
        let a = append_record(dir.path(), &rec).unwrap();
        let b = append_record(dir.path(), &rec).unwrap();
        assert_ne!(a, b);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
    }
}
