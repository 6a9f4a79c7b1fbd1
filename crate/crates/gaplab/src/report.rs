//! Output files. Every report carries the tool version, the configuration it
//! was run with, the seed and the tolerances it was judged against; CSV
//! repeats these as `#` comment lines above the table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io::write_file;

pub const TOOL: &str = "gaplab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub results: Value,
}

/// Fixed columns; cells are preformatted so that output is byte-stable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Report {
    pub fn new(command: &str, config: impl Serialize, seed: u64, results: impl Serialize) -> Result<Self> {
        Ok(Report {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            seed,
            tolerances: BTreeMap::new(),
            results: serde_json::to_value(results)?,
        })
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self, table: &Table) -> Result<String> {
        let mut out = String::new();
        writeln!(out, "# {} {}", self.tool, self.version).unwrap();
        writeln!(out, "# command: {}", self.command).unwrap();
        writeln!(out, "# config: {}", serde_json::to_string(&self.config)?).unwrap();
        writeln!(out, "# seed: {}", self.seed).unwrap();
        for (k, v) in &self.tolerances {
            writeln!(out, "# tolerance {k}: {}", num(*v)).unwrap();
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&table.columns)?;
        for r in &table.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::io("csv buffer", e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv writer emits utf-8"));
        Ok(out)
    }

    /// Writes `<dir>/<command>.json` and `<dir>/<command>.csv`.
    pub fn write(&self, table: &Table, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;
        let json = dir.join(format!("{}.json", self.command));
        let csv = dir.join(format!("{}.csv", self.command));
        write_file(&json, self.to_json()?.as_bytes())?;
        write_file(&csv, self.to_csv(table)?.as_bytes())?;
        Ok((json, csv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_header_carries_provenance() {
        let r = Report::new("gap", json!({"levels": 3}), 5, json!({"xi": 1.5})).unwrap().tolerance("xi", 0.25);
        let mut t = Table::new(&["level", "xi", "tolerance"]);
        t.push(vec!["1".into(), num(1.5), num(0.25)]);
        let s = r.to_csv(&t).unwrap();
        assert!(s.starts_with("# gaplab "));
        assert!(s.contains("# seed: 5\n") && s.contains("# tolerance xi: 0.25\n"));
        assert!(s.ends_with("level,xi,tolerance\n1,1.5,0.25\n"));
        let j: Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(j["config"]["levels"], 3);
        assert_eq!(j["tolerances"]["xi"], 0.25);
    }

    #[test]
    fn num_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.0 * std::f64::consts::PI.powi(2)] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
