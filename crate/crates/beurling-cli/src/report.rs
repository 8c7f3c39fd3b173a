use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::ExperimentConfig;

/// Rows whose error estimate exceeds this fraction of the value are flagged.
pub const FLAG_RELATIVE_ERROR: f64 = 0.1;

fn flagged(value: f64, error: f64) -> bool {
    !value.is_finite() || !error.is_finite() || error > FLAG_RELATIVE_ERROR * value.abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scalar {
    pub value: f64,
    pub method: String,
    pub error: f64,
    pub flagged: bool,
}

/// A CSV table; every row ends with `method, error, flagged`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<Vec<String>>,
    pub flagged_rows: usize,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        let mut cols: Vec<String> = columns.iter().map(|s| s.to_string()).collect();
        cols.extend(["method", "error", "flagged"].map(String::from));
        Table { name: name.into(), columns: cols, rows: vec![], flagged_rows: 0 }
    }

    /// `value` is the quantity the error estimate refers to.
    pub fn push(&mut self, cells: Vec<String>, method: &str, value: f64, error: f64) {
        assert_eq!(cells.len() + 3, self.columns.len(), "row width for {}", self.name);
        let f = flagged(value, error);
        self.flagged_rows += f as usize;
        let mut row = cells;
        row.extend([method.to_string(), fmt(error), f.to_string()]);
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().context("flushing csv")?)
    }

    /// Column `name` as text.
    pub fn text(&self, name: &str) -> Vec<&str> {
        let k = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].as_str()).collect()
    }

    /// Column `name` parsed as floats.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let k = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[k].parse().unwrap_or(f64::NAN)).collect()
    }
}

/// Shortest round-trip formatting.
pub fn fmt(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub versions: BTreeMap<String, String>,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub title: String,
    pub scalars: BTreeMap<String, Scalar>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn new(experiment: &str, title: &str, config: &ExperimentConfig) -> Self {
        let versions = BTreeMap::from([
            ("beurling-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("beurling-lab".to_string(), beurling_lab::VERSION.to_string()),
        ]);
        ExperimentReport {
            experiment: experiment.into(),
            title: title.into(),
            scalars: BTreeMap::new(),
            tables: vec![],
            notes: vec![],
            provenance: Provenance { config_hash: config.hash(), versions, config: config.clone() },
        }
    }

    pub fn scalar(&mut self, name: &str, value: f64, method: &str, error: f64) {
        let s = Scalar { value, method: method.into(), error, flagged: flagged(value, error) };
        self.scalars.insert(name.into(), s);
    }

    /// An exact or counted quantity.
    pub fn exact(&mut self, name: &str, value: f64) {
        self.scalar(name, value, "exact", 0.0);
    }

    pub fn get(&self, name: &str) -> f64 {
        self.scalars.get(name).unwrap_or_else(|| panic!("no scalar {name}")).value
    }

    pub fn table(&self, name: &str) -> &Table {
        self.tables.iter().find(|t| t.name == name).unwrap_or_else(|| panic!("no table {name}"))
    }

    /// Write every table as CSV and the summary as `summary.json`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut out = vec![];
        for t in &self.tables {
            let p = dir.join(t.file_name());
            std::fs::write(&p, t.to_csv()?)?;
            out.push(p);
        }
        let p = dir.join("summary.json");
        let mut json = serde_json::to_vec_pretty(self)?;
        json.push(b'\n');
        std::fs::write(&p, json)?;
        out.push(p);
        Ok(out)
    }
}
