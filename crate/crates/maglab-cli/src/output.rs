//! Artifact files: JSON, CSV with fixed headers, and optional gnuplot scripts.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

/// A CSV table with a fixed header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Engine(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Engine(e.to_string()))
    }

    /// Plots every numeric column against the first one.
    pub fn gnuplot(&self, csv_name: &str) -> String {
        let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\nset logscale x\n");
        s.push_str(&format!("set xlabel '{}'\n", self.header[0]));
        let numeric: Vec<usize> = (1..self.header.len())
            .filter(|&c| self.rows.iter().all(|r| r[c].is_empty() || r[c].parse::<f64>().is_ok()))
            .collect();
        let series: Vec<String> = numeric
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let file = if i == 0 { format!("'{csv_name}'") } else { "''".into() };
                format!("{file} using 1:{} with linespoints", c + 1)
            })
            .collect();
        s.push_str(&format!("plot {}\n", series.join(", ")));
        s
    }
}

/// What a command produced, plus a tolerance failure to report after writing.
#[derive(Debug)]
pub struct Artifacts {
    pub name: &'static str,
    pub json: Value,
    pub table: Option<Table>,
    pub failure: Option<CliError>,
}

impl Artifacts {
    pub fn new(name: &'static str, json: Value) -> Self {
        Artifacts { name, json, table: None, failure: None }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    /// Pretty JSON with a trailing newline.
    pub fn json_text(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(&self.json)? + "\n")
    }

    /// Writes `<name>.json`, `<name>.csv` and, with `plot`, `<name>.gp` into
    /// `dir`. Returns the paths written.
    pub fn write(&self, dir: &Path, plot: bool) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let json_path = dir.join(format!("{}.json", self.name));
        fs::write(&json_path, self.json_text()?)?;
        written.push(json_path);
        if let Some(table) = &self.table {
            let csv_name = format!("{}.csv", self.name);
            let csv_path = dir.join(&csv_name);
            fs::write(&csv_path, table.to_csv()?)?;
            written.push(csv_path);
            if plot {
                let gp = dir.join(format!("{}.gp", self.name));
                fs::write(&gp, table.gnuplot(&csv_name))?;
                written.push(gp);
            }
        }
        Ok(written)
    }
}
