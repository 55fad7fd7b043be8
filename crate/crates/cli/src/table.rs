use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Result of one scenario: a rectangular table plus run metadata.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Points whose quadrature did not meet the tolerance.
    pub flagged: usize,
    pub meta: Map<String, Value>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn flag_unless(&mut self, converged: bool) {
        if !converged {
            self.flagged += 1;
        }
    }

    pub fn write(&self, path: &Path, format: Format, scenario: &str, kind: &str) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(file);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let mut meta = self.meta.clone();
                meta.insert("flagged_points".into(), json!(self.flagged));
                let doc = json!({
                    "scenario": scenario,
                    "kind": kind,
                    "columns": self.columns,
                    "rows": self.rows,
                    "metadata": meta,
                });
                let mut f = std::io::BufWriter::new(file);
                serde_json::to_writer_pretty(&mut f, &doc)?;
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_csv_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(vec!["x".into(), "y".into(), "name".into()]);
        t.push(vec![1.5.into(), None.into(), "a".into()]);
        t.meta.insert("rel_tol".into(), json!(1e-8));
        let p = dir.path().join("sub/out.csv");
        t.write(&p, Format::Csv, "s", "potential").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "x,y,name\n1.5e0,,a\n");
        let p = dir.path().join("out.json");
        t.write(&p, Format::Json, "s", "potential").unwrap();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(v["rows"][0], json!([1.5, null, "a"]));
        assert_eq!(v["metadata"]["flagged_points"], json!(0));
    }
}
