//! Tabular results with a `#` metadata block (CSV) or a JSON mirror.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Text(s) => json!(s),
        }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) if *v != 0.0 && (v.abs() < 1e-5 || v.abs() >= 1e16) => write!(f, "{v:e}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    /// `(name, unit)` per column.
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<(&'static str, &'static str)>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub const TIMESTAMP_PREFIX: &str = "# generated-unix-seconds: ";

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub fn write_csv(w: &mut impl Write, table: &Table, config: &Value) -> io::Result<()> {
    writeln!(w, "# tool: spinlab {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(w, "{TIMESTAMP_PREFIX}{}", timestamp())?;
    writeln!(w, "# config: {config}")?;
    let units: Vec<String> = table.columns.iter().map(|(n, u)| format!("{n}={u}")).collect();
    writeln!(w, "# units: {}", units.join(","))?;
    let names: Vec<&str> = table.columns.iter().map(|c| c.0).collect();
    writeln!(w, "{}", names.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_json(w: &mut impl Write, table: &Table, config: &Value) -> io::Result<()> {
    let doc = json!({
        "tool": "spinlab",
        "version": env!("CARGO_PKG_VERSION"),
        "generated_unix_seconds": timestamp(),
        "config": config,
        "columns": table.columns.iter().map(|(n, u)| json!({"name": n, "unit": u})).collect::<Vec<_>>(),
        "rows": table.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

fn write_table(w: &mut impl Write, table: &Table, config: &Value, format: Format) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(w, table, config),
        Format::Json => write_json(w, table, config),
    }
}

/// Removes a half-written file unless disarmed.
struct Partial(Option<PathBuf>);

impl Drop for Partial {
    fn drop(&mut self) {
        if let Some(path) = self.0.take() {
            let _ = std::fs::remove_file(path);
        }
    }
}

pub fn emit(table: &Table, config: &Value, format: Format, out: Option<&Path>) -> io::Result<()> {
    match out {
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_table(&mut w, table, config, format)?;
            w.flush()
        }
        Some(path) => {
            let mut guard = Partial(Some(path.to_owned()));
            let mut w = BufWriter::new(File::create(path)?);
            write_table(&mut w, table, config, format)?;
            w.flush()?;
            guard.0 = None;
            Ok(())
        }
    }
}
