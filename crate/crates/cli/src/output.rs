//! Deterministic output assembly: CSV with a versioned header line, or a
//! JSON run record embedding the config.  Floats print in Rust's default
//! shortest round-trip form so identical configs give byte-identical files.

use std::io::Write;

use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(anyhow::anyhow!(
                "unknown format {other:?} (use csv or json)"
            )),
        }
    }
}

/// One output cell: empty for fields that do not apply to the row.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Empty(Option<()>),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn empty() -> Self {
        Cell::Empty(None)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Empty(_) => String::new(),
            Cell::Num(v) => format!("{v}"),
            Cell::Bool(b) => format!("{b}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub struct Table {
    pub schema: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

/// JSON run record: the command, crate version, the config echo, and rows
/// keyed by column name.  Wall-clock timing is deliberately not part of the
/// record (outputs must be byte-identical across runs); it goes to stderr.
#[derive(Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    version: &'a str,
    schema: &'a str,
    config: &'a RunConfig,
    columns: &'a [&'a str],
    rows: Vec<serde_json::Map<String, serde_json::Value>>,
}

pub fn write_table(
    out: &mut dyn Write,
    format: Format,
    command: &str,
    config: &RunConfig,
    table: &Table,
) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "# {} v1", table.schema)?;
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    let mut map = serde_json::Map::new();
                    for (name, cell) in table.columns.iter().zip(row) {
                        let value = match cell {
                            Cell::Empty(_) => serde_json::Value::Null,
                            Cell::Num(v) => serde_json::json!(v),
                            Cell::Bool(b) => serde_json::json!(b),
                            Cell::Text(s) => serde_json::json!(s),
                        };
                        map.insert((*name).into(), value);
                    }
                    map
                })
                .collect();
            let record = RunRecord {
                command,
                version: env!("CARGO_PKG_VERSION"),
                schema: table.schema,
                config,
                columns: table.columns,
                rows,
            };
            serde_json::to_writer_pretty(&mut *out, &record)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn open_sink(path: Option<&std::path::Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}
