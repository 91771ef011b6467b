//! Report serialization: versioned JSON or CSV with a header row.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    version: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Rows of a CSV report under a fixed header.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// 17 significant digits, enough to round-trip a double.
pub fn decimal(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_json<T: Serialize>(command: &str, body: &T) -> Result<String, CliError> {
    let envelope = Envelope { schema_version: SCHEMA_VERSION, version: env!("CARGO_PKG_VERSION"), command, body };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(|e| CliError::Computation(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn render_csv(table: &Table) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Computation(e.to_string());
    writer.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        writer.write_record(row).map_err(io)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Computation(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Computation(e.to_string()))
}

pub fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Computation(e.to_string())),
    }
}

/// Writes the report in the requested format.
pub fn emit<T: Serialize>(args: &OutputArgs, command: &str, body: &T, table: impl FnOnce() -> Table) -> Result<(), CliError> {
    let text = match args.format {
        Format::Json => render_json(command, body)?,
        Format::Csv => render_csv(&table())?,
    };
    write_output(&args.out, &text)
}
