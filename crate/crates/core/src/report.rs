//! CSV report schema shared by the estimators and the CLI.
//!
//! Column order is fixed: experiment, space, dim, m, quantity, value,
//! witness_json. Values are formatted with the shortest round-trip float
//! representation, so identical runs produce byte-identical files.

use std::io::Write;

use serde::Serialize;

use crate::constants::ConstantsReport;
use crate::error::Result;

pub const CSV_COLUMNS: [&str; 7] =
    ["experiment", "space", "dim", "m", "quantity", "value", "witness_json"];

#[derive(Clone, Debug, Serialize)]
pub struct CsvRow {
    pub experiment: String,
    pub space: String,
    pub dim: String,
    pub m: String,
    pub quantity: String,
    pub value: String,
    pub witness_json: String,
}

impl CsvRow {
    pub fn new(
        experiment: &str,
        space: &str,
        dim: impl ToString,
        m: Option<usize>,
        quantity: &str,
        value: f64,
        witness: &serde_json::Value,
    ) -> Self {
        Self {
            experiment: experiment.to_string(),
            space: space.to_string(),
            dim: dim.to_string(),
            m: m.map(|m| m.to_string()).unwrap_or_default(),
            quantity: quantity.to_string(),
            value: value.to_string(),
            witness_json: if witness.is_null() { String::new() } else { witness.to_string() },
        }
    }
}

/// Rows for every estimate in a constants report, in estimate order,
/// followed by one `note` row per recorded note.
pub fn constants_rows(experiment: &str, report: &ConstantsReport) -> Vec<CsvRow> {
    let mut rows: Vec<CsvRow> = report
        .estimates
        .iter()
        .map(|e| {
            CsvRow::new(experiment, &report.space, e.dim, e.m, &e.quantity, e.value, &e.witness)
        })
        .collect();
    for note in &report.notes {
        rows.push(CsvRow {
            experiment: experiment.to_string(),
            space: report.space.clone(),
            dim: report.dim.to_string(),
            m: String::new(),
            quantity: "note".to_string(),
            value: String::new(),
            witness_json: note.clone(),
        });
    }
    rows
}

pub fn write_csv<W: Write>(rows: &[CsvRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record(CSV_COLUMNS)
        .map_err(|e| crate::error::Error::Io(std::io::Error::other(e)))?;
    for row in rows {
        writer
            .write_record([
                &row.experiment,
                &row.space,
                &row.dim,
                &row.m,
                &row.quantity,
                &row.value,
                &row.witness_json,
            ])
            .map_err(|e| crate::error::Error::Io(std::io::Error::other(e)))?;
    }
    writer
        .flush()
        .map_err(|e| crate::error::Error::Io(std::io::Error::other(e)))?;
    Ok(())
}

pub fn csv_string(rows: &[CsvRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
