//! Experiment-record ingestion and the per-record size table.
//!
//! Input schema (UTF-8, comma-separated, `\n` line endings, `.`
//! decimals, header required):
//!
//! ```text
//! label,year,v_minus,mean_photon_number,source_note
//! ```
//!
//! `v_minus` is the measured variance of the squeezed conjugate
//! quadrature combination in vacuum-1 units; `mean_photon_number` may
//! be empty. Records with nonpositive `v_minus` are skipped (the run
//! continues and reports them); a malformed file is a hard error with
//! its line number.

use macrocat_core::macroscopicity::{
    coherence_range, equivalent_cat_photon_number, n_eff_lower_bound_both, ExperimentRecord,
};

use crate::CliError;

/// One output row: both bound conventions, their equivalent-cat photon
/// numbers, and the coherence range.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Row {
    pub label: String,
    pub year: i32,
    pub v_minus: f64,
    pub n_eff_as_printed: f64,
    pub n_eff_derivation_consistent: f64,
    pub equivalent_cat_n_as_printed: f64,
    pub equivalent_cat_n_derivation_consistent: f64,
    pub x_c: f64,
}

pub const INPUT_HEADER: [&str; 5] =
    ["label", "year", "v_minus", "mean_photon_number", "source_note"];

pub const OUTPUT_HEADER: [&str; 8] = [
    "label",
    "year",
    "v_minus",
    "n_eff_as_printed",
    "n_eff_derivation_consistent",
    "equivalent_cat_n_as_printed",
    "equivalent_cat_n_derivation_consistent",
    "x_c",
];

/// Derive the full row from a validated record.
pub fn fig1_row(record: &ExperimentRecord) -> Result<Fig1Row, CliError> {
    record
        .validate()
        .map_err(|e| CliError::Data(e.to_string()))?;
    let (printed, consistent) = n_eff_lower_bound_both(record.v_minus)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let cat_printed = equivalent_cat_photon_number(printed)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let cat_consistent = equivalent_cat_photon_number(consistent)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let x_c = coherence_range(record.v_minus).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(Fig1Row {
        label: record.label.clone(),
        year: record.year,
        v_minus: record.v_minus,
        n_eff_as_printed: printed,
        n_eff_derivation_consistent: consistent,
        equivalent_cat_n_as_printed: cat_printed,
        equivalent_cat_n_derivation_consistent: cat_consistent,
        x_c,
    })
}

/// A row skipped during ingestion, with the reason.
#[derive(Debug, Clone)]
pub struct SkippedRow {
    pub line: u64,
    pub label: String,
    pub reason: String,
}

pub struct IngestOutcome {
    pub rows: Vec<Fig1Row>,
    pub skipped: Vec<SkippedRow>,
}

fn parse_error(path: &str, line: u64, message: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{path}:{line}: {message}"))
}

fn check_header(path: &str, headers: &csv::StringRecord, expected: &[&str]) -> Result<(), CliError> {
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(parse_error(
            path,
            1,
            format!("header mismatch: expected `{}`, got `{}`", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

fn field<'a>(
    path: &str,
    record: &'a csv::StringRecord,
    idx: usize,
    line: u64,
) -> Result<&'a str, CliError> {
    record
        .get(idx)
        .ok_or_else(|| parse_error(path, line, format!("missing column {idx}")))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Read the experiment-record schema. Structural problems are hard
/// errors; nonpositive `v_minus` only skips the row.
pub fn read_experiment_csv(path: &str) -> Result<(Vec<ExperimentRecord>, Vec<SkippedRow>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{path}: {e}")))?;
    check_header(path, reader.headers().map_err(|e| CliError::Data(e.to_string()))?, &INPUT_HEADER)?;

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(parse_error(path, line, e));
            }
        };
        let line = record_line(&row);
        let label = field(path, &row, 0, line)?.to_string();
        let year: i32 = field(path, &row, 1, line)?
            .trim()
            .parse()
            .map_err(|e| parse_error(path, line, format!("year: {e}")))?;
        let v_minus: f64 = field(path, &row, 2, line)?
            .trim()
            .parse()
            .map_err(|e| parse_error(path, line, format!("v_minus: {e}")))?;
        let photon_field = field(path, &row, 3, line)?.trim();
        let mean_photon_number = if photon_field.is_empty() {
            None
        } else {
            Some(
                photon_field
                    .parse::<f64>()
                    .map_err(|e| parse_error(path, line, format!("mean_photon_number: {e}")))?,
            )
        };
        let source_note = field(path, &row, 4, line)?.to_string();
        let record = ExperimentRecord { label, year, v_minus, mean_photon_number, source_note };
        if record.validate().is_err() {
            skipped.push(SkippedRow {
                line,
                label: record.label,
                reason: format!("v_minus {v_minus} is not positive"),
            });
            continue;
        }
        records.push(record);
    }
    Ok((records, skipped))
}

/// Read a previously emitted table (the output schema) for
/// recomputation; derived columns are ignored and rebuilt.
pub fn read_fig1_csv(path: &str) -> Result<(Vec<ExperimentRecord>, Vec<SkippedRow>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{path}: {e}")))?;
    check_header(path, reader.headers().map_err(|e| CliError::Data(e.to_string()))?, &OUTPUT_HEADER)?;

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(parse_error(path, line, e));
            }
        };
        let line = record_line(&row);
        let label = field(path, &row, 0, line)?.to_string();
        let year: i32 = field(path, &row, 1, line)?
            .trim()
            .parse()
            .map_err(|e| parse_error(path, line, format!("year: {e}")))?;
        let v_minus: f64 = field(path, &row, 2, line)?
            .trim()
            .parse()
            .map_err(|e| parse_error(path, line, format!("v_minus: {e}")))?;
        let record = ExperimentRecord {
            label,
            year,
            v_minus,
            mean_photon_number: None,
            source_note: String::new(),
        };
        if record.validate().is_err() {
            skipped.push(SkippedRow {
                line,
                label: record.label,
                reason: format!("v_minus {v_minus} is not positive"),
            });
            continue;
        }
        records.push(record);
    }
    Ok((records, skipped))
}

/// Sorted, derived table for a set of records.
pub fn ingest(records: Vec<ExperimentRecord>, skipped: Vec<SkippedRow>) -> Result<IngestOutcome, CliError> {
    let mut rows = records.iter().map(fig1_row).collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.year.cmp(&b.year).then_with(|| a.label.cmp(&b.label)));
    Ok(IngestOutcome { rows, skipped })
}
