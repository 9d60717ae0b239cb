//! Input parsing: the `day,count` arrival CSV, single-column value CSVs,
//! and fit documents written by the `fit` command.
//!
//! CSV conventions: UTF-8, `#` starts a comment line, blank lines are
//! skipped, and parse errors name the first offending line.

use std::path::Path;

use eva_triage_core::blocking::ArrivalSeries;
use eva_triage_core::distributions::GevParams;
use eva_triage_core::estimation::{FitMethod, FitResult};
use serde::{Deserialize, Serialize};

use crate::errors::{CliError, CliResult};
use crate::output::RunManifest;

fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))
}

// Content lines with their 1-based line numbers; comments and blanks
// skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Read a `day,count` series: header required, days strictly increasing
/// positive integers, counts non-negative integers.
pub fn read_arrival_series(path: &Path) -> CliResult<ArrivalSeries> {
    let text = read_to_string(path)?;
    let name = path.display();
    let mut lines = content_lines(&text);

    match lines.next() {
        Some((_, header)) if header.eq_ignore_ascii_case("day,count") => {}
        Some((n, header)) => {
            return Err(CliError::data(format!(
                "{name}: line {n}: expected header 'day,count', found '{header}'"
            )));
        }
        None => {
            return Err(CliError::data(format!(
                "{name}: line 1: missing header 'day,count' (file has no content)"
            )));
        }
    }

    let mut counts = Vec::new();
    let mut prev_day: Option<u64> = None;
    let mut last_line = 1;
    for (n, line) in lines {
        last_line = n;
        let mut fields = line.split(',');
        let (day_str, count_str) = match (fields.next(), fields.next(), fields.next()) {
            (Some(d), Some(c), None) => (d.trim(), c.trim()),
            _ => {
                return Err(CliError::data(format!(
                    "{name}: line {n}: expected exactly two fields 'day,count', found '{line}'"
                )));
            }
        };
        let day: u64 = day_str.parse().map_err(|_| {
            CliError::data(format!(
                "{name}: line {n}: day '{day_str}' is not a positive integer"
            ))
        })?;
        if day == 0 {
            return Err(CliError::data(format!(
                "{name}: line {n}: days are 1-based; found day 0"
            )));
        }
        if let Some(prev) = prev_day {
            if day <= prev {
                return Err(CliError::data(format!(
                    "{name}: line {n}: day {day} does not increase over previous day {prev}"
                )));
            }
        }
        prev_day = Some(day);
        let count: u64 = count_str.parse().map_err(|_| {
            CliError::data(format!(
                "{name}: line {n}: count '{count_str}' is not a non-negative integer"
            ))
        })?;
        counts.push(count);
    }

    if counts.is_empty() {
        return Err(CliError::data(format!(
            "{name}: line {last_line}: no data rows after the header"
        )));
    }
    ArrivalSeries::new(counts, Some(path.display().to_string())).map_err(CliError::from)
}

/// Read a single-column CSV of reals under the given header.
pub fn read_value_column(path: &Path, column: &str) -> CliResult<Vec<f64>> {
    let text = read_to_string(path)?;
    let name = path.display();
    let mut lines = content_lines(&text);

    match lines.next() {
        Some((_, header)) if header.eq_ignore_ascii_case(column) => {}
        Some((n, header)) => {
            return Err(CliError::data(format!(
                "{name}: line {n}: expected header '{column}', found '{header}'"
            )));
        }
        None => {
            return Err(CliError::data(format!(
                "{name}: line 1: missing header '{column}' (file has no content)"
            )));
        }
    }

    let mut values = Vec::new();
    for (n, line) in lines {
        let v: f64 = line.parse().map_err(|_| {
            CliError::data(format!("{name}: line {n}: '{line}' is not a number"))
        })?;
        if !v.is_finite() {
            return Err(CliError::data(format!(
                "{name}: line {n}: values must be finite, found {v}"
            )));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::data(format!(
            "{name}: no data rows after the '{column}' header"
        )));
    }
    Ok(values)
}

/// On-disk shape of `fit.json`: one entry per estimation method actually
/// run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitDocument {
    pub schema: u32,
    pub manifest: RunManifest,
    #[serde(rename = "MLE", skip_serializing_if = "Option::is_none")]
    pub mle: Option<FitResult>,
    #[serde(rename = "PWM", skip_serializing_if = "Option::is_none")]
    pub pwm: Option<FitResult>,
}

pub fn read_fit_document(path: &Path) -> CliResult<FitDocument> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::data(format!("{}: not a valid fit document: {e}", path.display())))
}

/// Pick the parameter set to analyse: the MLE entry when present,
/// otherwise PWM.
pub fn select_params(doc: &FitDocument, path: &Path) -> CliResult<(GevParams, FitMethod)> {
    if let Some(mle) = &doc.mle {
        Ok((mle.params, FitMethod::Mle))
    } else if let Some(pwm) = &doc.pwm {
        Ok((pwm.params, FitMethod::Pwm))
    } else {
        Err(CliError::data(format!(
            "{}: fit document contains neither an MLE nor a PWM entry",
            path.display()
        )))
    }
}
