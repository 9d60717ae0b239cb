//! Output formatting: run manifests, JSON documents, and CSV files with
//! manifest sidecars. Everything written here is a pure function of the
//! command inputs, so identical invocations produce identical bytes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::errors::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance block embedded in (or written beside) every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input_paths: Vec<String>,
    pub config_echo: serde_json::Value,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        inputs: &[&Path],
        config_echo: serde_json::Value,
        seed: Option<u64>,
    ) -> Self {
        Self {
            command: command.to_string(),
            input_paths: inputs.iter().map(|p| p.display().to_string()).collect(),
            config_echo,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
        }
    }
}

#[derive(Serialize)]
struct SidecarDocument<'a> {
    schema: u32,
    manifest: &'a RunManifest,
}

/// Format with 6 significant digits, trimming trailing zeros (the CSV
/// float convention; JSON keeps full precision).
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        let sci = format!("{:.5e}", x);
        match sci.split_once('e') {
            Some((mantissa, exp)) => {
                let mantissa = if mantissa.contains('.') {
                    mantissa.trim_end_matches('0').trim_end_matches('.')
                } else {
                    mantissa
                };
                format!("{mantissa}e{exp}")
            }
            None => sci,
        }
    } else {
        let decimals = (5 - magnitude).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::data(format!("cannot serialize {}: {e}", path.display())))?;
    body.push('\n');
    std::fs::write(path, body)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

/// Write a CSV file and its `<name>.manifest.json` sidecar.
pub fn write_csv_with_manifest(
    path: &Path,
    header: &str,
    rows: &[String],
    manifest: &RunManifest,
) -> CliResult<()> {
    let mut body = String::with_capacity(rows.len() * 16 + header.len() + 1);
    body.push_str(header);
    body.push('\n');
    for row in rows {
        body.push_str(row);
        body.push('\n');
    }
    std::fs::write(path, body)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;

    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".manifest.json");
    write_json(
        Path::new(&sidecar),
        &SidecarDocument {
            schema: SCHEMA_VERSION,
            manifest,
        },
    )
}
