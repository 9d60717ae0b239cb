//! `return-level`: tabulate return levels for chosen periods or the
//! default log grid.

use std::path::PathBuf;

use clap::Args;
use eva_triage_core::analysis::{default_period_grid, return_curve};
use serde_json::json;

use crate::errors::CliResult;
use crate::input::{read_fit_document, select_params};
use crate::output::{fmt_sig, write_csv_with_manifest, RunManifest};

#[derive(Debug, Args)]
pub struct ReturnLevelArgs {
    /// Fit document produced by `fit`
    pub fit: PathBuf,
    /// Comma-separated return periods (each > 1)
    #[arg(long, value_delimiter = ',', conflicts_with = "grid")]
    pub periods: Option<Vec<f64>>,
    /// Use the default log-spaced grid (1.1 to 500, 100 points)
    #[arg(long)]
    pub grid: bool,
    /// Output path for the `T,z` table
    #[arg(long, default_value = "return_levels.csv")]
    pub out: PathBuf,
}

pub fn run(args: &ReturnLevelArgs) -> CliResult<()> {
    let doc = read_fit_document(&args.fit)?;
    let (params, method) = select_params(&doc, &args.fit)?;

    let periods = match &args.periods {
        Some(list) if !list.is_empty() => list.clone(),
        _ => default_period_grid(),
    };
    let curve = return_curve(&params, &periods)?;

    let manifest = RunManifest::new(
        "return-level",
        &[&args.fit],
        json!({
            "method": method.to_string(),
            "params": params,
            "periods": periods,
        }),
        None,
    );
    let rows: Vec<String> = curve
        .iter()
        .map(|p| format!("{},{}", fmt_sig(p.period), fmt_sig(p.level)))
        .collect();
    write_csv_with_manifest(&args.out, "T,z", &rows, &manifest)?;
    eprintln!(
        "wrote {} return levels ({} parameters) to {}",
        curve.len(),
        method,
        args.out.display()
    );
    Ok(())
}
