//! `gof`: Pearson chi-squared goodness of fit of block maxima against a
//! fitted extreme value law on user-chosen bins.

use std::path::PathBuf;

use clap::Args;
use eva_triage_core::analysis::{gof_against_gev, GofReport};
use serde::Serialize;
use serde_json::json;

use crate::errors::{CliError, CliResult};
use crate::input::{read_fit_document, read_value_column, select_params};
use crate::output::{write_json, RunManifest, SCHEMA_VERSION};

/// Refusal text for cumulative range specs; tested verbatim.
pub const CUMULATIVE_EDGES_REFUSAL: &str =
    "cumulative range edges detected: ranges sharing a lower bound (e.g. \
     0-25,0-50,...) overlap, so the same observation would be counted in \
     several bins and the chi-squared statistic would be meaningless. \
     Difference the cumulative table into disjoint bins first — pass the \
     upper edges only (e.g. --edges 25,50,...); the final bin is open-ended. \
     Note that a p-value quoted against a cumulative table cannot be \
     recomputed from these bins without the underlying observations.";

#[derive(Debug, Args)]
pub struct GofArgs {
    /// Block maxima (CSV with header `value`)
    pub maxima: PathBuf,
    /// Fit document produced by `fit`
    pub fit: PathBuf,
    /// Comma-separated ascending interior bin edges, e.g. 25,50,75
    #[arg(long)]
    pub edges: String,
    /// Number of fitted parameters subtracted from the degrees of freedom
    #[arg(long = "dof-adjust", default_value_t = 3)]
    pub dof_adjust: usize,
    /// Output path for the test report
    #[arg(long, default_value = "gof.json")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct GofDocument {
    schema: u32,
    manifest: RunManifest,
    report: GofReport,
}

/// Parse the `--edges` spec. Plain ascending numbers are interior edges.
/// Range tokens (`lo-hi`) are accepted only when contiguous and disjoint;
/// ranges sharing a lower bound are the cumulative layout and are refused.
pub fn parse_edges(spec: &str) -> CliResult<Vec<f64>> {
    let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err(CliError::data(format!("empty token in --edges '{spec}'")));
    }

    let is_range = |t: &str| t.len() > 1 && t[1..].contains('-');
    if tokens.iter().any(|t| is_range(t)) {
        let mut ranges = Vec::with_capacity(tokens.len());
        for t in &tokens {
            let (lo, hi) = t
                .split_once('-')
                .ok_or_else(|| CliError::data(format!("cannot parse edge range '{t}'")))?;
            let lo: f64 = lo.trim().parse().map_err(|_| {
                CliError::data(format!("cannot parse lower bound of edge range '{t}'"))
            })?;
            let hi: f64 = hi.trim().parse().map_err(|_| {
                CliError::data(format!("cannot parse upper bound of edge range '{t}'"))
            })?;
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(CliError::data(format!(
                    "edge range '{t}' must be finite with lower bound below upper"
                )));
            }
            ranges.push((lo, hi));
        }
        let overlapping = ranges
            .windows(2)
            .any(|w| w[1].0 < w[0].1 || w[1].1 <= w[0].1);
        if overlapping {
            return Err(CliError::data(CUMULATIVE_EDGES_REFUSAL));
        }
        return Ok(ranges.iter().map(|&(_, hi)| hi).collect());
    }

    let mut edges = Vec::with_capacity(tokens.len());
    for t in &tokens {
        let e: f64 = t
            .parse()
            .map_err(|_| CliError::data(format!("cannot parse edge '{t}'")))?;
        if !e.is_finite() {
            return Err(CliError::data(format!("edge '{t}' must be finite")));
        }
        edges.push(e);
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::data(
            "bin edges must be strictly ascending".to_string(),
        ));
    }
    Ok(edges)
}

pub fn run(args: &GofArgs) -> CliResult<()> {
    let edges = parse_edges(&args.edges)?;
    let maxima = read_value_column(&args.maxima, "value")?;
    let doc = read_fit_document(&args.fit)?;
    let (params, method) = select_params(&doc, &args.fit)?;

    let report = gof_against_gev(&maxima, &edges, &params, args.dof_adjust)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let manifest = RunManifest::new(
        "gof",
        &[&args.maxima, &args.fit],
        json!({
            "edges": edges,
            "dof_adjust": args.dof_adjust,
            "method": method.to_string(),
            "params": params,
        }),
        None,
    );
    write_json(
        &args.out,
        &GofDocument {
            schema: SCHEMA_VERSION,
            manifest,
            report,
        },
    )?;
    eprintln!("wrote goodness-of-fit report to {}", args.out.display());
    Ok(())
}
