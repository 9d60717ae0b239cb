//! `compare`: tabulate the fitted extreme value CDF, the Normal and
//! Poisson baselines, and the empirical CDF on a common grid.

use std::path::PathBuf;

use clap::Args;
use eva_triage_core::analysis::{compare_parameterize, compare_table};
use serde_json::json;

use crate::errors::{CliError, CliResult};
use crate::input::read_value_column;
use crate::output::{fmt_sig, write_csv_with_manifest, RunManifest};

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Parent sample, typically the sub-period totals (CSV with header
    /// `value`, e.g. from `block --out-subperiods`)
    pub parent: PathBuf,
    /// Block maxima (CSV with header `value`)
    pub maxima: PathBuf,
    /// Upper end of the evaluation grid
    #[arg(long, default_value_t = 200.0)]
    pub zmax: f64,
    /// Number of grid points from 0 to zmax
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Output path for the comparison table
    #[arg(long, default_value = "compare.csv")]
    pub out: PathBuf,
}

pub fn run(args: &CompareArgs) -> CliResult<()> {
    if args.points < 1 {
        return Err(CliError::usage("--points must be >= 1"));
    }
    if args.zmax <= 0.0 || !args.zmax.is_finite() {
        return Err(CliError::usage("--zmax must be a positive finite real"));
    }
    let parent = read_value_column(&args.parent, "value")?;
    let maxima = read_value_column(&args.maxima, "value")?;

    let grid: Vec<f64> = if args.points == 1 {
        vec![0.0]
    } else {
        (0..args.points)
            .map(|i| args.zmax * i as f64 / (args.points - 1) as f64)
            .collect()
    };

    let inputs = compare_parameterize(&parent, &maxima)?;
    for w in &inputs.gev_fit.warnings {
        eprintln!("warning (MLE): {w}");
    }
    let rows = compare_table(
        &inputs.gev_fit.params,
        &inputs.normal,
        &inputs.poisson,
        &inputs.maxima_ecdf,
        &grid,
    );

    let manifest = RunManifest::new(
        "compare",
        &[&args.parent, &args.maxima],
        json!({
            "zmax": args.zmax,
            "points": args.points,
            "gev": inputs.gev_fit.params,
            "normal": { "mean": inputs.normal.mean(), "sd": inputs.normal.sd() },
            "poisson": { "rate": inputs.poisson.rate() },
        }),
        None,
    );
    let lines: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                fmt_sig(r.z),
                fmt_sig(r.ecdf),
                fmt_sig(r.gev),
                fmt_sig(r.normal),
                fmt_sig(r.poisson)
            )
        })
        .collect();
    write_csv_with_manifest(&args.out, "z,ecdf,gev,normal,poisson", &lines, &manifest)?;
    eprintln!("wrote {} comparison rows to {}", rows.len(), args.out.display());
    Ok(())
}
