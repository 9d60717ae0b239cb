//! `block`: aggregate a day series into sub-period totals, extract block
//! maxima, and summarize both samples.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use eva_triage_core::blocking::{
    aggregate_subperiods, describe, extract_block_maxima, BlockConfig, DescriptiveStats,
    PartialPolicy,
};
use serde::Serialize;
use serde_json::json;

use crate::errors::{CliError, CliResult};
use crate::input::read_arrival_series;
use crate::output::{fmt_sig, write_csv_with_manifest, write_json, RunManifest, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartialArg {
    Promote,
    Drop,
}

impl From<PartialArg> for PartialPolicy {
    fn from(p: PartialArg) -> Self {
        match p {
            PartialArg::Promote => PartialPolicy::Promote,
            PartialArg::Drop => PartialPolicy::Drop,
        }
    }
}

#[derive(Debug, Args)]
pub struct BlockArgs {
    /// Input arrival series (CSV with header `day,count`)
    pub input: PathBuf,
    /// Days per sub-period
    #[arg(long, default_value_t = 3)]
    pub subperiod_days: usize,
    /// Sub-periods per block
    #[arg(long = "per-block", default_value_t = 4)]
    pub per_block: usize,
    /// Treatment of a trailing partial block
    #[arg(long, value_enum, default_value_t = PartialArg::Promote)]
    pub partial: PartialArg,
    /// Output path for the block maxima (CSV with header `value`)
    #[arg(long, default_value = "maxima.csv")]
    pub out_maxima: PathBuf,
    /// Output path for the descriptive statistics report
    #[arg(long, default_value = "stats.json")]
    pub out_stats: PathBuf,
    /// Also write the sub-period totals (CSV with header `value`)
    #[arg(long)]
    pub out_subperiods: Option<PathBuf>,
}

#[derive(Serialize)]
struct StatsDocument {
    schema: u32,
    manifest: RunManifest,
    n_days: usize,
    dropped_tail_days: usize,
    n_subperiods: usize,
    n_blocks: usize,
    parent: DescriptiveStats,
    block_maxima: DescriptiveStats,
}

pub fn run(args: &BlockArgs) -> CliResult<()> {
    if args.subperiod_days < 1 || args.per_block < 1 {
        return Err(CliError::usage(
            "--subperiod-days and --per-block must be >= 1",
        ));
    }
    let cfg = BlockConfig::new(args.subperiod_days, args.per_block, args.partial.into())?;
    let series = read_arrival_series(&args.input)?;

    let agg = aggregate_subperiods(&series, &cfg);
    if agg.dropped_tail_days > 0 {
        eprintln!(
            "warning: dropped a trailing partial sub-period of {} day(s)",
            agg.dropped_tail_days
        );
    }
    let maxima = extract_block_maxima(&agg.values, &cfg)?;
    let parent_stats = describe(&agg.values)?;
    let maxima_stats = describe(maxima.maxima())?;

    let manifest = RunManifest::new(
        "block",
        &[&args.input],
        json!({
            "subperiod_days": args.subperiod_days,
            "per_block": args.per_block,
            "partial": match args.partial {
                PartialArg::Promote => "promote",
                PartialArg::Drop => "drop",
            },
        }),
        None,
    );

    let rows: Vec<String> = maxima.maxima().iter().map(|&v| fmt_sig(v)).collect();
    write_csv_with_manifest(&args.out_maxima, "value", &rows, &manifest)?;

    if let Some(path) = &args.out_subperiods {
        let rows: Vec<String> = agg.values.iter().map(|&v| fmt_sig(v)).collect();
        write_csv_with_manifest(path, "value", &rows, &manifest)?;
    }

    write_json(
        &args.out_stats,
        &StatsDocument {
            schema: SCHEMA_VERSION,
            manifest,
            n_days: series.len(),
            dropped_tail_days: agg.dropped_tail_days,
            n_subperiods: maxima.n_subperiods(),
            n_blocks: maxima.n_blocks(),
            parent: parent_stats,
            block_maxima: maxima_stats,
        },
    )?;

    eprintln!(
        "wrote {} block maxima from {} sub-periods ({} days) to {}",
        maxima.n_blocks(),
        maxima.n_subperiods(),
        series.len(),
        args.out_maxima.display()
    );
    Ok(())
}
