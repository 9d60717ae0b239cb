//! `simulate`: run the triage simulator from a TOML scenario file, for a
//! single policy or the whole policy set under common random numbers.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use eva_triage_core::distributions::GevParams;
use eva_triage_core::triage_sim::{
    evaluate_policies, run_simulation, ArrivalAttributes, Policy, PolicySummary, SimConfig,
    SimReport,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::errors::{CliError, CliResult};
use crate::output::{write_csv_with_manifest, write_json, RunManifest, SCHEMA_VERSION};

pub const SEED_ENV_VAR: &str = "EVA_TRIAGE_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Traditional,
    Larrey,
    Wilson,
    Fcfs,
    Gggn,
    Lsft,
    Mfs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file (TOML)
    pub config: PathBuf,
    /// Override the policy named in the scenario file
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    /// Replications per policy (replication seeds are shared across
    /// policies)
    #[arg(long, default_value_t = 1)]
    pub replications: usize,
    /// Override the seed (wins over EVA_TRIAGE_SEED and the scenario file)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path for the report
    #[arg(long, default_value = "report.json")]
    pub out: PathBuf,
    /// Also write the per-day trace as CSV (single-run mode only)
    #[arg(long, conflicts_with = "all_policies")]
    pub trace: Option<PathBuf>,
    /// Evaluate all seven policies on common random numbers
    #[arg(long)]
    pub all_policies: bool,
}

fn default_horizon() -> u32 {
    100
}
fn default_capacity() -> f64 {
    10.0
}
fn default_baseline() -> f64 {
    4.0
}
fn default_shock_prob() -> f64 {
    0.05
}
fn default_policy() -> String {
    "fcfs".to_string()
}
fn default_trigger_multiple() -> f64 {
    3.0
}
fn default_accurate_cost() -> f64 {
    0.2
}
fn default_triage_cost() -> f64 {
    0.05
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShockLawFile {
    location: f64,
    scale: f64,
    shape: f64,
}

impl Default for ShockLawFile {
    fn default() -> Self {
        Self {
            location: 8.3540,
            scale: 4.2832,
            shape: 0.8903,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributesFile {
    fixed_quality: Option<f64>,
    defect_mean: Option<f64>,
    proc_time_base: Option<f64>,
    proc_time_per_defect: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default = "default_horizon")]
    horizon_days: u32,
    #[serde(default = "default_capacity")]
    capacity_per_day: f64,
    #[serde(default = "default_baseline")]
    baseline_rate: f64,
    #[serde(default = "default_shock_prob")]
    shock_prob: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_policy")]
    policy: String,
    #[serde(default)]
    wilson_threshold: Option<f64>,
    #[serde(default = "default_trigger_multiple")]
    triage_trigger_multiple: f64,
    #[serde(default)]
    triage_trigger_return_period: Option<f64>,
    #[serde(default = "default_accurate_cost")]
    accurate_sort_cost: f64,
    #[serde(default = "default_triage_cost")]
    triage_sort_cost: f64,
    #[serde(default)]
    assessment_noise: f64,
    #[serde(default)]
    shock_law: ShockLawFile,
    #[serde(default)]
    attributes: AttributesFile,
}

fn read_scenario(path: &Path) -> CliResult<ScenarioFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::data(format!("{}: invalid scenario file: {e}", path.display())))
}

fn resolve_policy(
    flag: Option<PolicyArg>,
    file: &ScenarioFile,
    path: &Path,
) -> CliResult<Policy> {
    let wilson = |threshold: Option<f64>| {
        threshold
            .map(|t| Policy::Wilson { threshold: t })
            .ok_or_else(|| {
                CliError::data(format!(
                    "{}: policy 'wilson' requires the 'wilson_threshold' field",
                    path.display()
                ))
            })
    };
    if let Some(arg) = flag {
        return Ok(match arg {
            PolicyArg::Traditional => Policy::Traditional,
            PolicyArg::Larrey => Policy::Larrey,
            PolicyArg::Wilson => wilson(file.wilson_threshold)?,
            PolicyArg::Fcfs => Policy::Fcfs,
            PolicyArg::Gggn => Policy::Gggn,
            PolicyArg::Lsft => Policy::Lsft,
            PolicyArg::Mfs => Policy::Mfs,
        });
    }
    match file.policy.to_ascii_lowercase().as_str() {
        "traditional" => Ok(Policy::Traditional),
        "larrey" => Ok(Policy::Larrey),
        "wilson" => wilson(file.wilson_threshold),
        "fcfs" => Ok(Policy::Fcfs),
        "gggn" => Ok(Policy::Gggn),
        "lsft" => Ok(Policy::Lsft),
        "mfs" => Ok(Policy::Mfs),
        other => Err(CliError::data(format!(
            "{}: unknown policy '{other}' (expected traditional, larrey, \
             wilson, fcfs, gggn, lsft, or mfs)",
            path.display()
        ))),
    }
}

fn resolve_seed(flag: Option<u64>, file_seed: u64) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV_VAR) {
        Ok(text) => text.parse().map_err(|_| {
            CliError::usage(format!(
                "{SEED_ENV_VAR} must be an unsigned integer, found '{text}'"
            ))
        }),
        Err(_) => Ok(file_seed),
    }
}

#[derive(Serialize)]
struct SingleRunDocument {
    schema: u32,
    manifest: RunManifest,
    policy: String,
    report: SimReport,
}

#[derive(Serialize)]
struct ComparisonDocument {
    schema: u32,
    manifest: RunManifest,
    replications: usize,
    policies: Vec<PolicySummary>,
}

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    if args.replications < 1 {
        return Err(CliError::usage("--replications must be >= 1"));
    }
    if args.trace.is_some() && args.replications > 1 {
        return Err(CliError::usage(
            "--trace applies to a single run; drop --replications",
        ));
    }
    let file = read_scenario(&args.config)?;
    let policy = resolve_policy(args.policy, &file, &args.config)?;
    let seed = resolve_seed(args.seed, file.seed)?;

    let shock_law = GevParams::new(
        file.shock_law.location,
        file.shock_law.scale,
        file.shock_law.shape,
    )
    .map_err(|e| CliError::data(format!("{}: shock_law: {e}", args.config.display())))?;

    let defaults = ArrivalAttributes::default();
    let cfg = SimConfig {
        horizon_days: file.horizon_days,
        capacity_per_day: file.capacity_per_day,
        baseline_rate: file.baseline_rate,
        shock_prob: file.shock_prob,
        shock_law,
        policy,
        triage_trigger_multiple: file.triage_trigger_multiple,
        triage_trigger_return_period: file.triage_trigger_return_period,
        accurate_sort_cost: file.accurate_sort_cost,
        triage_sort_cost: file.triage_sort_cost,
        assessment_noise: file.assessment_noise,
        attributes: ArrivalAttributes {
            fixed_quality: file.attributes.fixed_quality,
            defect_mean: file.attributes.defect_mean.unwrap_or(defaults.defect_mean),
            proc_time_base: file
                .attributes
                .proc_time_base
                .unwrap_or(defaults.proc_time_base),
            proc_time_per_defect: file
                .attributes
                .proc_time_per_defect
                .unwrap_or(defaults.proc_time_per_defect),
        },
        seed,
    };
    cfg.validate()
        .map_err(|e| CliError::data(format!("{}: {e}", args.config.display())))?;

    if args.all_policies {
        let policies = [
            Policy::Traditional,
            Policy::Larrey,
            resolve_policy(Some(PolicyArg::Wilson), &file, &args.config)?,
            Policy::Fcfs,
            Policy::Gggn,
            Policy::Lsft,
            Policy::Mfs,
        ];
        let summaries = evaluate_policies(&cfg, &policies, args.replications)?;
        let manifest = RunManifest::new(
            "simulate",
            &[&args.config],
            json!({
                "config": cfg,
                "replications": args.replications,
                "all_policies": true,
            }),
            Some(seed),
        );
        write_json(
            &args.out,
            &ComparisonDocument {
                schema: SCHEMA_VERSION,
                manifest,
                replications: args.replications,
                policies: summaries,
            },
        )?;
        eprintln!(
            "wrote policy comparison ({} replications) to {}",
            args.replications,
            args.out.display()
        );
        return Ok(());
    }

    if args.replications > 1 {
        let summaries = evaluate_policies(&cfg, &[policy], args.replications)?;
        let manifest = RunManifest::new(
            "simulate",
            &[&args.config],
            json!({
                "config": cfg,
                "replications": args.replications,
                "all_policies": false,
            }),
            Some(seed),
        );
        write_json(
            &args.out,
            &ComparisonDocument {
                schema: SCHEMA_VERSION,
                manifest,
                replications: args.replications,
                policies: summaries,
            },
        )?;
        eprintln!(
            "wrote {} replications of {} to {}",
            args.replications,
            policy.name(),
            args.out.display()
        );
        return Ok(());
    }

    let report = run_simulation(&cfg)?;
    let manifest = RunManifest::new(
        "simulate",
        &[&args.config],
        json!({
            "config": cfg,
            "replications": 1,
            "all_policies": false,
        }),
        Some(seed),
    );
    if let Some(trace_path) = &args.trace {
        let rows: Vec<String> = report
            .trace
            .iter()
            .map(|t| format!("{},{},{},{}", t.day, t.arrivals, t.backlog, t.processed))
            .collect();
        write_csv_with_manifest(trace_path, "day,arrivals,backlog,processed", &rows, &manifest)?;
    }
    let processed = report.processed;
    let backlog = report.final_backlog;
    write_json(
        &args.out,
        &SingleRunDocument {
            schema: SCHEMA_VERSION,
            manifest,
            policy: policy.name().to_string(),
            report,
        },
    )?;
    eprintln!(
        "simulated {} days under {}: processed {}, final backlog {} -> {}",
        cfg.horizon_days,
        policy.name(),
        processed,
        backlog,
        args.out.display()
    );
    Ok(())
}
