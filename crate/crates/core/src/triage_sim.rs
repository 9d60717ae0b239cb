//! Seeded day-by-day simulation of a capacity-constrained repair shop
//! receiving baseline plus extreme-value shock arrivals, with seven
//! prioritized sorting policies.
//!
//! Each operational day: arrivals are generated, triage mode is decided,
//! sorting consumes capacity per newly arrived core (the triage rate is
//! cheaper than the accurate rate), and the remaining budget processes the
//! policy-ordered queue greedily. Everything derives from the config seed:
//! the arrival stream is a pure function of `(seed, day)`, so two runs that
//! differ only in policy face the identical stream (common random numbers).

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::distributions::GevParams;
use crate::error::{Error, Result};
use crate::rng;

/// Arrivals per day saturate here; a heavy-tailed shock draw beyond this is
/// clamped. Against a realistic daily capacity the backlog dynamics are
/// indistinguishable, and it bounds memory on astronomically rare draws.
pub const MAX_ARRIVALS_PER_DAY: u64 = 1 << 20;

/// A returned unit awaiting remanufacture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Core {
    pub id: u64,
    pub arrival_day: u32,
    /// Remanufacturability likelihood in [0, 1].
    pub quality: f64,
    pub defects: u32,
    /// Market-pull urgency in [0, 1].
    pub demand: f64,
    /// Capacity units needed to remanufacture; > 0.
    pub proc_time: f64,
}

/// The seven sorting policies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Policy {
    /// No prioritized sortation; the queue stays in arrival order.
    Traditional,
    /// Most-in-demand cores first.
    Larrey,
    /// Highest remanufacturability first; cores whose quality falls below
    /// the threshold are discarded outright.
    Wilson { threshold: f64 },
    /// First come, first served.
    Fcfs,
    /// Greatest number served: shortest processing time first, skipping
    /// cores that do not fit the remaining daily budget.
    Gggn,
    /// Fewest defects first.
    Lsft,
    /// Shortest processing time first with demand as tie-break; skips like
    /// Gggn.
    Mfs,
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::Traditional => "Traditional",
            Policy::Larrey => "Larrey",
            Policy::Wilson { .. } => "Wilson",
            Policy::Fcfs => "FCFS",
            Policy::Gggn => "GGGN",
            Policy::Lsft => "LSFT",
            Policy::Mfs => "MFS",
        }
    }

    // Count/time-seeking policies may pass over a core that does not fit
    // the remaining budget; the rest block on the head of the queue.
    fn skips_oversized(&self) -> bool {
        matches!(self, Policy::Gggn | Policy::Mfs)
    }
}

/// Per-core attribute model for generated arrivals. Defaults: quality
/// uniform on [0, 1] (or a fixed override), defects Poisson with mean 2,
/// demand uniform on [0, 1], processing time `0.5 + 0.25 * defects`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrivalAttributes {
    pub fixed_quality: Option<f64>,
    pub defect_mean: f64,
    pub proc_time_base: f64,
    pub proc_time_per_defect: f64,
}

impl Default for ArrivalAttributes {
    fn default() -> Self {
        Self {
            fixed_quality: None,
            defect_mean: 2.0,
            proc_time_base: 0.5,
            proc_time_per_defect: 0.25,
        }
    }
}

/// Scenario description for one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub horizon_days: u32,
    /// Daily processing budget in capacity units.
    pub capacity_per_day: f64,
    /// Poisson mean of ordinary arrivals per day.
    pub baseline_rate: f64,
    /// Daily probability of an extreme shock on top of the baseline.
    pub shock_prob: f64,
    /// Law of the shock magnitude; a draw is rounded half-up, floored at 0.
    pub shock_law: GevParams,
    pub policy: Policy,
    /// Triage mode engages when backlog plus today's arrivals exceed this
    /// multiple of the daily capacity.
    pub triage_trigger_multiple: f64,
    /// Alternative trigger: triage mode engages when today's arrival count
    /// alone exceeds the shock law's return level at this period. When set,
    /// it replaces the capacity-multiple rule.
    pub triage_trigger_return_period: Option<f64>,
    /// Capacity units consumed per newly arrived core under accurate
    /// sorting.
    pub accurate_sort_cost: f64,
    /// Capacity units per core under triage sorting; at most the accurate
    /// cost.
    pub triage_sort_cost: f64,
    /// Standard deviation of the perceived-quality perturbation; 0 models
    /// error-proof inspection.
    pub assessment_noise: f64,
    pub attributes: ArrivalAttributes,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon_days < 1 {
            return Err(Error::InvalidConfig("horizon_days must be >= 1".into()));
        }
        if self.capacity_per_day <= 0.0 || !self.capacity_per_day.is_finite() {
            return Err(Error::InvalidConfig(
                "capacity_per_day must be a positive finite real".into(),
            ));
        }
        if self.baseline_rate < 0.0 || !self.baseline_rate.is_finite() {
            return Err(Error::InvalidConfig(
                "baseline_rate must be a non-negative finite real".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.shock_prob) {
            return Err(Error::InvalidConfig(
                "shock_prob must lie in [0, 1]".into(),
            ));
        }
        if let Policy::Wilson { threshold } = self.policy {
            if !(0.0..=1.0).contains(&threshold) {
                return Err(Error::InvalidConfig(
                    "wilson_threshold must lie in [0, 1]".into(),
                ));
            }
        }
        if self.triage_trigger_multiple <= 0.0 || !self.triage_trigger_multiple.is_finite() {
            return Err(Error::InvalidConfig(
                "triage_trigger_multiple must be a positive finite real".into(),
            ));
        }
        if let Some(t) = self.triage_trigger_return_period {
            if t <= 1.0 || !t.is_finite() {
                return Err(Error::InvalidConfig(
                    "triage_trigger_return_period must be a finite real > 1".into(),
                ));
            }
        }
        if self.accurate_sort_cost < 0.0
            || !self.accurate_sort_cost.is_finite()
            || self.triage_sort_cost < 0.0
            || !self.triage_sort_cost.is_finite()
        {
            return Err(Error::InvalidConfig(
                "sort costs must be non-negative finite reals".into(),
            ));
        }
        if self.triage_sort_cost > self.accurate_sort_cost {
            return Err(Error::InvalidConfig(
                "triage_sort_cost must not exceed accurate_sort_cost".into(),
            ));
        }
        if self.assessment_noise < 0.0 || !self.assessment_noise.is_finite() {
            return Err(Error::InvalidConfig(
                "assessment_noise must be a non-negative finite real".into(),
            ));
        }
        let attrs = &self.attributes;
        if let Some(q) = attrs.fixed_quality {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidConfig(
                    "attributes.fixed_quality must lie in [0, 1]".into(),
                ));
            }
        }
        if attrs.defect_mean < 0.0 || !attrs.defect_mean.is_finite() {
            return Err(Error::InvalidConfig(
                "attributes.defect_mean must be a non-negative finite real".into(),
            ));
        }
        if attrs.proc_time_base <= 0.0
            || !attrs.proc_time_base.is_finite()
            || attrs.proc_time_per_defect < 0.0
            || !attrs.proc_time_per_defect.is_finite()
        {
            return Err(Error::InvalidConfig(
                "attributes.proc_time_base must be > 0 and \
                 attributes.proc_time_per_defect >= 0"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// One day of the simulation trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DayTrace {
    pub day: u32,
    pub arrivals: u32,
    /// Queue length at the end of the day.
    pub backlog: u32,
    pub processed: u32,
}

/// Outcome metrics of a run. Conservation holds by construction:
/// `processed + discarded + final_backlog == total_arrivals`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub processed: u64,
    pub discarded: u64,
    pub mean_backlog: f64,
    pub max_backlog: u64,
    pub mean_flow_time_days: f64,
    pub demand_weighted_throughput: f64,
    pub days_in_triage_mode: u32,
    pub total_arrivals: u64,
    pub final_backlog: u64,
    pub trace: Vec<DayTrace>,
}

fn poisson_draw(rng: &mut impl Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("validated positive mean");
    dist.sample(rng) as u64
}

/// Generate the cores arriving on `day`. The count is a Poisson baseline
/// draw plus, with probability `shock_prob`, a rounded draw from the shock
/// law; attributes follow [`ArrivalAttributes`]. Fully determined by
/// `(cfg.seed, day)` — the policy never touches this stream.
pub fn generate_arrivals(cfg: &SimConfig, day: u32) -> Vec<Core> {
    let mut rng = rng::stream(cfg.seed, rng::TAG_ARRIVALS, day as u64);

    let baseline = poisson_draw(&mut rng, cfg.baseline_rate);
    let shock = {
        let u = rng::open_unit(&mut rng);
        if u < cfg.shock_prob {
            let draw = cfg
                .shock_law
                .quantile(rng::open_unit(&mut rng))
                .expect("open-interval uniform is in (0,1)");
            draw.max(0.0).round() as u64
        } else {
            0
        }
    };
    let count = (baseline + shock).min(MAX_ARRIVALS_PER_DAY);

    let attrs = &cfg.attributes;
    (0..count)
        .map(|i| {
            let quality = match attrs.fixed_quality {
                Some(q) => q,
                None => rng.random::<f64>(),
            };
            let defects = poisson_draw(&mut rng, attrs.defect_mean) as u32;
            let demand = rng.random::<f64>();
            Core {
                id: ((day as u64) << 32) | i,
                arrival_day: day,
                quality,
                defects,
                demand,
                proc_time: attrs.proc_time_base + attrs.proc_time_per_defect * defects as f64,
            }
        })
        .collect()
}

/// Quality as the sorter sees it: the true value under error-proof
/// inspection (`assessment_noise == 0`, bitwise identical), otherwise the
/// true value plus seeded Gaussian noise, clipped to [0, 1]. Deterministic
/// per `(cfg.seed, core.id)`.
pub fn perceived_quality(cfg: &SimConfig, core: &Core) -> f64 {
    if cfg.assessment_noise == 0.0 {
        return core.quality;
    }
    let mut rng = rng::stream(cfg.seed, rng::TAG_ASSESSMENT_NOISE, core.id);
    let noise: f64 = StandardNormal.sample(&mut rng);
    (core.quality + cfg.assessment_noise * noise).clamp(0.0, 1.0)
}

/// Order the queue for processing under `policy`. Returns the ordered keep
/// list and, for Wilson, the cores discarded for quality below the
/// threshold (empty for every other policy). Ties break on core id, so the
/// ordering is a deterministic function of the queue contents.
pub fn order_queue(policy: &Policy, queue: &[Core], today: u32) -> (Vec<Core>, Vec<Core>) {
    debug_assert!(queue.iter().all(|c| c.arrival_day <= today));
    let mut kept: Vec<Core> = queue.to_vec();
    let mut discarded = Vec::new();
    match *policy {
        Policy::Traditional => {}
        Policy::Fcfs => {
            kept.sort_by(|a, b| a.arrival_day.cmp(&b.arrival_day).then(a.id.cmp(&b.id)));
        }
        Policy::Larrey => {
            kept.sort_by(|a, b| b.demand.total_cmp(&a.demand).then(a.id.cmp(&b.id)));
        }
        Policy::Wilson { threshold } => {
            discarded = kept.iter().copied().filter(|c| c.quality < threshold).collect();
            kept.retain(|c| c.quality >= threshold);
            kept.sort_by(|a, b| b.quality.total_cmp(&a.quality).then(a.id.cmp(&b.id)));
        }
        Policy::Gggn => {
            kept.sort_by(|a, b| a.proc_time.total_cmp(&b.proc_time).then(a.id.cmp(&b.id)));
        }
        Policy::Lsft => {
            kept.sort_by(|a, b| a.defects.cmp(&b.defects).then(a.id.cmp(&b.id)));
        }
        Policy::Mfs => {
            kept.sort_by(|a, b| {
                a.proc_time
                    .total_cmp(&b.proc_time)
                    .then(b.demand.total_cmp(&a.demand))
                    .then(a.id.cmp(&b.id))
            });
        }
    }
    (kept, discarded)
}

struct Slot {
    core: Core,
    perceived_quality: f64,
}

/// Run the simulation with the configured arrival generator.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimReport> {
    run_simulation_with(cfg, |day| generate_arrivals(cfg, day))
}

/// Run the simulation against a custom arrival stream (e.g. a recorded
/// series or a hand-built scenario); `arrivals_for` is called once per day
/// in order.
pub fn run_simulation_with<F>(cfg: &SimConfig, mut arrivals_for: F) -> Result<SimReport>
where
    F: FnMut(u32) -> Vec<Core>,
{
    cfg.validate()?;

    let trigger_level = match cfg.triage_trigger_return_period {
        Some(t) => Some(cfg.shock_law.quantile(1.0 - 1.0 / t)?),
        None => None,
    };

    let mut queue: Vec<Slot> = Vec::new();
    let mut trace = Vec::with_capacity(cfg.horizon_days as usize);
    let mut total_arrivals = 0u64;
    let mut processed = 0u64;
    let mut discarded = 0u64;
    let mut days_in_triage_mode = 0u32;
    let mut backlog_sum = 0u64;
    let mut max_backlog = 0u64;
    let mut flow_time_sum = 0.0f64;
    let mut demand_sum = 0.0f64;

    for day in 1..=cfg.horizon_days {
        let arrivals = arrivals_for(day);
        let n_arrived = arrivals.len() as u64;
        total_arrivals += n_arrived;

        let triage_today = match trigger_level {
            Some(level) => n_arrived as f64 > level,
            None => {
                (queue.len() as u64 + n_arrived) as f64
                    > cfg.triage_trigger_multiple * cfg.capacity_per_day
            }
        };
        if triage_today {
            days_in_triage_mode += 1;
        }

        let sort_cost = if triage_today {
            cfg.triage_sort_cost
        } else {
            cfg.accurate_sort_cost
        };
        let mut budget = (cfg.capacity_per_day - sort_cost * n_arrived as f64).max(0.0);

        for core in arrivals {
            let perceived = perceived_quality(cfg, &core);
            queue.push(Slot {
                core,
                perceived_quality: perceived,
            });
        }

        // The policy sees the perceived quality; everything else about the
        // core is observed exactly.
        let view: Vec<Core> = queue
            .iter()
            .map(|s| Core {
                quality: s.perceived_quality,
                ..s.core
            })
            .collect();
        let (ordered, discards) = order_queue(&cfg.policy, &view, day);
        let mut by_id: HashMap<u64, Slot> =
            queue.drain(..).map(|s| (s.core.id, s)).collect();

        discarded += discards.len() as u64;
        for d in &discards {
            by_id.remove(&d.id);
        }

        let mut processed_today = 0u32;
        let mut blocked = false;
        for entry in ordered {
            let slot = by_id.remove(&entry.id).expect("ordered core is in queue");
            if !blocked && slot.core.proc_time <= budget {
                budget -= slot.core.proc_time;
                processed += 1;
                processed_today += 1;
                flow_time_sum += (day - slot.core.arrival_day) as f64;
                demand_sum += slot.core.demand;
            } else {
                if !cfg.policy.skips_oversized() {
                    blocked = true;
                }
                queue.push(slot);
            }
        }
        debug_assert!(by_id.is_empty());

        let backlog = queue.len() as u64;
        backlog_sum += backlog;
        max_backlog = max_backlog.max(backlog);
        trace.push(DayTrace {
            day,
            arrivals: n_arrived as u32,
            backlog: backlog as u32,
            processed: processed_today,
        });
    }

    let final_backlog = queue.len() as u64;
    debug_assert_eq!(processed + discarded + final_backlog, total_arrivals);

    Ok(SimReport {
        processed,
        discarded,
        mean_backlog: backlog_sum as f64 / cfg.horizon_days as f64,
        max_backlog,
        mean_flow_time_days: if processed > 0 {
            flow_time_sum / processed as f64
        } else {
            0.0
        },
        demand_weighted_throughput: demand_sum,
        days_in_triage_mode,
        total_arrivals,
        final_backlog,
        trace,
    })
}

/// Mean and sample standard deviation of one metric across replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub sd: f64,
}

impl MetricSummary {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let sd = if samples.len() < 2 {
            0.0
        } else {
            (samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, sd }
    }
}

/// Replication summary of every report metric for one policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicySummary {
    pub policy: String,
    pub replications: usize,
    pub processed: MetricSummary,
    pub discarded: MetricSummary,
    pub mean_backlog: MetricSummary,
    pub max_backlog: MetricSummary,
    pub mean_flow_time_days: MetricSummary,
    pub demand_weighted_throughput: MetricSummary,
    pub days_in_triage_mode: MetricSummary,
}

/// Run every policy against the same replicated arrival streams and
/// summarize each metric as mean and standard deviation. Replication `r`
/// re-seeds arrivals identically for every policy, so differences in the
/// table reflect policy alone.
pub fn evaluate_policies(
    cfg: &SimConfig,
    policies: &[Policy],
    replications: usize,
) -> Result<Vec<PolicySummary>> {
    if replications < 1 {
        return Err(Error::InvalidConfig("replications must be >= 1".into()));
    }
    if policies.is_empty() {
        return Err(Error::InvalidConfig("no policies to evaluate".into()));
    }

    let mut summaries = Vec::with_capacity(policies.len());
    for policy in policies {
        let mut metrics: [Vec<f64>; 7] = Default::default();
        for r in 0..replications {
            let mut run_cfg = cfg.clone();
            run_cfg.policy = *policy;
            run_cfg.seed = rng::derive_seed(cfg.seed, r as u64);
            let report = run_simulation(&run_cfg)?;
            metrics[0].push(report.processed as f64);
            metrics[1].push(report.discarded as f64);
            metrics[2].push(report.mean_backlog);
            metrics[3].push(report.max_backlog as f64);
            metrics[4].push(report.mean_flow_time_days);
            metrics[5].push(report.demand_weighted_throughput);
            metrics[6].push(report.days_in_triage_mode as f64);
        }
        summaries.push(PolicySummary {
            policy: policy.name().to_string(),
            replications,
            processed: MetricSummary::from_samples(&metrics[0]),
            discarded: MetricSummary::from_samples(&metrics[1]),
            mean_backlog: MetricSummary::from_samples(&metrics[2]),
            max_backlog: MetricSummary::from_samples(&metrics[3]),
            mean_flow_time_days: MetricSummary::from_samples(&metrics[4]),
            demand_weighted_throughput: MetricSummary::from_samples(&metrics[5]),
            days_in_triage_mode: MetricSummary::from_samples(&metrics[6]),
        });
    }
    Ok(summaries)
}
