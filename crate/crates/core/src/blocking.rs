//! Sub-period aggregation, block partitioning, block-maxima extraction,
//! and descriptive statistics for day-indexed arrival counts.
//!
//! A day series is first reduced to consecutive sub-period totals (the sum
//! of each window of `subperiod_days` daily counts), then grouped into
//! blocks of `subperiods_per_block` totals whose maxima form the sample the
//! extreme value law is fitted to. Whether the sub-period value is a sum or
//! a maximum of its days is a modeling choice; summation is used here and
//! [`BlockConfig`] is the single point of change.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Day-indexed non-negative arrival counts (the parent data).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrivalSeries {
    counts: Vec<u64>,
    origin_label: Option<String>,
}

impl ArrivalSeries {
    pub fn new(counts: Vec<u64>, origin_label: Option<String>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidData(
                "arrival series must contain at least one day".into(),
            ));
        }
        Ok(Self {
            counts,
            origin_label,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn origin_label(&self) -> Option<&str> {
        self.origin_label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty series
    }
}

/// What to do with a trailing group of sub-periods smaller than a full
/// block: promote it to a block of its own, or drop it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartialPolicy {
    Promote,
    Drop,
}

/// Blocking layout: days per sub-period, sub-periods per block, and the
/// trailing-partial-block rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockConfig {
    pub subperiod_days: usize,
    pub subperiods_per_block: usize,
    pub partial_policy: PartialPolicy,
}

impl BlockConfig {
    pub fn new(
        subperiod_days: usize,
        subperiods_per_block: usize,
        partial_policy: PartialPolicy,
    ) -> Result<Self> {
        if subperiod_days < 1 {
            return Err(Error::InvalidConfig("subperiod_days must be >= 1".into()));
        }
        if subperiods_per_block < 1 {
            return Err(Error::InvalidConfig(
                "subperiods_per_block must be >= 1".into(),
            ));
        }
        Ok(Self {
            subperiod_days,
            subperiods_per_block,
            partial_policy,
        })
    }
}

impl Default for BlockConfig {
    /// Three-day sub-periods, four sub-periods per block, trailing partial
    /// block promoted.
    fn default() -> Self {
        Self {
            subperiod_days: 3,
            subperiods_per_block: 4,
            partial_policy: PartialPolicy::Promote,
        }
    }
}

/// Sub-period totals plus the count of trailing days that did not fill a
/// whole sub-period (callers surface a warning when nonzero).
#[derive(Debug, Clone, PartialEq)]
pub struct SubperiodTotals {
    pub values: Vec<f64>,
    pub dropped_tail_days: usize,
}

/// Reduce the day series to consecutive non-overlapping sub-period sums.
/// A trailing window shorter than `subperiod_days` is dropped and reported.
pub fn aggregate_subperiods(series: &ArrivalSeries, cfg: &BlockConfig) -> SubperiodTotals {
    let counts = series.counts();
    let values: Vec<f64> = counts
        .chunks_exact(cfg.subperiod_days)
        .map(|w| w.iter().map(|&c| c as f64).sum())
        .collect();
    SubperiodTotals {
        values,
        dropped_tail_days: counts.len() % cfg.subperiod_days,
    }
}

/// Block maxima extracted from a sub-period series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMaxima {
    maxima: Vec<f64>,
    n_subperiods: usize,
    n_blocks: usize,
    config: BlockConfig,
}

impl BlockMaxima {
    pub fn maxima(&self) -> &[f64] {
        &self.maxima
    }

    pub fn n_subperiods(&self) -> usize {
        self.n_subperiods
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    pub fn config(&self) -> &BlockConfig {
        &self.config
    }
}

/// Group sub-period values into consecutive blocks and emit each block's
/// maximum. A trailing partial group is kept as a full block under
/// [`PartialPolicy::Promote`] and discarded under [`PartialPolicy::Drop`].
pub fn extract_block_maxima(subperiods: &[f64], cfg: &BlockConfig) -> Result<BlockMaxima> {
    if subperiods.is_empty() {
        return Err(Error::InvalidData(
            "no sub-period values to block; series shorter than one sub-period".into(),
        ));
    }
    if subperiods.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData(
            "sub-period values must all be finite".into(),
        ));
    }
    let mut maxima = Vec::with_capacity(subperiods.len() / cfg.subperiods_per_block + 1);
    for group in subperiods.chunks(cfg.subperiods_per_block) {
        if group.len() < cfg.subperiods_per_block && cfg.partial_policy == PartialPolicy::Drop {
            break;
        }
        let m = group.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        debug_assert!(group.iter().all(|&v| m >= v));
        maxima.push(m);
    }
    let n_blocks = maxima.len();
    Ok(BlockMaxima {
        maxima,
        n_subperiods: subperiods.len(),
        n_blocks,
        config: *cfg,
    })
}

/// Sample summary in the shape of the arrival-statistics table: mean with
/// its standard error, sample standard deviation, mode, and quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    pub se_mean: f64,
    pub sd: f64,
    pub mode: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Compute descriptive statistics.
///
/// The standard deviation uses the n-1 denominator (0 for a single value),
/// the mode is the smallest value among the most frequent, and quartiles
/// interpolate linearly between closest ranks.
pub fn describe(values: &[f64]) -> Result<DescriptiveStats> {
    if values.is_empty() {
        return Err(Error::InvalidData("cannot describe an empty sample".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("sample values must all be finite".into()));
    }
    let n = values.len();
    let nf = n as f64;

    // Accumulate over the sorted sample so the result is exactly invariant
    // to input order.
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / nf;
    let sd = if n == 1 {
        0.0
    } else {
        (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
    };

    // Most frequent exact value; ties broken by the smallest, which is the
    // first encountered in sorted order.
    let mut mode = sorted[0];
    let mut best_count = 0usize;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && sorted[j] == sorted[i] {
            j += 1;
        }
        if j - i > best_count {
            best_count = j - i;
            mode = sorted[i];
        }
        i = j;
    }

    Ok(DescriptiveStats {
        n,
        mean,
        se_mean: sd / nf.sqrt(),
        sd,
        mode,
        min: sorted[0],
        q1: interpolated_quantile(&sorted, 0.25),
        median: interpolated_quantile(&sorted, 0.5),
        q3: interpolated_quantile(&sorted, 0.75),
        max: sorted[n - 1],
    })
}

// Closest-ranks linear interpolation at position (n-1)*p.
fn interpolated_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
