//! Return levels, empirical CDFs, model-comparison curves, exceedance
//! probabilities, and the Pearson chi-squared goodness-of-fit test.

use serde::Serialize;

use crate::distributions::{ArrivalLaw, GevParams, NormalParams, PoissonParams};
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, FitResult};
use crate::special;

/// A (return period, return level) pair: the level expected to be equalled
/// or exceeded on average once every `period` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnLevelPoint {
    pub period: f64,
    pub level: f64,
}

/// Return level for period `T > 1`: the `1 - 1/T` quantile of the fitted
/// law.
pub fn return_level(params: &GevParams, period: f64) -> Result<ReturnLevelPoint> {
    if period <= 1.0 || !period.is_finite() {
        return Err(Error::InvalidParam(format!(
            "return period must be a finite real > 1, got {period}"
        )));
    }
    let level = params.quantile(1.0 - 1.0 / period)?;
    Ok(ReturnLevelPoint { period, level })
}

/// Map [`return_level`] over a period grid (sorted ascending first).
pub fn return_curve(params: &GevParams, periods: &[f64]) -> Result<Vec<ReturnLevelPoint>> {
    let mut grid = periods.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.iter().map(|&t| return_level(params, t)).collect()
}

/// The default plotting grid: 100 log-spaced periods from 1.1 to 500.
pub fn default_period_grid() -> Vec<f64> {
    let (lo, hi, n) = (1.1f64.ln(), 500.0f64.ln(), 100);
    (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Empirical cumulative distribution function: a right-continuous step
/// function over the sorted unique observations, heights in multiples of
/// `1/n`, final height exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcdfCurve {
    steps: Vec<(f64, f64)>,
    n: usize,
}

impl EcdfCurve {
    /// Sorted `(value, cumulative height)` pairs.
    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Step-function value at `z`.
    pub fn eval(&self, z: f64) -> f64 {
        match self
            .steps
            .binary_search_by(|(v, _)| v.total_cmp(&z))
        {
            Ok(i) => self.steps[i].1,
            Err(0) => 0.0,
            Err(i) => self.steps[i - 1].1,
        }
    }
}

/// Build the ECDF of a sample.
pub fn ecdf(data: &[f64]) -> Result<EcdfCurve> {
    if data.is_empty() {
        return Err(Error::InvalidData("cannot build an ECDF of nothing".into()));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("sample values must all be finite".into()));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut steps: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let height = (i + 1) as f64 / n as f64;
        match steps.last_mut() {
            Some(last) if last.0 == v => last.1 = height,
            _ => steps.push((v, height)),
        }
    }
    Ok(EcdfCurve { steps, n })
}

/// Probability that an arrival count surpasses `threshold` under the given
/// law: `1 - cdf(threshold)`.
pub fn exceedance(law: &ArrivalLaw, threshold: f64) -> f64 {
    1.0 - law.cdf(threshold)
}

/// One row of the model-comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub z: f64,
    pub ecdf: f64,
    pub gev: f64,
    pub normal: f64,
    pub poisson: f64,
}

/// The parameterizations behind a comparison table: extreme value law
/// fitted to the maxima, central-tendency laws estimated from the parent
/// sample, ECDF of the maxima.
#[derive(Debug, Clone)]
pub struct CompareInputs {
    pub gev_fit: FitResult,
    pub normal: NormalParams,
    pub poisson: PoissonParams,
    pub maxima_ecdf: EcdfCurve,
}

/// Estimate every column's parameters: GEV by maximum likelihood on the
/// maxima, Normal from the parent mean and sample sd, Poisson from the
/// parent mean.
pub fn compare_parameterize(parent: &[f64], maxima: &[f64]) -> Result<CompareInputs> {
    if parent.is_empty() {
        return Err(Error::InvalidData("parent sample is empty".into()));
    }
    let stats = crate::blocking::describe(parent)?;
    if stats.sd <= 0.0 {
        return Err(Error::InvalidData(
            "parent sample is constant; Normal baseline undefined".into(),
        ));
    }
    if stats.mean <= 0.0 {
        return Err(Error::InvalidData(
            "parent sample mean must be positive for a Poisson baseline".into(),
        ));
    }
    Ok(CompareInputs {
        gev_fit: fit_mle(maxima)?,
        normal: NormalParams::new(stats.mean, stats.sd)?,
        poisson: PoissonParams::new(stats.mean)?,
        maxima_ecdf: ecdf(maxima)?,
    })
}

/// Evaluate all four CDF columns on a grid.
pub fn compare_table(
    gev: &GevParams,
    normal: &NormalParams,
    poisson: &PoissonParams,
    maxima_ecdf: &EcdfCurve,
    z_grid: &[f64],
) -> Vec<CompareRow> {
    let mut grid = z_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.iter()
        .map(|&z| CompareRow {
            z,
            ecdf: maxima_ecdf.eval(z),
            gev: gev.cdf(z),
            normal: normal.cdf(z),
            poisson: poisson.cdf_at(z),
        })
        .collect()
}

/// Fit both model families and tabulate their CDFs against the empirical
/// one on `z_grid`.
pub fn compare_cdfs(parent: &[f64], maxima: &[f64], z_grid: &[f64]) -> Result<Vec<CompareRow>> {
    let inputs = compare_parameterize(parent, maxima)?;
    Ok(compare_table(
        &inputs.gev_fit.params,
        &inputs.normal,
        &inputs.poisson,
        &inputs.maxima_ecdf,
        z_grid,
    ))
}

/// Binned observed/expected counts with the Pearson chi-squared statistic
/// and upper-tail p-value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    /// Interior bin edges; the final bin is open-ended. Empty when the test
    /// was run on pre-binned counts without an edge layout.
    pub bin_edges: Vec<f64>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    pub fitted_param_count: usize,
    pub warnings: Vec<String>,
}

/// Pearson chi-squared test of binned observations against expected bin
/// probabilities. `dof = bins - 1 - fitted_param_count`; the p-value is the
/// chi-squared upper tail at that dof.
pub fn chi_squared_gof(
    observed: &[u64],
    expected_probs: &[f64],
    n: u64,
    fitted_param_count: usize,
) -> Result<GofReport> {
    if observed.len() != expected_probs.len() {
        return Err(Error::InvalidData(format!(
            "observed ({}) and expected ({}) bin counts differ",
            observed.len(),
            expected_probs.len()
        )));
    }
    if observed.is_empty() {
        return Err(Error::InvalidData("no bins to test".into()));
    }
    let total: u64 = observed.iter().sum();
    if total != n {
        return Err(Error::InvalidData(format!(
            "observed counts sum to {total}, expected n = {n}"
        )));
    }
    let prob_sum: f64 = expected_probs.iter().sum();
    if (prob_sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParam(format!(
            "expected probabilities must sum to 1 (got {prob_sum}); make the \
             final bin open-ended"
        )));
    }
    if let Some(i) = expected_probs.iter().position(|&p| p <= 0.0) {
        return Err(Error::Binning(format!(
            "bin {i} has zero expected count; merge it with a neighbouring bin"
        )));
    }
    let bins = observed.len();
    if bins < 2 + fitted_param_count {
        return Err(Error::InvalidConfig(format!(
            "degrees of freedom would be {} (bins = {bins}, fitted parameters \
             = {fitted_param_count}); need at least 1",
            bins as i64 - 1 - fitted_param_count as i64
        )));
    }
    let dof = bins - 1 - fitted_param_count;

    let nf = n as f64;
    let mut warnings = Vec::new();
    let mut chi2 = 0.0;
    let mut expected = Vec::with_capacity(bins);
    for (i, (&obs, &p)) in observed.iter().zip(expected_probs).enumerate() {
        let exp = nf * p;
        if exp < 1.0 {
            warnings.push(format!(
                "bin {i} has expected count {exp:.3} < 1; consider merging it \
                 with a neighbour"
            ));
        }
        chi2 += (obs as f64 - exp).powi(2) / exp;
        expected.push(exp);
    }

    Ok(GofReport {
        bin_edges: Vec::new(),
        observed: observed.to_vec(),
        expected,
        chi2,
        dof,
        p_value: special::chi2_sf(chi2, dof),
        fitted_param_count,
        warnings,
    })
}

/// Bin a sample on ascending interior edges — bins `(-inf, e1], (e1, e2],
/// ..., (ek, +inf)` — take expected probabilities from the fitted law, and
/// run the chi-squared test.
pub fn gof_against_gev(
    maxima: &[f64],
    edges: &[f64],
    params: &GevParams,
    fitted_param_count: usize,
) -> Result<GofReport> {
    if maxima.is_empty() {
        return Err(Error::InvalidData("no observations to bin".into()));
    }
    if edges.is_empty() {
        return Err(Error::Binning("at least one bin edge is required".into()));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::Binning("bin edges must be finite".into()));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Binning(
            "bin edges must be strictly ascending".into(),
        ));
    }

    let bins = edges.len() + 1;
    let mut observed = vec![0u64; bins];
    for &z in maxima {
        let idx = edges.partition_point(|&e| e < z);
        // partition_point puts z == e into the bin ending at e.
        observed[idx] += 1;
    }

    let mut probs = Vec::with_capacity(bins);
    let mut prev = 0.0;
    for &e in edges {
        let c = params.cdf(e);
        probs.push(c - prev);
        prev = c;
    }
    probs.push(1.0 - prev);

    let mut report = chi_squared_gof(&observed, &probs, maxima.len() as u64, fitted_param_count)?;
    report.bin_edges = edges.to_vec();
    Ok(report)
}

/// Convert cumulative "0..e" style bins (upper edges with non-decreasing
/// cumulative counts out of `n`) into disjoint bins plus an open tail bin.
/// Returns the edges unchanged and the differenced counts, whose length is
/// `edges.len() + 1`.
pub fn cumulative_to_disjoint(
    upper_edges: &[f64],
    cumulative: &[u64],
    n: u64,
) -> Result<(Vec<f64>, Vec<u64>)> {
    if upper_edges.len() != cumulative.len() {
        return Err(Error::InvalidData(format!(
            "edge count ({}) and cumulative count ({}) differ",
            upper_edges.len(),
            cumulative.len()
        )));
    }
    if upper_edges.is_empty() {
        return Err(Error::InvalidData("no cumulative bins given".into()));
    }
    if upper_edges.iter().any(|e| !e.is_finite())
        || upper_edges.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidData(
            "cumulative bin edges must be finite and strictly ascending".into(),
        ));
    }
    let mut counts = Vec::with_capacity(cumulative.len() + 1);
    let mut prev = 0u64;
    for (i, &c) in cumulative.iter().enumerate() {
        if c < prev {
            return Err(Error::InvalidData(format!(
                "cumulative counts decrease at bin {i} ({prev} -> {c})"
            )));
        }
        counts.push(c - prev);
        prev = c;
    }
    if prev > n {
        return Err(Error::InvalidData(format!(
            "cumulative count {prev} exceeds the sample size {n}"
        )));
    }
    counts.push(n - prev);
    Ok((upper_edges.to_vec(), counts))
}

/// Difference a non-decreasing cumulative probability column into disjoint
/// bin probabilities plus the open tail `1 - last`.
pub fn cumulative_probs_to_disjoint(cumulative: &[f64]) -> Result<Vec<f64>> {
    if cumulative.is_empty() {
        return Err(Error::InvalidData("no cumulative probabilities given".into()));
    }
    let mut probs = Vec::with_capacity(cumulative.len() + 1);
    let mut prev = 0.0;
    for (i, &c) in cumulative.iter().enumerate() {
        if !(0.0..=1.0).contains(&c) || c < prev {
            return Err(Error::InvalidData(format!(
                "cumulative probabilities must be non-decreasing within [0, 1]; \
                 offending entry {c} at position {i}"
            )));
        }
        probs.push(c - prev);
        prev = c;
    }
    probs.push(1.0 - prev);
    Ok(probs)
}
