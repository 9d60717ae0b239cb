//! Fitting the extreme value law to block maxima: maximum likelihood via
//! simplex search and probability-weighted moments, with standard errors
//! and Wald 95% intervals for the MLE route.

use serde::{Deserialize, Serialize};

use crate::distributions::{GevParams, XI_GUMBEL_TOL};
use crate::error::{Error, Result};
use crate::optim::NelderMead;
use crate::special;

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Which estimator produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitMethod {
    #[serde(rename = "MLE")]
    Mle,
    #[serde(rename = "PWM")]
    Pwm,
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitMethod::Mle => write!(f, "MLE"),
            FitMethod::Pwm => write!(f, "PWM"),
        }
    }
}

/// A value carried once per parameter, in (location, scale, shape) order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerParam<T> {
    pub location: T,
    pub scale: T,
    pub shape: T,
}

/// A fitted parameter set with its uncertainty summary. Standard errors,
/// intervals and the optimal negative log-likelihood are present for MLE
/// fits only; PWM is a point estimator here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: GevParams,
    pub method: FitMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se: Option<PerParam<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci95: Option<PerParam<(f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nll: Option<f64>,
    pub n: usize,
    pub warnings: Vec<String>,
}

// NLL evaluated on raw floats; returns +infinity for invalid parameters or
// any observation outside the support, which the optimizer reads as
// infeasible.
pub(crate) fn gev_nll_raw(mu: f64, sigma: f64, xi: f64, data: &[f64]) -> f64 {
    if sigma <= 0.0 || !sigma.is_finite() || !mu.is_finite() || !xi.is_finite() {
        return f64::INFINITY;
    }
    let n = data.len() as f64;
    let ln_sigma = sigma.ln();
    if xi.abs() < XI_GUMBEL_TOL {
        let mut acc = n * ln_sigma;
        for &z in data {
            let s = (z - mu) / sigma;
            acc += s + (-s).exp();
        }
        acc
    } else {
        let mut acc = n * ln_sigma;
        let inv_xi = 1.0 / xi;
        let endpoint = mu - sigma / xi;
        for &z in data {
            // Support check against the endpoint itself: the algebraically
            // equivalent `1 + xi*s <= 0` can round the wrong way right at
            // the boundary.
            if (xi > 0.0 && z <= endpoint) || (xi < 0.0 && z >= endpoint) {
                return f64::INFINITY;
            }
            let s = (z - mu) / sigma;
            let w = 1.0 + xi * s;
            if w <= 0.0 {
                return f64::INFINITY;
            }
            let ln_w = (xi * s).ln_1p();
            acc += (1.0 + inv_xi) * ln_w + (-inv_xi * ln_w).exp();
        }
        acc
    }
}

/// Negative log-likelihood of `data` under `params`. Returns the
/// `f64::INFINITY` sentinel when any observation falls outside the support.
pub fn gev_nll(params: &GevParams, data: &[f64]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::InvalidData(
            "likelihood requires at least one observation".into(),
        ));
    }
    Ok(gev_nll_raw(
        params.location(),
        params.scale(),
        params.shape(),
        data,
    ))
}

/// Sample probability-weighted moment `b_r` for `r` in 0..=2, computed from
/// the ascending order statistics with plotting weights
/// `prod_{j=1..r} (i-j)/(n-j)`.
pub fn pwm_b(data: &[f64], r: usize) -> Result<f64> {
    if r > 2 {
        return Err(Error::InvalidParam(format!(
            "probability-weighted moment order must be 0, 1, or 2, got {r}"
        )));
    }
    let n = data.len();
    if n <= r {
        return Err(Error::InvalidData(format!(
            "need more than {r} observations for b_{r}, got {n}"
        )));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut acc = 0.0;
    for (idx, &x) in sorted.iter().enumerate() {
        let i = (idx + 1) as f64; // 1-based rank
        let mut weight = 1.0;
        for j in 1..=r {
            weight *= (i - j as f64) / (nf - j as f64);
        }
        acc += weight * x;
    }
    Ok(acc / nf)
}

/// Probability-weighted-moments estimator of the GEV parameters.
///
/// Uses the rational shape approximation `k = 7.8590c + 2.9554c^2` with
/// `c = (2b1-b0)/(3b2-b0) - ln2/ln3`; the fitted shape is `xi = -k`. Shapes
/// outside (-0.5, 0.5) are returned with a range warning since the
/// approximation degrades there. No standard errors are produced.
pub fn fit_pwm(data: &[f64]) -> Result<FitResult> {
    let n = data.len();
    if n < 4 {
        return Err(Error::InvalidData(format!(
            "need at least 4 block maxima to fit, got {n}"
        )));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("maxima must all be finite".into()));
    }
    let first = data[0];
    if data.iter().all(|&v| v == first) {
        return Err(Error::InvalidData(
            "degenerate sample: all maxima are equal".into(),
        ));
    }

    let b0 = pwm_b(data, 0)?;
    let b1 = pwm_b(data, 1)?;
    let b2 = pwm_b(data, 2)?;
    let num = 2.0 * b1 - b0;
    let den = 3.0 * b2 - b0;
    if den == 0.0 || !num.is_finite() || !den.is_finite() {
        return Err(Error::Numerical(
            "probability-weighted moments are degenerate for this sample".into(),
        ));
    }

    let c = num / den - std::f64::consts::LN_2 / 3.0f64.ln();
    let k = 7.8590 * c + 2.9554 * c * c;

    let (location, scale, shape) = if k.abs() < 1e-9 {
        // Gumbel limit of the estimator.
        let scale = num / std::f64::consts::LN_2;
        (b0 - EULER_MASCHERONI * scale, scale, 0.0)
    } else {
        if k <= -1.0 {
            return Err(Error::Numerical(format!(
                "shape estimate xi = {} is outside the computable range of the \
                 moment equations",
                -k
            )));
        }
        let g = special::gamma(1.0 + k);
        let scale = num * k / (g * (1.0 - (-k).exp2()));
        let location = b0 + scale * (g - 1.0) / k;
        (location, scale, -k)
    };

    let params = GevParams::new(location, scale, shape).map_err(|e| {
        Error::Numerical(format!("moment equations produced invalid parameters: {e}"))
    })?;

    let mut warnings = Vec::new();
    if !(-0.5..=0.5).contains(&shape) {
        warnings.push(format!(
            "fitted shape {shape:.4} lies outside (-0.5, 0.5), where the \
             rational shape approximation degrades"
        ));
    }

    Ok(FitResult {
        params,
        method: FitMethod::Pwm,
        se: None,
        ci95: None,
        nll: None,
        n,
        warnings,
    })
}

/// Maximum likelihood fit by Nelder-Mead simplex search over
/// `(mu, ln sigma, xi)`, started from the PWM estimate. Standard errors
/// come from the inverse of the central-difference Hessian of the NLL at
/// the optimum; `ci95` is the Wald interval `estimate +/- 1.96 se`.
pub fn fit_mle(data: &[f64]) -> Result<FitResult> {
    let n = data.len();
    if n < 4 {
        return Err(Error::InvalidData(format!(
            "need at least 4 block maxima to fit, got {n}"
        )));
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData("maxima must all be finite".into()));
    }

    let mut warnings = Vec::new();
    if n < 10 {
        warnings.push(format!(
            "small sample (n = {n}): estimates and standard errors are unreliable"
        ));
    }

    // Work on the sorted sample so the fit is exactly invariant to input
    // order (summation order would otherwise leak into the optimum).
    let mut data = data.to_vec();
    data.sort_by(f64::total_cmp);
    let data = data.as_slice();

    let start = starting_point(data);
    let objective = |x: &[f64]| gev_nll_raw(x[0], x[1].exp(), x[2], data);
    let x0 = [start.location(), start.scale().ln(), start.shape()];

    let result = NelderMead::default().minimize(objective, &x0);
    let (mu, sigma, xi) = (result.x[0], result.x[1].exp(), result.x[2]);
    if !result.converged {
        return Err(Error::NonConvergence {
            location: mu,
            scale: sigma,
            shape: xi,
            nll: result.fx,
            iterations: result.iterations,
        });
    }
    let params = GevParams::new(mu, sigma, xi)
        .map_err(|e| Error::Numerical(format!("optimizer returned invalid parameters: {e}")))?;

    let (se, ci95) = match standard_errors(&params, data) {
        Some(se) => {
            let ci = PerParam {
                location: wald(params.location(), se.location),
                scale: wald(params.scale(), se.scale),
                shape: wald(params.shape(), se.shape),
            };
            (Some(se), Some(ci))
        }
        None => {
            warnings.push(
                "observed information matrix is not positive definite; \
                 standard errors unavailable"
                    .into(),
            );
            (None, None)
        }
    };

    Ok(FitResult {
        params,
        method: FitMethod::Mle,
        se,
        ci95,
        nll: Some(result.fx),
        n,
        warnings,
    })
}

fn wald(estimate: f64, se: f64) -> (f64, f64) {
    (estimate - 1.96 * se, estimate + 1.96 * se)
}

// PWM start when feasible, otherwise moment-based fallbacks; the Gumbel
// start is always feasible.
fn starting_point(data: &[f64]) -> GevParams {
    if let Ok(fit) = fit_pwm(data) {
        if gev_nll_raw(
            fit.params.location(),
            fit.params.scale(),
            fit.params.shape(),
            data,
        )
        .is_finite()
        {
            return fit.params;
        }
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let sd = (data.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0))
        .sqrt()
        .max(1e-9);
    let moment = GevParams::new(mean - 0.45 * sd, 0.78 * sd, 0.1).expect("valid fallback");
    if gev_nll_raw(moment.location(), moment.scale(), moment.shape(), data).is_finite() {
        moment
    } else {
        GevParams::new(mean - 0.45 * sd, 0.78 * sd, 0.0).expect("valid Gumbel fallback")
    }
}

// Inverse of the symmetrized central-difference Hessian of the NLL,
// evaluated on the natural (mu, sigma, xi) coordinates with relative step
// 1e-4. Returns None when the matrix is not positive definite or any
// evaluation leaves the feasible region.
fn standard_errors(params: &GevParams, data: &[f64]) -> Option<PerParam<f64>> {
    let theta = [params.location(), params.scale(), params.shape()];
    let h: Vec<f64> = theta.iter().map(|t| 1e-4 * t.abs().max(1.0)).collect();
    let f = |x: &[f64; 3]| gev_nll_raw(x[0], x[1], x[2], data);

    let f0 = f(&theta);
    if !f0.is_finite() {
        return None;
    }

    let mut hess = [[0.0f64; 3]; 3];
    for i in 0..3 {
        let mut up = theta;
        let mut down = theta;
        up[i] += h[i];
        down[i] -= h[i];
        let (fu, fd) = (f(&up), f(&down));
        if !fu.is_finite() || !fd.is_finite() {
            return None;
        }
        hess[i][i] = (fu - 2.0 * f0 + fd) / (h[i] * h[i]);
        for j in (i + 1)..3 {
            let mut pp = theta;
            let mut pm = theta;
            let mut mp = theta;
            let mut mm = theta;
            pp[i] += h[i];
            pp[j] += h[j];
            pm[i] += h[i];
            pm[j] -= h[j];
            mp[i] -= h[i];
            mp[j] += h[j];
            mm[i] -= h[i];
            mm[j] -= h[j];
            let vals = [f(&pp), f(&pm), f(&mp), f(&mm)];
            if vals.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let mixed = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h[i] * h[j]);
            hess[i][j] = mixed;
            hess[j][i] = mixed;
        }
    }

    // Positive definiteness by Sylvester's criterion.
    let m1 = hess[0][0];
    let m2 = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
    let det = det3(&hess);
    if !(m1 > 0.0 && m2 > 0.0 && det > 0.0) {
        return None;
    }

    // Diagonal of the inverse via cofactors.
    let var_location = (hess[1][1] * hess[2][2] - hess[1][2] * hess[2][1]) / det;
    let var_scale = (hess[0][0] * hess[2][2] - hess[0][2] * hess[2][0]) / det;
    let var_shape = (hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0]) / det;
    if var_location <= 0.0 || var_scale <= 0.0 || var_shape <= 0.0 {
        return None;
    }

    Some(PerParam {
        location: var_location.sqrt(),
        scale: var_scale.sqrt(),
        shape: var_shape.sqrt(),
    })
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frechet_fit() -> GevParams {
        GevParams::new(8.3540, 4.2832, 0.8903).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn nll_single_point_gumbel() {
        let p = GevParams::new(0.0, 1.0, 0.0).unwrap();
        close(gev_nll(&p, &[0.0]).unwrap(), 1.0, 1e-15);
    }

    #[test]
    fn nll_matches_pdf_sum_oracle() {
        let p = frechet_fit();
        let data = p.sample(50, 13);
        let direct = gev_nll(&p, &data).unwrap();
        let oracle: f64 = data.iter().map(|&z| -p.pdf(z).ln()).sum();
        close(direct, oracle, 1e-8);
    }

    #[test]
    fn nll_support_violation_is_infinite() {
        let p = frechet_fit();
        let endpoint = p.support_endpoint().unwrap();
        assert_eq!(gev_nll(&p, &[endpoint - 0.1, 20.0]).unwrap(), f64::INFINITY);
        assert_eq!(gev_nll(&p, &[endpoint, 20.0]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn nll_empty_data_errors() {
        assert!(gev_nll(&frechet_fit(), &[]).is_err());
    }

    #[test]
    fn pwm_hand_example() {
        let data = [1.0, 2.0, 3.0, 4.0];
        close(pwm_b(&data, 0).unwrap(), 2.5, 1e-9);
        close(pwm_b(&data, 1).unwrap(), 5.0 / 3.0, 1e-9);
        close(pwm_b(&data, 2).unwrap(), 1.25, 1e-9);
    }

    #[test]
    fn pwm_constant_data_halves() {
        let data = [7.0, 7.0, 7.0, 7.0];
        close(pwm_b(&data, 0).unwrap(), 7.0, 1e-12);
        close(pwm_b(&data, 1).unwrap(), 3.5, 1e-12);
    }

    #[test]
    fn pwm_b0_is_mean() {
        let data = [9.0, 1.0, 4.0, 6.5, 2.25];
        let mean = data.iter().sum::<f64>() / data.len() as f64;
        close(pwm_b(&data, 0).unwrap(), mean, 1e-12);
    }

    #[test]
    fn pwm_order_and_size_validation() {
        assert!(pwm_b(&[1.0, 2.0], 2).is_err());
        assert!(pwm_b(&[1.0, 2.0, 3.0], 3).is_err());
        assert!(pwm_b(&[], 0).is_err());
    }

    #[test]
    fn fit_pwm_recovers_moderate_shape() {
        let truth = GevParams::new(0.0, 1.0, 0.2).unwrap();
        let data = truth.sample(5000, 21);
        let fit = fit_pwm(&data).unwrap();
        close(fit.params.shape(), 0.2, 0.05);
        close(fit.params.scale(), 1.0, 0.05);
        close(fit.params.location(), 0.0, 0.05);
        assert!(fit.warnings.is_empty());
        assert!(fit.se.is_none() && fit.ci95.is_none() && fit.nll.is_none());
    }

    #[test]
    fn fit_pwm_recovers_gumbel() {
        let truth = GevParams::new(3.0, 2.0, 0.0).unwrap();
        let data = truth.sample(5000, 22);
        let fit = fit_pwm(&data).unwrap();
        assert!(fit.params.shape().abs() < 0.05);
    }

    #[test]
    fn fit_pwm_warns_on_heavy_shape() {
        let data = frechet_fit().sample(4000, 23);
        let fit = fit_pwm(&data).unwrap();
        assert!(fit.params.shape() > 0.5);
        assert_eq!(fit.warnings.len(), 1);
        assert!(fit.warnings[0].contains("outside (-0.5, 0.5)"));
    }

    #[test]
    fn fit_pwm_rejects_degenerate_data() {
        assert!(matches!(
            fit_pwm(&[5.0, 5.0, 5.0, 5.0, 5.0]),
            Err(Error::InvalidData(_))
        ));
    }

    #[test]
    fn fit_mle_recovers_heavy_tail() {
        let truth = frechet_fit();
        let data = truth.sample(2000, 7);
        let fit = fit_mle(&data).unwrap();
        close(fit.params.shape(), 0.8903, 0.10);
        assert!((fit.params.scale() - 4.2832).abs() / 4.2832 < 0.10);
        close(fit.params.location(), 8.3540, 0.5);
        assert_eq!(fit.method, FitMethod::Mle);
        assert_eq!(fit.n, 2000);
        assert!(fit.nll.unwrap().is_finite());
    }

    #[test]
    fn fit_mle_on_quantile_grid() {
        let truth = GevParams::new(10.0, 2.0, 0.3).unwrap();
        let n = 200;
        let data: Vec<f64> = (1..=n)
            .map(|i| truth.quantile((i as f64 - 0.5) / n as f64).unwrap())
            .collect();
        let fit = fit_mle(&data).unwrap();
        close(fit.params.location(), 10.0, 0.05);
        close(fit.params.scale(), 2.0, 0.05);
        close(fit.params.shape(), 0.3, 0.05);
    }

    #[test]
    fn fit_mle_standard_errors_bracket_estimates() {
        let data = frechet_fit().sample(500, 31);
        let fit = fit_mle(&data).unwrap();
        let se = fit.se.expect("standard errors available");
        assert!(se.location > 0.0 && se.scale > 0.0 && se.shape > 0.0);
        let ci = fit.ci95.unwrap();
        assert!(ci.location.0 < fit.params.location() && fit.params.location() < ci.location.1);
        assert!(ci.scale.0 < fit.params.scale() && fit.params.scale() < ci.scale.1);
        assert!(ci.shape.0 < fit.params.shape() && fit.params.shape() < ci.shape.1);
    }

    #[test]
    fn fit_mle_beats_pwm_on_its_own_criterion() {
        let data = frechet_fit().sample(300, 41);
        let mle = fit_mle(&data).unwrap();
        let pwm = fit_pwm(&data).unwrap();
        let nll_mle = gev_nll(&mle.params, &data).unwrap();
        let nll_pwm = gev_nll(&pwm.params, &data).unwrap();
        if nll_pwm.is_finite() {
            assert!(nll_mle <= nll_pwm + 1e-6);
        }
    }

    #[test]
    fn fit_mle_order_insensitive() {
        let mut data = frechet_fit().sample(200, 51);
        let a = fit_mle(&data).unwrap();
        data.reverse();
        let b = fit_mle(&data).unwrap();
        close(a.params.location(), b.params.location(), 1e-9);
        close(a.params.scale(), b.params.scale(), 1e-9);
        close(a.params.shape(), b.params.shape(), 1e-9);
    }

    #[test]
    fn fit_mle_location_scale_equivariant() {
        let data = GevParams::new(0.0, 1.0, 0.2).unwrap().sample(400, 61);
        let base = fit_mle(&data).unwrap();
        let (a, b) = (2.5, 7.0);
        let shifted: Vec<f64> = data.iter().map(|z| a * z + b).collect();
        let moved = fit_mle(&shifted).unwrap();
        close(moved.params.location(), a * base.params.location() + b, 1e-3 * 10.0);
        close(moved.params.scale(), a * base.params.scale(), 1e-3 * 10.0);
        close(moved.params.shape(), base.params.shape(), 1e-3 * 10.0);
    }

    #[test]
    fn fit_mle_small_sample_warns_but_runs() {
        let data = [4.0, 9.0, 6.0, 12.0, 5.0];
        let fit = fit_mle(&data).unwrap();
        assert!(fit.warnings.iter().any(|w| w.contains("small sample")));
    }

    #[test]
    fn fit_mle_too_few_points_errors() {
        assert!(matches!(
            fit_mle(&[1.0, 2.0, 3.0]),
            Err(Error::InvalidData(_))
        ));
    }
}
