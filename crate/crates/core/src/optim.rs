//! Derivative-free simplex minimization (Nelder-Mead).
//!
//! The objective may return `f64::INFINITY` to mark infeasible points; the
//! simplex contracts away from them. Standard coefficients: reflection 1,
//! expansion 2, contraction 0.5, shrink 0.5, with an fminsearch-style
//! initial simplex (5% displacement per coordinate).

/// Convergence settings and iteration cap.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iterations: usize,
    /// Relative spread of objective values across the simplex.
    pub f_tol_rel: f64,
    /// Coordinate spread across the simplex, scaled by `1 + |x_best|`.
    pub x_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            f_tol_rel: 1e-10,
            x_tol: 1e-8,
        }
    }
}

/// Outcome of a minimization run.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let dim = x0.len();
        assert!(dim >= 1, "objective must have at least one coordinate");
        let mut evaluations = 0;
        let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        // Initial simplex: x0 plus one vertex per coordinate displaced by
        // 5% (or a small absolute step where the coordinate is zero).
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let fx0 = eval(x0, &mut evaluations);
        simplex.push((x0.to_vec(), fx0));
        for i in 0..dim {
            let mut v = x0.to_vec();
            v[i] += if v[i] != 0.0 { 0.05 * v[i].abs() } else { 0.00025 };
            let fv = eval(&v, &mut evaluations);
            simplex.push((v, fv));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = &simplex[0];
            let worst_f = simplex[dim].1;

            let f_spread_ok =
                (worst_f - best.1).abs() <= self.f_tol_rel * best.1.abs().max(1.0);
            let x_spread_ok = simplex.iter().all(|(v, _)| {
                v.iter()
                    .zip(&best.0)
                    .all(|(a, b)| (a - b).abs() <= self.x_tol * (1.0 + b.abs()))
            });
            if f_spread_ok && x_spread_ok && worst_f.is_finite() {
                converged = true;
                break;
            }

            iterations += 1;

            // Centroid of all but the worst vertex.
            let mut centroid = vec![0.0; dim];
            for (v, _) in simplex.iter().take(dim) {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / dim as f64;
                }
            }

            let lerp = |from: &[f64], coeff: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, w)| c + coeff * (c - w))
                    .collect()
            };

            let worst = simplex[dim].0.clone();
            let reflected = lerp(&worst, 1.0);
            let f_reflected = eval(&reflected, &mut evaluations);

            if f_reflected < simplex[0].1 {
                // Try to expand past the reflection.
                let expanded = lerp(&worst, 2.0);
                let f_expanded = eval(&expanded, &mut evaluations);
                simplex[dim] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
            } else if f_reflected < simplex[dim - 1].1 {
                simplex[dim] = (reflected, f_reflected);
            } else {
                let (contracted, f_contracted) = if f_reflected < worst_f {
                    let outside = lerp(&worst, 0.5);
                    let fv = eval(&outside, &mut evaluations);
                    (outside, fv)
                } else {
                    let inside = lerp(&worst, -0.5);
                    let fv = eval(&inside, &mut evaluations);
                    (inside, fv)
                };
                if f_contracted < worst_f.min(f_reflected) {
                    simplex[dim] = (contracted, f_contracted);
                } else {
                    // Shrink every vertex towards the best.
                    let anchor = simplex[0].0.clone();
                    for (v, fv) in simplex.iter_mut().skip(1) {
                        for (x, a) in v.iter_mut().zip(&anchor) {
                            *x = a + 0.5 * (*x - a);
                        }
                        *fv = eval(v, &mut evaluations);
                    }
                }
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        Minimum {
            x: simplex[0].0.clone(),
            fx: simplex[0].1,
            iterations,
            evaluations,
            converged,
        }
    }
}
