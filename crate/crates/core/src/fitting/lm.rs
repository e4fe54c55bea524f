use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Settings for [`levenberg_marquardt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Stop when an accepted step lowers the cost by less than this fraction.
    pub cost_tolerance: f64,
    /// Stop when no parameter moves by more than this fraction.
    pub step_tolerance: f64,
    /// Relative forward-difference step for the Jacobian.
    pub jacobian_step: f64,
    pub initial_damping: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iterations: 200,
            cost_tolerance: 1e-14,
            step_tolerance: 1e-12,
            jacobian_step: 1e-6,
            initial_damping: 1e-3,
        }
    }
}

/// Box constraints, enforced by projecting every trial point.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn unbounded(n: usize) -> Self {
        Bounds { lower: vec![f64::NEG_INFINITY; n], upper: vec![f64::INFINITY; n] }
    }

    fn project(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub params: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Jacobian of the residuals at `params`.
    pub jacobian: DMatrix<f64>,
    /// `Σ r²` at the optimum.
    pub cost: f64,
    pub initial_cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimises `Σ r_i(x)²` by damped Gauss-Newton steps with Marquardt's
/// diagonal scaling and a forward-difference Jacobian.
///
/// `scales` gives a typical magnitude per parameter, used for the
/// difference step when a parameter sits at zero.
pub fn levenberg_marquardt<F>(
    residuals: F,
    x0: &[f64],
    scales: &[f64],
    bounds: &Bounds,
    opts: &LmOptions,
) -> Result<LmOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x0.len();
    if scales.len() != n || bounds.lower.len() != n || bounds.upper.len() != n {
        return Err(Error::Fit("parameter, scale and bound lengths differ".into()));
    }
    let mut x = x0.to_vec();
    bounds.project(&mut x);
    let mut r = residuals(&x)?;
    if r.len() < n {
        return Err(Error::Fit(format!("{} residuals for {n} parameters", r.len())));
    }
    let mut cost = sum_sq(&r);
    let initial_cost = cost;
    let mut lambda = opts.initial_damping;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations && !converged {
        iterations += 1;
        let jac = jacobian(&residuals, &x, &r, scales, bounds, opts.jacobian_step)?;
        let rv = DVector::from_column_slice(&r);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * rv;
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = a.clone();
            for i in 0..n {
                damped[(i, i)] += lambda * a[(i, i)].max(1e-300);
            }
            let Some(step) = damped.lu().solve(&(-&g)) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            bounds.project(&mut trial);
            let r_trial = residuals(&trial)?;
            let c_trial = sum_sq(&r_trial);
            if c_trial.is_finite() && c_trial < cost {
                let moved = x
                    .iter()
                    .zip(&trial)
                    .zip(scales)
                    .all(|((a, b), s)| (a - b).abs() <= opts.step_tolerance * (a.abs() + s.abs()));
                let gain = (cost - c_trial) / cost;
                x = trial;
                r = r_trial;
                cost = c_trial;
                lambda = (lambda / 10.0).max(1e-12);
                accepted = true;
                if gain < opts.cost_tolerance || moved || cost == 0.0 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // No descent direction left at finite-difference resolution.
            converged = true;
        }
    }

    let jac = jacobian(&residuals, &x, &r, scales, bounds, opts.jacobian_step)?;
    Ok(LmOutcome { params: x, residuals: r, jacobian: jac, cost, initial_cost, iterations, converged })
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn jacobian<F>(
    residuals: &F,
    x: &[f64],
    r0: &[f64],
    scales: &[f64],
    bounds: &Bounds,
    rel_step: f64,
) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let m = r0.len();
    let mut jac = DMatrix::zeros(m, x.len());
    for j in 0..x.len() {
        let mut h = rel_step * x[j].abs().max(scales[j].abs());
        if h == 0.0 {
            h = rel_step;
        }
        if x[j] + h > bounds.upper[j] {
            h = -h;
        }
        let mut xp = x.to_vec();
        xp[j] += h;
        let rp = residuals(&xp)?;
        for i in 0..m {
            jac[(i, j)] = (rp[i] - r0[i]) / h;
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_exponential_decay() {
        let t: Vec<f64> = (0..30).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = t.iter().map(|t| 2.5 * (-1.3 * t).exp() + 0.1).collect();
        let f = |p: &[f64]| Ok(t.iter().zip(&y).map(|(t, y)| p[0] * (-p[1] * t).exp() + p[2] - y).collect());
        let out = levenberg_marquardt(f, &[1.0, 0.5, 0.0], &[1.0, 1.0, 1.0], &Bounds::unbounded(3), &LmOptions::default())
            .unwrap();
        assert!(out.converged);
        for (p, e) in out.params.iter().zip([2.5, 1.3, 0.1]) {
            assert!((p - e).abs() < 1e-9, "{:?}", out.params);
        }
        assert!(out.cost <= out.initial_cost);
    }

    #[test]
    fn respects_bounds() {
        // unconstrained optimum at x = −1
        let f = |p: &[f64]| Ok(vec![p[0] + 1.0, 0.5 * (p[0] + 1.0)]);
        let b = Bounds { lower: vec![0.0], upper: vec![10.0] };
        let out = levenberg_marquardt(f, &[3.0], &[1.0], &b, &LmOptions::default()).unwrap();
        assert_eq!(out.params[0], 0.0);
    }

    #[test]
    fn too_few_residuals() {
        let f = |_: &[f64]| Ok(vec![1.0]);
        assert!(levenberg_marquardt(f, &[1.0, 2.0], &[1.0, 1.0], &Bounds::unbounded(2), &LmOptions::default()).is_err());
    }
}
