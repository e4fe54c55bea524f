//! Least-squares fitting.
//!
//! [`levenberg_marquardt`] is a small bounded damped Gauss-Newton solver.
//! Three pipelines sit on top of it: a Lorentzian dip for the bare cavity,
//! the clad-ring transfer function with the interaction factor free, and the
//! saturation law `α = α₀/(1 + P/P_sat)`. [`saturation_scan`] chains the
//! last two over a series of spectra taken at increasing power.
//!
//! Confidence intervals come from the linearised covariance
//! `(JᵀJ)⁻¹·χ²_red` of the weighted residuals, multiplied by the two-sided
//! 97.5 % Student-t quantile. With no degrees of freedom left the
//! covariance is not rescaled and the normal quantile 1.96 is used.

mod interaction;
mod lm;
mod lorentzian;
mod saturation;
mod scan;

pub use interaction::{fit_interaction_factor, interaction_model, InteractionFitOptions};
pub use lm::{levenberg_marquardt, Bounds, LmOptions, LmOutcome};
pub use lorentzian::{fit_lorentzian, lorentzian_dip, LorentzianOptions};
pub use saturation::fit_saturation;
pub use scan::{saturation_scan, synthesize_power_ladder, PowerLadder, SaturationScan};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Normal 97.5 % quantile, used when there are no residual degrees of freedom.
const Z_975: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParameter {
    pub name: String,
    pub value: f64,
    /// Half width of the 95 % confidence interval.
    pub ci95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub parameters: Vec<FitParameter>,
    /// Quantities computed from the fitted parameters.
    pub derived: Vec<FitParameter>,
    /// Row-major, in the order of `parameters`.
    pub covariance: Vec<Vec<f64>>,
    /// `√(Σ r²)` of the weighted residuals at the optimum.
    pub residual_norm: f64,
    pub initial_residual_norm: f64,
    pub reduced_chi_square: Option<f64>,
    pub degrees_of_freedom: usize,
    pub converged: bool,
    pub iterations: usize,
    /// Warnings such as parameters pinned at a bound.
    pub flags: Vec<String>,
}

impl FitResult {
    pub fn parameter(&self, name: &str) -> Option<&FitParameter> {
        self.parameters.iter().chain(&self.derived).find(|p| p.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.parameter(name).map(|p| p.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit results serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::data(format!("bad fit result: {e}")))
    }
}

/// Turns a solver outcome into a [`FitResult`], or a fit error if the solver
/// did not converge.
pub(crate) fn summarise(
    model: &str,
    names: &[&str],
    outcome: &LmOutcome,
    bounds: &Bounds,
    mut flags: Vec<String>,
) -> Result<FitResult> {
    if !outcome.converged {
        return Err(Error::Fit(format!(
            "{model}: no convergence after {} iterations (cost {:.3e} from {:.3e}, parameters {:?})",
            outcome.iterations, outcome.cost, outcome.initial_cost, outcome.params
        )));
    }
    let n = names.len();
    let m = outcome.residuals.len();
    let dof = m.saturating_sub(n);
    let jtj = outcome.jacobian.transpose() * &outcome.jacobian;
    let inv = jtj.clone().try_inverse().ok_or_else(|| {
        Error::Fit(format!("{model}: singular normal matrix at the optimum"))
    })?;
    let (scale, quantile, red) = if dof > 0 {
        let red = outcome.cost / dof as f64;
        let t = StudentsT::new(0.0, 1.0, dof as f64)
            .map_err(|e| Error::Fit(e.to_string()))?
            .inverse_cdf(0.975);
        (red, t, Some(red))
    } else {
        (1.0, Z_975, None)
    };
    let cond = condition_number(&jtj);
    if cond > 1e12 {
        flags.push(format!("ill-conditioned normal matrix (condition number {cond:.2e})"));
    }
    let covariance: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| inv[(i, j)] * scale).collect()).collect();
    let parameters = names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let x = outcome.params[i];
            if x == bounds.lower[i] || x == bounds.upper[i] {
                flags.push(format!("{name} pinned at bound {x}"));
            }
            FitParameter { name: name.to_string(), value: x, ci95: quantile * covariance[i][i].max(0.0).sqrt() }
        })
        .collect();
    Ok(FitResult {
        model: model.to_string(),
        parameters,
        derived: Vec::new(),
        covariance,
        residual_norm: outcome.cost.sqrt(),
        initial_residual_norm: outcome.initial_cost.sqrt(),
        reduced_chi_square: red,
        degrees_of_freedom: dof,
        converged: true,
        iterations: outcome.iterations,
        flags,
    })
}

fn condition_number(m: &nalgebra::DMatrix<f64>) -> f64 {
    // scale-free: condition number of the correlation form D⁻¹ M D⁻¹
    let d: Vec<f64> = (0..m.nrows()).map(|i| m[(i, i)].abs().sqrt().max(1e-300)).collect();
    let scaled = nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] / (d[i] * d[j]));
    let sv = scaled.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}
