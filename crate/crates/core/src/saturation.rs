//! Coupled-oscillator saturation model.
//!
//! `N` identical atomic oscillators `b_j`, each coupled at rate `g` to a
//! driven cavity mode `a`:
//!
//! ```text
//! ȧ   = i·g·Σ b_j + √(2κ)·a_in − κ·a
//! ḃ_j = i·g·a − γ·b_j
//! ```
//!
//! Here `C₁ = g²/(κγ)` and `C_N = N·C₁` (note: no factor 2, unlike the
//! cooperativity of [`crate::cqed::cooperativity_report`]). The drive
//! `|a_in|²` is a photon flux in photons/s, so `P = |a_in|²·h·ν`. An atom is
//! taken to saturate when `|b_j| = 1`; this is a classical threshold, not a
//! two-level saturation condition.

use crate::constants::PLANCK;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSystem {
    pub n: usize,
    /// Hz.
    pub g: f64,
    /// Hz.
    pub kappa: f64,
    /// Hz.
    pub gamma: f64,
    /// √(photons/s).
    pub a_in: f64,
}

impl OscillatorSystem {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("g", self.g), ("κ", self.kappa), ("γ", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.a_in.is_finite() {
            return Err(Error::domain("drive amplitude must be finite"));
        }
        Ok(())
    }

    /// `g²/(κγ)`.
    pub fn single_cooperativity(&self) -> f64 {
        self.g * self.g / (self.kappa * self.gamma)
    }

    /// `N·g²/(κγ)`.
    pub fn collective_cooperativity(&self) -> f64 {
        self.n as f64 * self.single_cooperativity()
    }

    /// Time derivatives `(ȧ, ḃ_j)` for uniform atomic amplitude `b`.
    pub fn derivatives(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let da = i * self.g * self.n as f64 * b + (2.0 * self.kappa).sqrt() * self.a_in - self.kappa * a;
        let db = i * self.g * a - self.gamma * b;
        (da, db)
    }
}

/// Steady-state cavity amplitude and the common atomic amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub a: Complex64,
    /// One entry per atom; all equal.
    pub b: Vec<Complex64>,
}

pub fn steady_state_amplitudes(sys: &OscillatorSystem) -> Result<SteadyState> {
    sys.validate()?;
    let denom = 1.0 + sys.collective_cooperativity();
    let a = Complex64::new((2.0 * sys.kappa).sqrt() * sys.a_in / (sys.kappa * denom), 0.0);
    let b = Complex64::new(0.0, (2.0 * sys.single_cooperativity()).sqrt() * sys.a_in / (sys.gamma.sqrt() * denom));
    Ok(SteadyState { a, b: vec![b; sys.n] })
}

/// Input photon flux at which `|b_j| = 1`: `(γ/2)(1 + N·C₁)²/C₁`.
pub fn saturation_input(n: f64, c1: f64, gamma: f64) -> Result<f64> {
    if !(c1 > 0.0) || !(n >= 0.0) || !(gamma > 0.0) {
        return Err(Error::domain(format!(
            "need C₁ > 0, N ≥ 0, γ > 0; got C₁={c1} N={n} γ={gamma}"
        )));
    }
    let cn = 1.0 + n * c1;
    Ok(gamma / 2.0 * cn * cn / c1)
}

/// Saturation input power (W) for photons of frequency `frequency`.
pub fn saturation_power(n: f64, c1: f64, gamma: f64, frequency: f64) -> Result<f64> {
    Ok(saturation_input(n, c1, gamma)? * PLANCK * frequency)
}

/// `γ²/(2g₀²)`.
pub fn saturation_photon_number(gamma: f64, g0: f64) -> Result<f64> {
    if !(g0 > 0.0) {
        return Err(Error::domain(format!("g₀ must be positive, got {g0}")));
    }
    Ok(gamma * gamma / (2.0 * g0 * g0))
}

/// `α₀/(1 + P/P_sat)`.
pub fn interaction_factor_law(power: f64, alpha0: f64, p_sat: f64) -> Result<f64> {
    if !(power >= 0.0) || !(p_sat > 0.0) {
        return Err(Error::domain(format!("need P ≥ 0 and P_sat > 0, got P={power} P_sat={p_sat}")));
    }
    Ok(alpha0 / (1.0 + power / p_sat))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationPoint {
    /// W.
    pub power: f64,
    pub alpha: f64,
    /// One-sigma uncertainty of `alpha`.
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationCurve {
    pub points: Vec<SaturationPoint>,
    pub alpha0: Option<f64>,
    pub p_sat: Option<f64>,
}

impl SaturationCurve {
    /// Sorts by power and checks the curve invariants.
    pub fn new(mut points: Vec<SaturationPoint>) -> Result<Self> {
        points.sort_by(|a, b| a.power.total_cmp(&b.power));
        if let Some(p) = points.iter().find(|p| !(p.power > 0.0 && p.power.is_finite())) {
            return Err(Error::data(format!("power must be positive, got {}", p.power)));
        }
        if points.windows(2).any(|w| w[0].power == w[1].power) {
            return Err(Error::data("duplicate power in saturation curve"));
        }
        if let Some(p) = points.iter().find(|p| !(p.alpha >= 0.0 && p.alpha.is_finite())) {
            return Err(Error::data(format!("interaction factor must be ≥ 0, got {}", p.alpha)));
        }
        if let Some(p) = points.iter().find(|p| !(p.sigma > 0.0 && p.sigma.is_finite())) {
            return Err(Error::data(format!("uncertainty must be positive, got {}", p.sigma)));
        }
        Ok(SaturationCurve { points, alpha0: None, p_sat: None })
    }
}
