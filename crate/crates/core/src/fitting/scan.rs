use super::{fit_interaction_factor, fit_saturation, interaction_model, FitResult, InteractionFitOptions};
use crate::cavity::RingParams;
use crate::cqed::configuration_seed;
use crate::error::{Error, Result};
use crate::saturation::{interaction_factor_law, SaturationCurve, SaturationPoint};
use crate::spectrum::{SpectrumTrace, TraceKind, TraceMeta};
use crate::vapor::{RbD2Line, VaporState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Synthetic power series: the interaction factor follows the saturation
/// law and each trace gets independent Gaussian noise of standard
/// deviation `noise` (transmission units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLadder {
    /// W.
    pub powers: Vec<f64>,
    pub alpha0: f64,
    /// W.
    pub p_sat: f64,
    pub noise: f64,
    pub seed: u64,
}

pub fn synthesize_power_ladder(
    ladder: &PowerLadder,
    ring: &RingParams,
    vapor: &VaporState,
    line: &RbD2Line,
    detunings: &[f64],
    scenario: &str,
) -> Result<Vec<SpectrumTrace>> {
    if !(ladder.noise >= 0.0) {
        return Err(Error::domain(format!("noise must be ≥ 0, got {}", ladder.noise)));
    }
    ladder
        .powers
        .iter()
        .enumerate()
        .map(|(i, &power)| {
            let alpha = interaction_factor_law(power, ladder.alpha0, ladder.p_sat)?;
            let seed = configuration_seed(ladder.seed, i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let clean = interaction_model(detunings, ring, vapor, line, alpha)?;
            let noisy = clean
                .iter()
                .map(|t| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    (t + ladder.noise * z).max(0.0)
                })
                .collect();
            let meta = TraceMeta {
                scenario: scenario.to_string(),
                kind: TraceKind::Synthetic,
                seed: Some(seed),
                power_w: Some(power),
                temperature_k: Some(vapor.temperature),
            };
            SpectrumTrace::new(detunings.to_vec(), noisy, meta)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationScan {
    pub curve: SaturationCurve,
    /// One interaction-factor fit per trace, in order of increasing power.
    pub interaction_fits: Vec<FitResult>,
    pub fit: FitResult,
}

/// Fits the interaction factor of every trace (each must carry its input
/// power), then fits the saturation law to the resulting `α(P)`, weighting
/// each point by the standard error of its interaction factor.
pub fn saturation_scan(
    traces: &[SpectrumTrace],
    ring: &RingParams,
    vapor: &VaporState,
    line: &RbD2Line,
    opts: &InteractionFitOptions,
) -> Result<SaturationScan> {
    let mut rows = Vec::with_capacity(traces.len());
    for (i, trace) in traces.iter().enumerate() {
        let power = trace
            .meta
            .power_w
            .ok_or_else(|| Error::data(format!("trace {i} has no power_W metadata")))?;
        let fit = fit_interaction_factor(trace, ring, vapor, line, opts)?;
        let alpha = fit.parameters[0].value;
        let sigma = fit.covariance[0][0].max(0.0).sqrt().max(1e-9 * alpha.abs().max(1.0));
        rows.push((SaturationPoint { power, alpha, sigma }, fit));
    }
    rows.sort_by(|a, b| a.0.power.total_cmp(&b.0.power));
    let (points, interaction_fits): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let fit = fit_saturation(&points)?;
    let mut curve = SaturationCurve::new(points)?;
    curve.alpha0 = fit.value("alpha0");
    curve.p_sat = fit.value("p_sat");
    Ok(SaturationScan { curve, interaction_fits, fit })
}
