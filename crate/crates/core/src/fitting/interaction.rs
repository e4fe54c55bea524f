use super::{levenberg_marquardt, summarise, Bounds, FitResult, LmOptions};
use crate::cavity::{transfer_function_at, RingParams};
use crate::error::Result;
use crate::spectrum::SpectrumTrace;
use crate::vapor::{refractive_index, RbD2Line, VaporState};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionFitOptions {
    /// Also fit a multiplicative transmission scale.
    pub fit_scale: bool,
    pub initial_if: f64,
    /// Largest interaction factor tried when scanning for a starting point.
    pub seed_scan_max: f64,
    pub lm: LmOptions,
}

impl Default for InteractionFitOptions {
    fn default() -> Self {
        InteractionFitOptions { fit_scale: true, initial_if: 0.5, seed_scan_max: 2.0, lm: LmOptions::default() }
    }
}

/// `|E_out|²` of the clad ring at `detuning` from the ring resonance, with
/// the vapor index evaluated at the same optical frequency.
pub fn interaction_model(
    detunings: &[f64],
    ring: &RingParams,
    vapor: &VaporState,
    line: &RbD2Line,
    interaction_factor: f64,
) -> Result<Vec<f64>> {
    let indices = vapor_indices(detunings, ring, vapor, line);
    model(detunings, ring, &indices, interaction_factor, 1.0)
}

fn vapor_indices(detunings: &[f64], ring: &RingParams, vapor: &VaporState, line: &RbD2Line) -> Vec<Complex64> {
    let nu0 = ring.resonance_frequency();
    detunings
        .iter()
        .map(|&d| refractive_index(nu0 + d - line.center_frequency, vapor, line))
        .collect()
}

fn model(detunings: &[f64], ring: &RingParams, indices: &[Complex64], if_: f64, scale: f64) -> Result<Vec<f64>> {
    let nu0 = ring.resonance_frequency();
    detunings
        .iter()
        .zip(indices)
        .map(|(&d, &n)| Ok(scale * transfer_function_at(nu0 + d, ring, n, if_)?.norm_sqr()))
        .collect()
}

/// Fits the interaction factor (and optionally a transmission scale) with
/// the ring and vapor held fixed. `IF` is constrained to be non-negative;
/// a result at zero is flagged.
///
/// The residual has several local minima in `IF`, so the starting point is
/// the best of `initial_if` and a grid of 41 values on `[0, seed_scan_max]`,
/// each with its least-squares scale.
pub fn fit_interaction_factor(
    trace: &SpectrumTrace,
    ring: &RingParams,
    vapor: &VaporState,
    line: &RbD2Line,
    opts: &InteractionFitOptions,
) -> Result<FitResult> {
    ring.validate()?;
    vapor.validate()?;
    let x = trace.detunings();
    let y = trace.transmission();
    let indices = vapor_indices(x, ring, vapor, line);
    let residuals = |p: &[f64]| -> Result<Vec<f64>> {
        let scale = if opts.fit_scale { p[1] } else { 1.0 };
        let m = model(x, ring, &indices, p[0], scale)?;
        Ok(m.iter().zip(y).map(|(m, t)| m - t).collect())
    };
    let (if0, scale0) = seed(x, y, ring, &indices, opts)?;
    let (names, x0, scales, bounds): (&[&str], Vec<f64>, Vec<f64>, Bounds) = if opts.fit_scale {
        (
            &["interaction_factor", "scale"],
            vec![if0, scale0],
            vec![0.5, 1.0],
            Bounds { lower: vec![0.0, f64::NEG_INFINITY], upper: vec![f64::INFINITY; 2] },
        )
    } else {
        (
            &["interaction_factor"],
            vec![if0],
            vec![0.5],
            Bounds { lower: vec![0.0], upper: vec![f64::INFINITY] },
        )
    };
    let outcome = levenberg_marquardt(residuals, &x0, &scales, &bounds, &opts.lm)?;
    summarise("interaction_factor", names, &outcome, &bounds, Vec::new())
}

fn seed(
    x: &[f64],
    y: &[f64],
    ring: &RingParams,
    indices: &[Complex64],
    opts: &InteractionFitOptions,
) -> Result<(f64, f64)> {
    const GRID: usize = 41;
    let candidates = std::iter::once(opts.initial_if.max(0.0))
        .chain((0..GRID).map(|i| opts.seed_scan_max * i as f64 / (GRID - 1) as f64));
    let mut best = (f64::INFINITY, opts.initial_if.max(0.0), 1.0);
    for if_ in candidates {
        let m = model(x, ring, indices, if_, 1.0)?;
        let scale = if opts.fit_scale {
            let mm: f64 = m.iter().map(|v| v * v).sum();
            if mm > 0.0 {
                m.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / mm
            } else {
                1.0
            }
        } else {
            1.0
        };
        let cost: f64 = m.iter().zip(y).map(|(a, b)| (scale * a - b).powi(2)).sum();
        if cost < best.0 {
            best = (cost, if_, scale);
        }
    }
    Ok((best.1, best.2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::{CouplingRegime, DEFAULT_RADIUS};
    use crate::spectrum::{linear_grid, TraceMeta};

    fn setup() -> (RingParams, VaporState, RbD2Line) {
        let line = RbD2Line::rb87();
        let ring = RingParams::from_q_contrast(DEFAULT_RADIUS, 1.6, line.wavelength(), 2.2e5, 0.8, CouplingRegime::Under)
            .unwrap();
        let vapor = VaporState::at_temperature(373.15, &line).unwrap();
        (ring, vapor, line)
    }

    #[test]
    fn zero_factor_is_bare_ring() {
        let (ring, vapor, line) = setup();
        let x = linear_grid(-3e9, 3e9, 61);
        let clad = interaction_model(&x, &ring, &vapor, &line, 0.0).unwrap();
        let bare = interaction_model(&x, &ring, &vapor.with_density(0.0), &line, 0.7).unwrap();
        for (a, b) in clad.iter().zip(&bare) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_roundtrip() {
        let (ring, vapor, line) = setup();
        let x = linear_grid(-4e9, 4e9, 161);
        let y = interaction_model(&x, &ring, &vapor, &line, 0.3).unwrap();
        let trace = SpectrumTrace::new(x, y, TraceMeta::default()).unwrap();
        let fit = fit_interaction_factor(&trace, &ring, &vapor, &line, &InteractionFitOptions::default()).unwrap();
        assert!((fit.value("interaction_factor").unwrap() - 0.3).abs() < 1e-7);
        assert!((fit.value("scale").unwrap() - 1.0).abs() < 1e-7);
    }
}
