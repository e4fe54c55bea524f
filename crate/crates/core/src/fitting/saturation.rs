use super::{levenberg_marquardt, summarise, Bounds, FitResult, LmOptions};
use crate::error::{Error, Result};
use crate::saturation::SaturationPoint;

const MIN_POINTS: usize = 4;
const MIN_POWER_RATIO: f64 = 5.0;

/// Weighted fit of `α = α₀/(1 + P/P_sat)` to `(P, α, σ)` points.
///
/// Seeds: `α₀` at the largest measured `α`, `P_sat` at the median power.
/// Designs with fewer than four points, a power span under a factor of
/// five, or all powers well below the fitted `P_sat` are fitted anyway but
/// flagged; their intervals come out correspondingly wide.
pub fn fit_saturation(points: &[SaturationPoint]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::data(format!("saturation fit needs at least 2 points, got {}", points.len())));
    }
    for p in points {
        if !(p.power >= 0.0 && p.power.is_finite() && p.alpha.is_finite() && p.sigma > 0.0) {
            return Err(Error::data(format!("invalid saturation point {p:?}")));
        }
    }
    let mut powers: Vec<f64> = points.iter().map(|p| p.power).collect();
    powers.sort_by(f64::total_cmp);
    let p_max = powers[powers.len() - 1];
    if !(p_max > 0.0) {
        return Err(Error::data("saturation fit needs at least one positive power"));
    }
    let median = if powers.len() % 2 == 1 {
        powers[powers.len() / 2]
    } else {
        0.5 * (powers[powers.len() / 2 - 1] + powers[powers.len() / 2])
    };
    let p_seed = if median > 0.0 { median } else { p_max };
    let a_seed = points.iter().map(|p| p.alpha).fold(f64::NEG_INFINITY, f64::max);

    let mut flags = Vec::new();
    let p_min_pos = powers.iter().cloned().find(|&p| p > 0.0).unwrap_or(p_max);
    if points.len() < MIN_POINTS || p_max / p_min_pos < MIN_POWER_RATIO {
        flags.push(format!(
            "sparse design: {} points spanning a power ratio of {:.2} (want ≥ {MIN_POINTS} points over ≥ {MIN_POWER_RATIO})",
            points.len(),
            p_max / p_min_pos
        ));
    }

    let residuals = |q: &[f64]| -> Result<Vec<f64>> {
        Ok(points.iter().map(|p| (q[0] / (1.0 + p.power / q[1]) - p.alpha) / p.sigma).collect())
    };
    let bounds = Bounds { lower: vec![f64::NEG_INFINITY, 1e-9 * p_seed], upper: vec![f64::INFINITY; 2] };
    let outcome = levenberg_marquardt(
        residuals,
        &[a_seed, p_seed],
        &[a_seed.abs().max(1e-12), p_seed],
        &bounds,
        &LmOptions::default(),
    )?;
    if p_max < 0.2 * outcome.params[1] {
        flags.push(format!(
            "ill-conditioned: highest power {p_max:.3e} W is well below the fitted P_sat {:.3e} W",
            outcome.params[1]
        ));
    }
    summarise("saturation", &["alpha0", "p_sat"], &outcome, &bounds, flags)
}
