use super::{levenberg_marquardt, summarise, Bounds, FitParameter, FitResult, LmOptions};
use crate::error::{Error, Result};
use crate::spectrum::SpectrumTrace;

const MIN_POINTS: usize = 10;
const MIN_SPAN_LINEWIDTHS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianOptions {
    /// Optical frequency (Hz) at zero detuning, used for the derived Q.
    pub reference_frequency: f64,
    pub lm: LmOptions,
}

impl LorentzianOptions {
    pub fn at(reference_frequency: f64) -> Self {
        LorentzianOptions { reference_frequency, lm: LmOptions::default() }
    }
}

/// `baseline·(1 − depth/(1 + ((δ − center)/half_width)²))`.
pub fn lorentzian_dip(detuning: f64, center: f64, half_width: f64, depth: f64, baseline: f64) -> f64 {
    let u = (detuning - center) / half_width;
    baseline * (1.0 - depth / (1.0 + u * u))
}

/// Fits a single Lorentzian dip; parameters `center`, `half_width`,
/// `depth`, `baseline` plus derived `fwhm` and `loaded_q`.
///
/// Seeds: centre at the lowest sample, baseline from the highest tenth of
/// the samples, half width from the half-depth crossings.
pub fn fit_lorentzian(trace: &SpectrumTrace, opts: &LorentzianOptions) -> Result<FitResult> {
    if trace.len() < MIN_POINTS {
        return Err(Error::data(format!(
            "Lorentzian fit needs at least {MIN_POINTS} points, got {}",
            trace.len()
        )));
    }
    let x = trace.detunings();
    let y = trace.transmission();
    let span = x[x.len() - 1] - x[0];
    let guess = initial_guess(x, y);
    if MIN_SPAN_LINEWIDTHS * 2.0 * guess[1] > span {
        return Err(Error::data(format!(
            "trace spans {span:.3e} Hz, less than {MIN_SPAN_LINEWIDTHS} linewidths of ~{:.3e} Hz",
            2.0 * guess[1]
        )));
    }
    let residuals = |p: &[f64]| -> Result<Vec<f64>> {
        Ok(x.iter().zip(y).map(|(&d, &t)| lorentzian_dip(d, p[0], p[1], p[2], p[3]) - t).collect())
    };
    let step = span / (x.len() - 1) as f64;
    let bounds = Bounds {
        lower: vec![f64::NEG_INFINITY, 1e-6 * step, f64::NEG_INFINITY, f64::NEG_INFINITY],
        upper: vec![f64::INFINITY; 4],
    };
    let scales = [guess[1], guess[1], 1.0, 1.0];
    let outcome = levenberg_marquardt(residuals, &guess, &scales, &bounds, &opts.lm)?;
    let mut fit = summarise(
        "lorentzian",
        &["center", "half_width", "depth", "baseline"],
        &outcome,
        &bounds,
        Vec::new(),
    )?;
    let (center, hw) = (outcome.params[0], outcome.params[1]);
    let hw_ci = fit.parameters[1].ci95;
    let nu = opts.reference_frequency + center;
    let q = nu / (2.0 * hw);
    fit.derived = vec![
        FitParameter { name: "fwhm".into(), value: 2.0 * hw, ci95: 2.0 * hw_ci },
        FitParameter { name: "loaded_q".into(), value: q, ci95: q * hw_ci / hw },
    ];
    Ok(fit)
}

fn initial_guess(x: &[f64], y: &[f64]) -> [f64; 4] {
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let top = &sorted[sorted.len() - (sorted.len() / 10).max(1)..];
    let baseline = top.iter().sum::<f64>() / top.len() as f64;
    let imin = (0..y.len()).min_by(|&a, &b| y[a].total_cmp(&y[b])).unwrap_or(0);
    let depth = if baseline != 0.0 { 1.0 - y[imin] / baseline } else { 1.0 };
    let level = baseline * (1.0 - depth / 2.0);
    let left = (0..imin).rev().find(|&i| y[i] >= level).map(|i| x[i]).unwrap_or(x[0]);
    let right = (imin..y.len()).find(|&i| y[i] >= level).map(|i| x[i]).unwrap_or(x[x.len() - 1]);
    let mut half_width = (right - left) / 2.0;
    if !(half_width > 0.0) {
        half_width = (x[x.len() - 1] - x[0]) / 10.0;
    }
    [x[imin], half_width, depth, baseline]
}
