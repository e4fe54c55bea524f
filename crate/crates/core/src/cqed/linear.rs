use super::ensemble::{configuration_seed, place_atoms, AtomEnsemble, EnsembleSpec};
use crate::cavity::CavityRates;
use crate::error::{Error, Result};
use crate::spectrum::{check_grid, SpectrumTrace, TraceMeta};
use num_complex::Complex64;
use rayon::prelude::*;

pub const DEFAULT_N_CONFIGS: usize = 100;

/// Minimum prominence of a dip, in transmission units, for
/// [`extract_splitting`] to count it.
pub const SPLITTING_PROMINENCE: f64 = 0.02;

/// `Σ_j g_j²/(γ + i(Δ − δ_j))` at probe detuning `Δ`.
pub fn self_energy(ensemble: &AtomEnsemble, gamma: f64, detuning: f64) -> Complex64 {
    ensemble
        .atoms
        .iter()
        .map(|a| a.coupling * a.coupling / Complex64::new(gamma, detuning - a.detuning))
        .sum()
}

/// Weak-drive power transmission `|1 − 2κ_ext·a/√(2κ_ext)a_in|²` of the bus
/// waveguide for one configuration.
pub fn weak_drive_spectrum(
    ensemble: &AtomEnsemble,
    rates: &CavityRates,
    gamma: f64,
    detunings: &[f64],
) -> Result<SpectrumTrace> {
    if !(rates.kappa > 0.0 && gamma > 0.0) {
        return Err(Error::domain(format!(
            "κ and γ must be positive, got κ={} γ={gamma}",
            rates.kappa
        )));
    }
    check_grid(detunings)?;
    let transmission = detunings
        .iter()
        .map(|&d| rates.field_transmission(d, self_energy(ensemble, gamma, d)).norm_sqr())
        .collect();
    let meta = TraceMeta {
        seed: Some(ensemble.seed),
        temperature_k: Some(ensemble.temperature),
        ..TraceMeta::default()
    };
    SpectrumTrace::new(detunings.to_vec(), transmission, meta)
}

/// Pointwise mean and standard error over configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedSpectrum {
    pub mean: SpectrumTrace,
    /// Standard error of the mean per grid point; zero for a single
    /// configuration.
    pub sem: Vec<f64>,
    pub n_configs: usize,
}

/// Pointwise mean of `generator(0..n_configs)`.
///
/// Configurations are evaluated in parallel but summed in index order, so
/// the result does not depend on scheduling.
pub fn average_spectra<F>(generator: F, n_configs: usize) -> Result<SpectrumTrace>
where
    F: Fn(usize) -> Result<SpectrumTrace> + Sync,
{
    Ok(average_spectra_with_error(generator, n_configs)?.mean)
}

pub fn average_spectra_with_error<F>(generator: F, n_configs: usize) -> Result<AveragedSpectrum>
where
    F: Fn(usize) -> Result<SpectrumTrace> + Sync,
{
    if n_configs == 0 {
        return Err(Error::domain("n_configs must be at least 1"));
    }
    let traces: Vec<SpectrumTrace> = (0..n_configs)
        .into_par_iter()
        .map(&generator)
        .collect::<Result<_>>()?;
    let first = &traces[0];
    let npts = first.len();
    let mut sum = vec![0.0; npts];
    for t in &traces {
        if t.detunings() != first.detunings() {
            return Err(Error::data("configurations were evaluated on different grids"));
        }
        for (s, v) in sum.iter_mut().zip(t.transmission()) {
            *s += v;
        }
    }
    let n = n_configs as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let sem = if n_configs > 1 {
        let mut ss = vec![0.0; npts];
        for t in &traces {
            for ((acc, v), m) in ss.iter_mut().zip(t.transmission()).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        ss.iter().map(|s| (s / (n - 1.0) / n).sqrt()).collect()
    } else {
        vec![0.0; npts]
    };
    let mut meta = first.meta.clone();
    meta.seed = None;
    Ok(AveragedSpectrum {
        mean: SpectrumTrace::new(first.detunings().to_vec(), mean, meta)?,
        sem,
        n_configs,
    })
}

/// Monte-Carlo average of weak-drive spectra over freshly placed ensembles,
/// configuration `i` drawing from [`configuration_seed`]`(seed, i)`.
pub fn simulate_average(
    spec: &EnsembleSpec,
    rates: &CavityRates,
    gamma: f64,
    detunings: &[f64],
    n_configs: usize,
    seed: u64,
) -> Result<AveragedSpectrum> {
    let mut out = average_spectra_with_error(
        |i| {
            let ensemble = place_atoms(spec, configuration_seed(seed, i as u64))?;
            weak_drive_spectrum(&ensemble, rates, gamma, detunings)
        },
        n_configs,
    )?;
    out.mean.meta.seed = Some(seed);
    out.mean.meta.temperature_k = Some(spec.vapor.temperature);
    Ok(out)
}

/// Separation (Hz) of the two deepest on-grid dips whose prominence is at
/// least [`SPLITTING_PROMINENCE`], or `None` when fewer than two qualify.
pub fn extract_splitting(trace: &SpectrumTrace) -> Result<Option<f64>> {
    check_grid(trace.detunings())?;
    let t = trace.transmission();
    let mut dips: Vec<(usize, f64)> = local_minima(t)
        .into_iter()
        .filter(|&i| prominence(t, i) >= SPLITTING_PROMINENCE)
        .map(|i| (i, t[i]))
        .collect();
    if dips.len() < 2 {
        return Ok(None);
    }
    dips.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let x = trace.detunings();
    Ok(Some((x[dips[0].0] - x[dips[1].0]).abs()))
}

/// Interior minima; a flat bottom is reported at its left end.
fn local_minima(t: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < t.len() {
        if t[i] < t[i - 1] {
            let mut j = i;
            while j + 1 < t.len() && t[j + 1] == t[i] {
                j += 1;
            }
            if j + 1 < t.len() && t[j + 1] > t[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Topographic prominence of the minimum at `i`: the smaller of the highest
/// points reached walking left and right before meeting a lower value.
fn prominence(t: &[f64], i: usize) -> f64 {
    let v = t[i];
    let side = |iter: &mut dyn Iterator<Item = &f64>| {
        let mut peak = v;
        for &x in iter {
            if x < v {
                break;
            }
            peak = peak.max(x);
        }
        peak
    };
    let left = side(&mut t[..i].iter().rev());
    let right = side(&mut t[i + 1..].iter());
    left.min(right) - v
}
