//! Frequency stability of a locked or free-running cavity mode.
//!
//! Series hold absolute frequency offsets in Hz, not fractional frequency,
//! and the Allan deviation is reported in Hz as well.

use crate::error::{Error, Result};
use log::warn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const MIN_SYNTHETIC_LENGTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySeries {
    /// s.
    pub sample_period: f64,
    /// Hz.
    pub values: Vec<f64>,
    pub label: String,
}

impl FrequencySeries {
    pub fn new(sample_period: f64, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let s = FrequencySeries { sample_period, values, label: label.into() };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_period > 0.0 && self.sample_period.is_finite()) {
            return Err(Error::domain(format!("sample period must be positive, got {}", self.sample_period)));
        }
        if self.values.len() < 2 {
            return Err(Error::domain(format!("need at least 2 samples, got {}", self.values.len())));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::data("frequency series contains non-finite values"));
        }
        Ok(())
    }

    /// Record length `N·τ₀` (s).
    pub fn span(&self) -> f64 {
        self.values.len() as f64 * self.sample_period
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllanCurve {
    /// s.
    pub taus: Vec<f64>,
    /// Hz.
    pub deviations: Vec<f64>,
    /// Number of second differences averaged at each tau.
    pub n_samples: Vec<usize>,
}

/// Octave-spaced averaging times `τ₀, 2τ₀, 4τ₀, …` up to a third of the record.
pub fn default_taus(series: &FrequencySeries) -> Vec<f64> {
    let max_m = series.values.len() / 3;
    std::iter::successors(Some(1usize), |m| m.checked_mul(2))
        .take_while(|&m| m <= max_m)
        .map(|m| m as f64 * series.sample_period)
        .collect()
}

/// Overlapping Allan deviation at each requested averaging time.
///
/// Taus that are not whole multiples of the sample period are rounded down
/// (with a warning); duplicates after rounding are dropped.
pub fn allan_deviation(series: &FrequencySeries, taus: &[f64]) -> Result<AllanCurve> {
    series.validate()?;
    let n = series.values.len();
    let max_m = n / 3;
    if max_m == 0 {
        return Err(Error::domain(format!("series of {n} samples is too short for any averaging time")));
    }
    let t0 = series.sample_period;
    let mut ms = Vec::with_capacity(taus.len());
    for &tau in taus {
        let ratio = tau / t0;
        let m = (ratio * (1.0 + 1e-9)).floor();
        if !(m >= 1.0) {
            return Err(Error::domain(format!("tau {tau} s is shorter than the sample period {t0} s")));
        }
        if (ratio - m).abs() > 1e-9 * ratio {
            warn!("tau {tau} s is not a multiple of {t0} s; using {} s", m * t0);
        }
        let m = m as usize;
        if m > max_m {
            return Err(Error::domain(format!(
                "tau {tau} s exceeds a third of the {:.6e} s record",
                series.span()
            )));
        }
        ms.push(m);
    }
    ms.sort_unstable();
    ms.dedup();

    // Phase x_k = τ₀·Σ_{j<k}(y_j − ȳ); removing the mean leaves every
    // second difference unchanged and keeps the sums small.
    let mean = series.values.iter().sum::<f64>() / n as f64;
    let mut phase = Vec::with_capacity(n + 1);
    phase.push(0.0);
    let mut acc = 0.0;
    for y in &series.values {
        acc += (y - mean) * t0;
        phase.push(acc);
    }

    let mut curve = AllanCurve { taus: Vec::new(), deviations: Vec::new(), n_samples: Vec::new() };
    for m in ms {
        let terms = n + 1 - 2 * m;
        let sum: f64 = (0..terms)
            .map(|i| {
                let d = phase[i + 2 * m] - 2.0 * phase[i + m] + phase[i];
                d * d
            })
            .sum();
        let tau = m as f64 * t0;
        curve.taus.push(tau);
        curve.deviations.push((sum / (2.0 * tau * tau * terms as f64)).sqrt());
        curve.n_samples.push(terms);
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// Independent Gaussian offsets with standard deviation `level`.
    WhiteFm,
    /// Cumulative sum of Gaussian steps with standard deviation `level`.
    RandomWalkFm,
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::WhiteFm => "white_fm",
            NoiseKind::RandomWalkFm => "random_walk_fm",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "white_fm" => Ok(NoiseKind::WhiteFm),
            "random_walk_fm" => Ok(NoiseKind::RandomWalkFm),
            other => Err(Error::Usage(format!(
                "unknown noise kind {other:?} (expected white_fm or random_walk_fm)"
            ))),
        }
    }
}

pub fn synthesize_noise(kind: NoiseKind, level: f64, n: usize, sample_period: f64, seed: u64) -> Result<FrequencySeries> {
    if n < MIN_SYNTHETIC_LENGTH {
        return Err(Error::domain(format!("need at least {MIN_SYNTHETIC_LENGTH} samples, got {n}")));
    }
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::domain(format!("noise level must be ≥ 0, got {level}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..n).map(|_| level * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng));
    let values: Vec<f64> = match kind {
        NoiseKind::WhiteFm => draws.collect(),
        NoiseKind::RandomWalkFm => draws
            .scan(0.0, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect(),
    };
    FrequencySeries::new(sample_period, values, kind.to_string())
}

/// Least-squares slope of `log σ` against `log τ`.
pub fn log_log_slope(curve: &AllanCurve) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve
        .taus
        .iter()
        .zip(&curve.deviations)
        .filter(|(_, d)| **d > 0.0)
        .map(|(t, d)| (t.ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_has_zero_deviation() {
        let s = FrequencySeries::new(0.1, vec![5e6; 300], "flat").unwrap();
        let c = allan_deviation(&s, &default_taus(&s)).unwrap();
        assert!(c.deviations.iter().all(|&d| d == 0.0));
        assert_eq!(c.taus.len(), 7);
    }

    #[test]
    fn hand_computed_pair() {
        // y = [0, 2, 0, 2]; m = 1: differences ±2 → σ² = ½·4 = 2
        let s = FrequencySeries::new(1.0, vec![0.0, 2.0, 0.0, 2.0], "alt").unwrap();
        let c = allan_deviation(&s, &[1.0]).unwrap();
        assert!((c.deviations[0] - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(c.n_samples[0], 3);
    }

    #[test]
    fn tau_rounding_and_limits() {
        let s = synthesize_noise(NoiseKind::WhiteFm, 1.0, 90, 0.5, 1).unwrap();
        let c = allan_deviation(&s, &[1.2, 1.0]).unwrap();
        assert_eq!(c.taus, vec![1.0]);
        assert!(allan_deviation(&s, &[0.2]).is_err());
        assert!(allan_deviation(&s, &[16.0]).is_err());
        assert!(FrequencySeries::new(0.5, vec![1.0], "x").is_err());
        assert!(FrequencySeries::new(0.0, vec![1.0, 2.0], "x").is_err());
    }

    #[test]
    fn white_noise_level_and_determinism() {
        let s = synthesize_noise(NoiseKind::WhiteFm, 3e5, 100_000, 1e-3, 11).unwrap();
        let n = s.values.len() as f64;
        let mean = s.values.iter().sum::<f64>() / n;
        let sd = (s.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((sd / 3e5 - 1.0).abs() < 0.03);
        assert_eq!(s, synthesize_noise(NoiseKind::WhiteFm, 3e5, 100_000, 1e-3, 11).unwrap());
        let z = synthesize_noise(NoiseKind::RandomWalkFm, 0.0, 64, 1.0, 2).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
        assert!(synthesize_noise(NoiseKind::WhiteFm, 1.0, 15, 1.0, 2).is_err());
    }

    #[test]
    fn unknown_kind_is_usage_error() {
        assert!(matches!("pink".parse::<NoiseKind>(), Err(Error::Usage(_))));
        assert_eq!("random_walk_fm".parse::<NoiseKind>().unwrap(), NoiseKind::RandomWalkFm);
    }
}
