use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    #[default]
    Simulated,
    Synthetic,
    Measured,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Simulated => "simulated",
            TraceKind::Synthetic => "synthetic",
            TraceKind::Measured => "measured",
        })
    }
}

impl FromStr for TraceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simulated" => Ok(TraceKind::Simulated),
            "synthetic" => Ok(TraceKind::Synthetic),
            "measured" => Ok(TraceKind::Measured),
            other => Err(Error::data(format!("unknown trace kind {other:?}"))),
        }
    }
}

/// Provenance carried alongside a spectrum.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TraceMeta {
    pub scenario: String,
    pub kind: TraceKind,
    pub seed: Option<u64>,
    pub power_w: Option<f64>,
    pub temperature_k: Option<f64>,
}

/// Transmission versus detuning (Hz) on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    detunings: Vec<f64>,
    transmission: Vec<f64>,
    pub meta: TraceMeta,
}

impl SpectrumTrace {
    pub fn new(detunings: Vec<f64>, transmission: Vec<f64>, meta: TraceMeta) -> Result<Self> {
        if detunings.len() != transmission.len() {
            return Err(Error::data(format!(
                "grid has {} points but transmission has {}",
                detunings.len(),
                transmission.len()
            )));
        }
        check_grid(&detunings)?;
        if let Some(t) = transmission.iter().find(|t| !t.is_finite()) {
            return Err(Error::data(format!("non-finite transmission value {t}")));
        }
        Ok(SpectrumTrace { detunings, transmission, meta })
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn transmission(&self) -> &[f64] {
        &self.transmission
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.detunings.iter().copied().zip(self.transmission.iter().copied())
    }

    /// Replaces the transmission values, keeping grid and metadata.
    pub fn with_transmission(&self, transmission: Vec<f64>) -> Result<Self> {
        SpectrumTrace::new(self.detunings.clone(), transmission, self.meta.clone())
    }
}

/// Errors unless `grid` is non-empty, finite and strictly increasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::data("empty detuning grid"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::data("detuning grid contains non-finite values"));
    }
    if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::data(format!(
            "detuning grid not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| start + step * i as f64).collect()
        }
    }
}
