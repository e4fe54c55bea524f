use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How the atom-cavity coupling is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Collective coupling `g` of `n` atoms.
    Collective { g: f64, n: f64 },
    /// Mean single-atom coupling `g0` of `n` atoms.
    PerAtom { g0: f64, n: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CooperativityReport {
    pub g_collective: f64,
    pub g0_bar: f64,
    /// `g²/(2κγ)`.
    pub c: f64,
    /// `C/N`.
    pub c0: f64,
    pub n: f64,
}

/// Cooperativities for uniform coupling, `g = √N·ḡ₀`.
pub fn cooperativity_report(coupling: Coupling, kappa: f64, gamma: f64) -> Result<CooperativityReport> {
    let (g_collective, g0_bar, n) = match coupling {
        Coupling::Collective { g, n } => (g, g / n.sqrt(), n),
        Coupling::PerAtom { g0, n } => (g0 * n.sqrt(), g0, n),
    };
    for (name, v) in [("g", g_collective), ("N", n), ("κ", kappa), ("γ", gamma)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    let c = g_collective * g_collective / (2.0 * kappa * gamma);
    Ok(CooperativityReport { g_collective, g0_bar, c, c0: c / n, n })
}
