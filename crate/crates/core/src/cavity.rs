//! All-pass microring physics.
//!
//! The ring is described by its self-coupling `r`, round-trip amplitude `τ`,
//! effective index and radius. An atomic cladding enters the round-trip
//! wavenumber through the interaction factor `IF`:
//! `k = 2π((n_Rb − 1)·IF + n_eff)/λ`, `E_out = (r − τe^{ikL})/(1 − rτe^{ikL})`.
//!
//! `κ` is the field decay rate expressed as an ordinary frequency, i.e. the
//! half width at half maximum of the bare resonance in Hz.

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_RADIUS: f64 = 20e-6;
/// m³.
pub const DEFAULT_INTERACTION_VOLUME: f64 = 11.2e-18;
/// Relative tolerance between a stated κ and ν/(2Q).
pub const KAPPA_Q_TOLERANCE: f64 = 0.01;

const SINGULAR_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingRegime {
    /// Coupling loss below intrinsic loss (`r > τ`).
    #[default]
    Under,
    /// Coupling loss above intrinsic loss (`r < τ`).
    Over,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    /// m.
    pub radius: f64,
    pub n_eff: f64,
    /// Self-coupling coefficient `r`.
    pub coupling: f64,
    /// Round-trip amplitude `τ`.
    pub round_trip: f64,
    /// Wavelength (m) at which the ring is resonant; detunings are measured from it.
    pub resonance_wavelength: f64,
    pub loaded_q: Option<f64>,
    /// Hz.
    pub kappa: Option<f64>,
}

impl RingParams {
    pub fn new(
        radius: f64,
        n_eff: f64,
        coupling: f64,
        round_trip: f64,
        resonance_wavelength: f64,
    ) -> Result<Self> {
        let ring = RingParams {
            radius,
            n_eff,
            coupling,
            round_trip,
            resonance_wavelength,
            loaded_q: None,
            kappa: None,
        };
        ring.validate()?;
        Ok(ring)
    }

    /// Ring with `r`, `τ` recovered from a loaded Q and dip contrast.
    ///
    /// `rτ` follows from the linewidth, `|r − τ| = (1 − rτ)·√(1 − ΔT)` from the
    /// on-resonance depth; `regime` picks the sign. `n_eff` is nudged to the
    /// nearest value that puts an azimuthal mode exactly at `resonance_wavelength`.
    pub fn from_q_contrast(
        radius: f64,
        n_eff: f64,
        resonance_wavelength: f64,
        loaded_q: f64,
        contrast: f64,
        regime: CouplingRegime,
    ) -> Result<Self> {
        if !(loaded_q > 0.0) {
            return Err(Error::domain(format!("loaded Q must be positive, got {loaded_q}")));
        }
        check_contrast(contrast)?;
        let mut ring = RingParams {
            radius,
            n_eff,
            coupling: 0.5,
            round_trip: 0.5,
            resonance_wavelength,
            loaded_q: Some(loaded_q),
            kappa: None,
        }
        .tuned();
        let nu = ring.resonance_frequency();
        let fwhm = nu / loaded_q;
        let a = PI * fwhm / ring.free_spectral_range();
        let s = (-a + (a * a + 4.0).sqrt()) / 2.0;
        let x = s * s;
        let diff = (1.0 - x) * (1.0 - contrast).sqrt();
        let diff = match regime {
            CouplingRegime::Under => diff,
            CouplingRegime::Over => -diff,
        };
        let r = (diff + (diff * diff + 4.0 * x).sqrt()) / 2.0;
        ring.coupling = r;
        ring.round_trip = x / r;
        ring.kappa = Some(kappa_from_q(loaded_q, nu)?);
        ring.validate()?;
        Ok(ring)
    }

    /// Adjusts `n_eff` so that an integer number of wavelengths fits the ring
    /// at `resonance_wavelength`.
    pub fn tuned(mut self) -> Self {
        let l = self.round_trip_length();
        let order = (self.n_eff * l / self.resonance_wavelength).round().max(1.0);
        self.n_eff = order * self.resonance_wavelength / l;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::domain("ring radius must be positive"));
        }
        if !(self.n_eff > 0.0) {
            return Err(Error::domain("n_eff must be positive"));
        }
        if !(self.coupling > 0.0 && self.coupling < 1.0) {
            return Err(Error::domain(format!("coupling r = {} not in (0, 1)", self.coupling)));
        }
        if !(self.round_trip > 0.0 && self.round_trip <= 1.0) {
            return Err(Error::domain(format!("round-trip τ = {} not in (0, 1]", self.round_trip)));
        }
        if !(self.resonance_wavelength > 0.0) {
            return Err(Error::domain("resonance wavelength must be positive"));
        }
        if let (Some(q), Some(k)) = (self.loaded_q, self.kappa) {
            let expect = kappa_from_q(q, self.resonance_frequency())?;
            if (k / expect - 1.0).abs() > KAPPA_Q_TOLERANCE {
                return Err(Error::domain(format!(
                    "κ = {k:e} Hz inconsistent with Q = {q:e} (expected {expect:e} Hz)"
                )));
            }
        }
        Ok(())
    }

    pub fn round_trip_length(&self) -> f64 {
        2.0 * PI * self.radius
    }

    pub fn resonance_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / self.resonance_wavelength
    }

    /// FSR in Hz with a dispersionless effective index.
    pub fn free_spectral_range(&self) -> f64 {
        SPEED_OF_LIGHT / (self.n_eff * self.round_trip_length())
    }

    /// Half width of the bare resonance implied by `r` and `τ`.
    pub fn kappa_from_coupling(&self) -> f64 {
        let x = self.coupling * self.round_trip;
        self.free_spectral_range() * (1.0 - x) / (2.0 * PI * x.sqrt())
    }

    /// Total and external decay rates equivalent to this ring.
    pub fn rates(&self) -> CavityRates {
        let kappa = self.kappa_from_coupling();
        let x = self.coupling * self.round_trip;
        let depth = (self.coupling - self.round_trip) / (1.0 - x);
        CavityRates { kappa, kappa_ext: 0.5 * kappa * (1.0 - depth), detuning: 0.0 }
    }
}

/// Bare ring field transmission at `detuning` (Hz) from the ring resonance.
///
/// `n_rb` is the vapor refractive index evaluated by the caller at the same
/// optical frequency; `interaction_factor` scales its deviation from 1.
pub fn transfer_function(
    detuning: f64,
    ring: &RingParams,
    n_rb: Complex64,
    interaction_factor: f64,
) -> Result<Complex64> {
    transfer_function_at(ring.resonance_frequency() + detuning, ring, n_rb, interaction_factor)
}

/// As [`transfer_function`] but at an absolute optical frequency (Hz).
pub fn transfer_function_at(
    frequency: f64,
    ring: &RingParams,
    n_rb: Complex64,
    interaction_factor: f64,
) -> Result<Complex64> {
    if !(interaction_factor >= 0.0) {
        return Err(Error::domain(format!(
            "interaction factor must be non-negative, got {interaction_factor}"
        )));
    }
    let lambda = SPEED_OF_LIGHT / frequency;
    let index = (n_rb - 1.0) * interaction_factor + ring.n_eff;
    let phase = index * (2.0 * PI / lambda) * ring.round_trip_length();
    let round = (Complex64::i() * phase).exp();
    let r = ring.coupling;
    let tau = ring.round_trip;
    let denom = 1.0 - r * tau * round;
    if denom.norm() < SINGULAR_THRESHOLD {
        return Err(Error::Singular(denom.norm()));
    }
    Ok((r - tau * round) / denom)
}

/// κ = ν₀/(2Q), Hz.
pub fn kappa_from_q(loaded_q: f64, center_frequency: f64) -> Result<f64> {
    if !(loaded_q > 0.0) {
        return Err(Error::domain(format!("loaded Q must be positive, got {loaded_q}")));
    }
    Ok(center_frequency / (2.0 * loaded_q))
}

fn check_contrast(contrast: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&contrast) {
        return Err(Error::domain(format!("transmission contrast {contrast} outside [0, 1]")));
    }
    Ok(())
}

/// Mean intracavity photon number of an undercoupled all-pass ring,
/// `n = ΔT·P·Q/((1 + √(1 − ΔT))·ħ·ω₀²)`.
pub fn intracavity_photons(
    contrast: f64,
    input_power: f64,
    loaded_q: f64,
    center_frequency: f64,
) -> Result<f64> {
    check_contrast(contrast)?;
    if !(input_power >= 0.0) {
        return Err(Error::domain(format!("input power must be non-negative, got {input_power}")));
    }
    let omega = 2.0 * PI * center_frequency;
    Ok(contrast * input_power * loaded_q / ((1.0 + (1.0 - contrast).sqrt()) * HBAR * omega * omega))
}

/// Cavity decay rates for the input-output (coupled oscillator) picture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityRates {
    /// Total field decay (HWHM), Hz.
    pub kappa: f64,
    /// Decay into the bus waveguide, Hz.
    pub kappa_ext: f64,
    /// Cavity resonance minus the reference (atomic) frequency, Hz.
    pub detuning: f64,
}

impl CavityRates {
    /// Rates for a dip of depth `contrast`: `T_min = (1 − 2κ_ext/κ)²`.
    pub fn from_contrast(kappa: f64, contrast: f64, regime: CouplingRegime) -> Result<Self> {
        check_contrast(contrast)?;
        if !(kappa > 0.0) {
            return Err(Error::domain(format!("κ must be positive, got {kappa}")));
        }
        let root = (1.0 - contrast).sqrt();
        let fraction = match regime {
            CouplingRegime::Under => (1.0 - root) / 2.0,
            CouplingRegime::Over => (1.0 + root) / 2.0,
        };
        Ok(CavityRates { kappa, kappa_ext: kappa * fraction, detuning: 0.0 })
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    /// Field transmission `1 − 2κ_ext/(κ + i(Δ − Δ_c) + S)` for an atomic
    /// self-energy `S`.
    pub fn field_transmission(&self, detuning: f64, self_energy: Complex64) -> Complex64 {
        let denom = Complex64::new(self.kappa, detuning - self.detuning) + self_energy;
        1.0 - 2.0 * self.kappa_ext / denom
    }
}

/// Evanescent coupling profile above the waveguide surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeField {
    /// Coupling at the dielectric surface, Hz.
    pub peak_coupling: f64,
    /// Field decay length, m.
    pub decay_length: f64,
    /// Effective interaction volume, m³.
    pub interaction_volume: f64,
}

impl ModeField {
    pub fn new(peak_coupling: f64, decay_length: f64, interaction_volume: f64) -> Result<Self> {
        let mode = ModeField { peak_coupling, decay_length, interaction_volume };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.peak_coupling > 0.0) {
            return Err(Error::domain("g0 must be positive"));
        }
        if !(self.decay_length > 0.0) {
            return Err(Error::domain("decay length must be positive"));
        }
        if !(self.interaction_volume > 0.0) {
            return Err(Error::domain("interaction volume must be positive"));
        }
        Ok(())
    }
}

/// `λ/(4π·√(n_eff² − 1))`, the evanescent decay length of a guided mode in air.
pub fn default_decay_length(wavelength: f64, n_eff: f64) -> Result<f64> {
    if !(n_eff > 1.0) {
        return Err(Error::domain(format!("n_eff = {n_eff} does not confine light in air")));
    }
    Ok(wavelength / (4.0 * PI * (n_eff * n_eff - 1.0).sqrt()))
}

/// A point in the surface-unrolled frame of the ring: `along` the
/// propagation direction, `across` the exposed waveguide perimeter, and
/// `normal` distance from the dielectric surface (negative inside it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePosition {
    pub along: f64,
    pub across: f64,
    pub normal: f64,
}

/// `g(pos) = g₀·exp(−d/decay_length)`. The traveling-wave mode has no
/// dependence on `along`, and the profile is taken uniform `across`.
pub fn coupling_at_position(position: &SurfacePosition, mode: &ModeField) -> Result<f64> {
    if !(position.normal >= 0.0) {
        return Err(Error::domain(format!(
            "position at normal distance {} m lies inside the dielectric",
            position.normal
        )));
    }
    Ok(mode.peak_coupling * (-position.normal / mode.decay_length).exp())
}

/// Expected atom number `density × interaction_volume` (not rounded).
pub fn atoms_in_mode(density: f64, mode: &ModeField) -> Result<f64> {
    if !(density >= 0.0) {
        return Err(Error::domain(format!("density must be non-negative, got {density}")));
    }
    Ok(density * mode.interaction_volume)
}
