//! Rubidium vapor: saturated density, Doppler statistics and the weak-probe
//! susceptibility of the ⁸⁷Rb D2 line.
//!
//! Detunings are measured from the D2 centre of gravity
//! ([`RbD2Line::center_frequency`]) in Hz.

use crate::constants::{BOLTZMANN, SPEED_OF_LIGHT, TORR};
use crate::error::{Error, Result};
use crate::faddeeva::voigt_response;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

/// Temperature window in which the vapor-pressure correlations are used.
pub const VALID_TEMPERATURE: (f64, f64) = (250.0, 500.0);

/// Default transit dephasing rate (Hz), the same quantity as `γ` in [`crate::cqed`].
pub const DEFAULT_TRANSIT_BROADENING: f64 = 200e6;

const LINE_TABLE: &str = include_str!("../data/rb87_d2.tsv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperfineComponent {
    pub label: String,
    /// Hz, relative to the line centre of gravity.
    pub offset: f64,
    pub strength: f64,
}

/// Spectroscopic data for the D2 manifold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbD2Line {
    /// Hz.
    pub center_frequency: f64,
    /// Natural FWHM in Hz (Γ/2π).
    pub natural_linewidth: f64,
    /// kg.
    pub atomic_mass: f64,
    /// (2J'+1)/(2J+1); 2 for J=1/2 → J'=3/2.
    pub degeneracy_ratio: f64,
    /// Strictly ordered by offset; strengths are positive and sum to 1.
    pub components: Vec<HyperfineComponent>,
}

impl RbD2Line {
    /// ⁸⁷Rb D2 line using the shipped line table.
    pub fn rb87() -> Self {
        Self::from_table(LINE_TABLE).expect("shipped line table is valid")
    }

    /// Parses a tab/space separated table with columns `label offset_Hz strength`.
    /// Lines starting with `#` are comments.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut components = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(Error::data(format!(
                    "line table row {}: expected 3 columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    Error::data(format!("line table row {}: {s:?}: {e}", lineno + 1))
                })
            };
            components.push(HyperfineComponent {
                label: cols[0].to_string(),
                offset: parse(cols[1])?,
                strength: parse(cols[2])?,
            });
        }
        let line = RbD2Line {
            center_frequency: 384.230_484_468_5e12,
            natural_linewidth: 6.0666e6,
            atomic_mass: 1.443_160_648e-25,
            degeneracy_ratio: 2.0,
            components,
        };
        line.validate()?;
        Ok(line)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::data("line table has no components"));
        }
        if self.components.iter().any(|c| !(c.strength > 0.0)) {
            return Err(Error::data("hyperfine strengths must be positive"));
        }
        if self.components.windows(2).any(|w| !(w[1].offset > w[0].offset)) {
            return Err(Error::data("hyperfine offsets must be strictly increasing"));
        }
        let total: f64 = self.components.iter().map(|c| c.strength).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::data(format!("hyperfine strengths sum to {total}, expected 1")));
        }
        Ok(())
    }

    /// Vacuum wavelength at the centre of gravity.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.center_frequency
    }

    /// A single-component line at zero offset; useful as a two-level stand-in.
    pub fn two_level(&self, degeneracy_ratio: f64) -> Self {
        RbD2Line {
            degeneracy_ratio,
            components: vec![HyperfineComponent {
                label: "two-level".into(),
                offset: 0.0,
                strength: 1.0,
            }],
            ..self.clone()
        }
    }

    /// Line-strength constant `K = λ³·(g'/g)·Γ/(8π²)` in m³·Hz, so that a
    /// homogeneous component contributes `χ = −n·K/(δ + iγ)`.
    fn strength_constant(&self) -> f64 {
        let lambda = self.wavelength();
        lambda.powi(3) * self.degeneracy_ratio * self.natural_linewidth / (8.0 * PI * PI)
    }
}

/// Saturated vapor-pressure correlations, both returning torr.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VaporPressureModel {
    /// Liquid rubidium, `log₁₀P = A − B/T + C·T + D·log₁₀T` with
    /// A = 15.88253, B = 4529.635, C = 0.00058663, D = −2.99138
    /// (Nesmeyanov, via Steck's alkali data sheets).
    #[default]
    Nesmeyanov,
    /// Liquid rubidium, two-coefficient form `log₁₀P = 7.193 − 4040/T`
    /// (Alcock, Itkin & Horrigan, Can. Metall. Q. 23, 309 (1984)).
    Alcock,
}

impl VaporPressureModel {
    /// Vapor pressure in torr.
    pub fn pressure_torr(self, temperature: f64) -> f64 {
        let t = temperature;
        let log_p = match self {
            VaporPressureModel::Nesmeyanov => {
                15.882_53 - 4529.635 / t + 0.000_586_63 * t - 2.991_38 * t.log10()
            }
            VaporPressureModel::Alcock => 2.881 + 4.312 - 4040.0 / t,
        };
        10f64.powf(log_p)
    }
}

fn check_window(temperature: f64) -> Result<()> {
    let (lo, hi) = VALID_TEMPERATURE;
    if !(lo..=hi).contains(&temperature) {
        return Err(Error::domain(format!(
            "temperature {temperature} K outside the vapor-pressure validity window [{lo} K, {hi} K]"
        )));
    }
    Ok(())
}

/// Saturated number density (m⁻³) using the default correlation.
pub fn density_from_temperature(temperature: f64) -> Result<f64> {
    density_with_model(temperature, VaporPressureModel::default())
}

pub fn density_with_model(temperature: f64, model: VaporPressureModel) -> Result<f64> {
    check_window(temperature)?;
    Ok(model.pressure_torr(temperature) * TORR / (BOLTZMANN * temperature))
}

fn check_positive_temperature(temperature: f64) -> Result<()> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::domain(format!("temperature must be positive, got {temperature} K")));
    }
    Ok(())
}

/// Doppler FWHM in Hz: `ν₀·√(8·k_B·T·ln2/(m·c²))`.
pub fn doppler_fwhm(temperature: f64, line: &RbD2Line) -> Result<f64> {
    check_positive_temperature(temperature)?;
    Ok(line.center_frequency
        * (8.0 * BOLTZMANN * temperature * LN_2 / (line.atomic_mass * SPEED_OF_LIGHT.powi(2)))
            .sqrt())
}

/// Standard deviation of the Doppler shift in Hz: `ν₀·√(k_B·T/(m·c²))`.
pub fn doppler_sigma(temperature: f64, line: &RbD2Line) -> Result<f64> {
    check_positive_temperature(temperature)?;
    Ok(line.center_frequency
        * (BOLTZMANN * temperature / (line.atomic_mass * SPEED_OF_LIGHT.powi(2))).sqrt())
}

/// Draws one Doppler detuning (Hz) from the thermal distribution.
pub fn sample_doppler_detuning<R: Rng + ?Sized>(
    temperature: f64,
    line: &RbD2Line,
    rng: &mut R,
) -> Result<f64> {
    let sigma = doppler_sigma(temperature, line)?;
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    Ok(normal.sample(rng))
}

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3; // 2·√(2 ln 2)

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VaporState {
    /// K.
    pub temperature: f64,
    /// m⁻³.
    pub density: f64,
    /// Hz.
    pub doppler_fwhm: f64,
    /// Transit dephasing rate (half width) in Hz.
    pub transit_broadening: f64,
}

impl VaporState {
    /// Saturated vapor at `temperature` with the default transit broadening.
    pub fn at_temperature(temperature: f64, line: &RbD2Line) -> Result<Self> {
        Self::with_model(temperature, line, VaporPressureModel::default())
    }

    pub fn with_model(
        temperature: f64,
        line: &RbD2Line,
        model: VaporPressureModel,
    ) -> Result<Self> {
        Ok(VaporState {
            temperature,
            density: density_with_model(temperature, model)?,
            doppler_fwhm: doppler_fwhm(temperature, line)?,
            transit_broadening: DEFAULT_TRANSIT_BROADENING,
        })
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn with_transit_broadening(mut self, rate: f64) -> Self {
        self.transit_broadening = rate;
        self
    }

    pub fn doppler_sigma(&self) -> f64 {
        self.doppler_fwhm / FWHM_PER_SIGMA
    }

    /// Lorentzian half width of each component: natural HWHM plus transit rate.
    pub fn lorentzian_half_width(&self, line: &RbD2Line) -> f64 {
        0.5 * line.natural_linewidth + self.transit_broadening
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) {
            return Err(Error::domain("vapor temperature must be positive"));
        }
        if !(self.density >= 0.0) || !self.density.is_finite() {
            return Err(Error::domain("vapor density must be finite and non-negative"));
        }
        if !(self.doppler_fwhm >= 0.0) {
            return Err(Error::domain("doppler_fwhm must be non-negative"));
        }
        if !(self.transit_broadening >= 0.0) {
            return Err(Error::domain("transit_broadening must be non-negative"));
        }
        Ok(())
    }
}

/// Weak-probe electric susceptibility at `detuning` (Hz from line centre).
///
/// Each hyperfine component is a Voigt profile with the vapor's Doppler
/// width and a Lorentzian half width of natural HWHM plus transit rate:
/// `χ = i·n·K·Σ_c s_c·V(δ − δ_c)`, with `V` from
/// [`voigt_response`](crate::faddeeva::voigt_response). `Im χ ≥ 0` (absorbing).
pub fn susceptibility(detuning: f64, vapor: &VaporState, line: &RbD2Line) -> Complex64 {
    if vapor.density == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let gamma = vapor.lorentzian_half_width(line);
    let sigma = vapor.doppler_sigma();
    let sum: Complex64 = line
        .components
        .iter()
        .map(|c| c.strength * voigt_response(detuning - c.offset, gamma, sigma))
        .sum();
    Complex64::i() * vapor.density * line.strength_constant() * sum
}

/// Complex refractive index `n = √(1 + χ)`; no small-χ linearisation.
pub fn refractive_index(detuning: f64, vapor: &VaporState, line: &RbD2Line) -> Complex64 {
    (1.0 + susceptibility(detuning, vapor, line)).sqrt()
}

/// Beer-Lambert transmission `exp(−k·Im χ·L)` over a detuning grid.
///
/// `path_length` is the total optical path through the vapor; a double pass
/// through a cell of height `h` is `2h`.
pub fn free_space_transmission(
    path_length: f64,
    vapor: &VaporState,
    line: &RbD2Line,
    detunings: &[f64],
) -> Result<Vec<f64>> {
    if !(path_length > 0.0) {
        return Err(Error::domain(format!("path length must be positive, got {path_length} m")));
    }
    Ok(detunings
        .iter()
        .map(|&d| {
            let k = 2.0 * PI * (line.center_frequency + d) / SPEED_OF_LIGHT;
            let chi = susceptibility(d, vapor, line);
            (-k * chi.im.max(0.0) * path_length).exp()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line() -> RbD2Line {
        RbD2Line::rb87()
    }

    #[test]
    fn line_table_invariants() {
        let l = line();
        assert_eq!(l.components.len(), 6);
        assert!((l.wavelength() - 780.241e-9).abs() < 1e-12);
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(RbD2Line::from_table("a 1 0.5\nb 0 0.5\n").is_err());
        assert!(RbD2Line::from_table("a 0 0.5\nb 1 0.4\n").is_err());
        assert!(RbD2Line::from_table("a 0 -0.5\nb 1 1.5\n").is_err());
        assert!(RbD2Line::from_table("a 0\n").is_err());
    }

    #[test]
    fn density_at_boiling_point_near_reported() {
        let n = density_from_temperature(373.15).unwrap();
        assert!((n / 4.7e18 - 1.0).abs() < 0.10, "{n:e}");
    }

    #[test]
    fn density_at_50c_hand_evaluated() {
        // log10 P = 15.88253 − 4529.635/323.15 + 0.00058663·323.15 − 2.99138·log10(323.15)
        //         = −5.451610  →  P = 3.53500e-6 Torr = 4.71295e-4 Pa
        // n = P / (k_B·T) = 4.71295e-4 / 4.46157e-21 = 1.05634e17 m⁻³
        let n = density_from_temperature(323.15).unwrap();
        assert!((n / 1.05634e17 - 1.0).abs() < 1e-4, "{n:e}");
    }

    #[test]
    fn density_window_is_enforced() {
        let err = density_from_temperature(200.0).unwrap_err().to_string();
        assert!(err.contains("250") && err.contains("500"), "{err}");
        assert!(density_from_temperature(600.0).is_err());
    }

    #[test]
    fn alcock_is_within_thirty_percent() {
        let a = density_with_model(373.15, VaporPressureModel::Alcock).unwrap();
        let b = density_with_model(373.15, VaporPressureModel::Nesmeyanov).unwrap();
        assert!((a / b - 1.0).abs() < 0.3);
    }

    #[test]
    fn doppler_width_values() {
        let l = line();
        let w = doppler_fwhm(373.0, &l).unwrap();
        assert!((w / 5.69e8 - 1.0).abs() < 3e-3, "{w:e}");
        let w1 = doppler_fwhm(100.0, &l).unwrap();
        let w4 = doppler_fwhm(400.0, &l).unwrap();
        assert!((w4 / w1 - 2.0).abs() < 1e-12);
        assert!(doppler_fwhm(1e-12, &l).unwrap() < 1e3);
        assert!(doppler_fwhm(0.0, &l).is_err());
        assert!(doppler_fwhm(-3.0, &l).is_err());
    }

    #[test]
    fn doppler_sampling_statistics() {
        let l = line();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| sample_doppler_detuning(373.0, &l, &mut rng).unwrap())
            .collect();
        let sigma = doppler_sigma(373.0, &l).unwrap();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt());
        assert!((var.sqrt() / sigma - 1.0).abs() < 0.02);
    }

    #[test]
    fn doppler_sampling_passes_ks() {
        use statrs::distribution::{ContinuousCDF, Normal as SNormal};
        let l = line();
        let sigma = doppler_sigma(373.0, &l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut s: Vec<f64> = (0..10_000)
            .map(|_| sample_doppler_detuning(373.0, &l, &mut rng).unwrap())
            .collect();
        s.sort_by(f64::total_cmp);
        let dist = SNormal::new(0.0, sigma).unwrap();
        let n = s.len() as f64;
        let d = s
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = dist.cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        // 1 % critical value, large-n asymptotic
        assert!(d < 1.628 / n.sqrt(), "D = {d}");
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let l = line();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..16)
                .map(|_| sample_doppler_detuning(350.0, &l, &mut rng).unwrap().to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn zero_density_gives_zero_susceptibility() {
        let l = line();
        let v = VaporState::at_temperature(373.15, &l).unwrap().with_density(0.0);
        for &d in &[-3e9, 0.0, 4e9] {
            assert_eq!(susceptibility(d, &v, &l), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn absorption_is_non_negative() {
        let l = line();
        let v = VaporState::at_temperature(393.15, &l).unwrap();
        for k in -200..=200 {
            let d = k as f64 * 5e7;
            assert!(susceptibility(d, &v, &l).im >= 0.0);
        }
    }

    #[test]
    fn two_level_zero_doppler_matches_textbook_formula() {
        use crate::constants::HBAR;
        const EPS0: f64 = 8.854_187_812_8e-12;
        let base = line();
        let tl = base.two_level(3.0);
        let v = VaporState {
            temperature: 300.0,
            density: 2e17,
            doppler_fwhm: 1e-3,
            transit_broadening: 40e6,
        };
        // Two-level atom with dipole fixed by the decay rate,
        // d² = 3π ε₀ ħ c³ Γ / ω³ and χ = −(n d²/ε₀ħ)/(Δ + iΓ_tot/2) in angular units.
        let omega = 2.0 * PI * tl.center_frequency;
        let big_gamma = 2.0 * PI * tl.natural_linewidth;
        let d2 = 3.0 * PI * EPS0 * HBAR * SPEED_OF_LIGHT.powi(3) * big_gamma / omega.powi(3);
        let half_width = big_gamma / 2.0 + 2.0 * PI * v.transit_broadening;
        for &det in &[-900e6, -30e6, 0.0, 12e6, 250e6] {
            let oracle =
                -(v.density * d2 / (EPS0 * HBAR)) / Complex64::new(2.0 * PI * det, half_width);
            let chi = susceptibility(det, &v, &tl);
            assert!((chi - oracle).norm() <= 1e-6 * oracle.norm(), "{det}: {chi} vs {oracle}");
        }
    }

    #[test]
    fn symmetric_line_has_odd_dispersion_and_even_absorption() {
        let base = line();
        let tl = base.two_level(2.0);
        let v = VaporState::at_temperature(360.0, &base).unwrap();
        for &d in &[1e6, 3e8, 2.2e9] {
            let p = susceptibility(d, &v, &tl);
            let m = susceptibility(-d, &v, &tl);
            assert!((m + p.conj()).norm() < 1e-12 * p.norm());
        }
    }

    #[test]
    fn refractive_index_is_near_one() {
        let l = line();
        let v = VaporState::at_temperature(393.15, &l).unwrap();
        let n = refractive_index(-2.4e9, &v, &l);
        let chi = susceptibility(-2.4e9, &v, &l);
        assert!((n - (1.0 + chi / 2.0)).norm() < chi.norm_sqr());
    }

    #[test]
    fn free_space_limits() {
        let l = line();
        let grid: Vec<f64> = (-100..=100).map(|k| k as f64 * 1e8).collect();
        let empty = VaporState::at_temperature(323.15, &l).unwrap().with_density(0.0);
        assert!(free_space_transmission(0.01, &empty, &l, &grid)
            .unwrap()
            .iter()
            .all(|&t| t == 1.0));
        let v = VaporState::at_temperature(323.15, &l).unwrap().with_transit_broadening(0.0);
        let t1 = free_space_transmission(0.004, &v, &l, &grid).unwrap();
        let t2 = free_space_transmission(0.008, &v, &l, &grid).unwrap();
        for (a, b) in t1.iter().zip(&t2) {
            assert!((0.0..=1.0).contains(a));
            assert!((a * a - b).abs() < 1e-12);
        }
        assert!(free_space_transmission(0.0, &v, &l, &grid).is_err());
    }
}
