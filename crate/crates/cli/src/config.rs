//! Run configuration.
//!
//! Configs are TOML with one table per block. Every dimensional key carries
//! its unit in the name (`temperature_K`, `g0_Hz`, `powers_W`, ...). Unknown
//! keys are rejected, and all blocks a command needs are checked before any
//! computation starts.
#![allow(non_snake_case)]

use crate::error::CliError;
use ringqed::cavity::{
    default_decay_length, CavityRates, CouplingRegime, ModeField, RingParams, DEFAULT_INTERACTION_VOLUME,
    DEFAULT_RADIUS, KAPPA_Q_TOLERANCE,
};
use ringqed::cqed::{AtomCount, EnsembleSpec, ShellRegion, DEFAULT_DEPTH_FACTOR, DEFAULT_N_CONFIGS};
use ringqed::fitting::{InteractionFitOptions, PowerLadder};
use ringqed::spectrum::{check_grid, linear_grid};
use ringqed::stability::NoiseKind;
use ringqed::vapor::{RbD2Line, VaporPressureModel, VaporState, DEFAULT_TRANSIT_BROADENING};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const CONFIG_DIR_ENV: &str = "RINGQED_CONFIG_DIR";

const PRESETS: &[(&str, &str)] = &[
    ("paper_100C", include_str!("../presets/paper_100C.toml")),
    ("paper_heater_device", include_str!("../presets/paper_heater_device.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.0)
}

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.0 == name).map(|p| p.1)
}

/// Blocks a command can require.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    Vapor,
    Ring,
    Mode,
    Simulation,
    Saturation,
    Allan,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    vapor: Option<RawVapor>,
    ring: Option<RawRing>,
    mode: Option<RawMode>,
    simulation: Option<RawSimulation>,
    saturation: Option<RawSaturation>,
    allan: Option<RawAllan>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVapor {
    temperature_K: Option<f64>,
    transit_broadening_Hz: Option<f64>,
    density_per_m3: Option<f64>,
    pressure_model: Option<VaporPressureModel>,
    /// Hyperfine table replacing the built-in ⁸⁷Rb D2 data.
    line_table: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    radius_m: Option<f64>,
    n_eff: Option<f64>,
    wavelength_m: Option<f64>,
    coupling_r: Option<f64>,
    round_trip_tau: Option<f64>,
    loaded_Q: Option<f64>,
    contrast: Option<f64>,
    kappa_Hz: Option<f64>,
    regime: Option<CouplingRegime>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    g0_Hz: Option<f64>,
    gamma_Hz: Option<f64>,
    decay_length_m: Option<f64>,
    interaction_volume_m3: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    n_configs: Option<usize>,
    seed: Option<u64>,
    atom_count: Option<String>,
    n_atoms: Option<usize>,
    depth_factor: Option<f64>,
    cavity_detuning_Hz: Option<f64>,
    detuning_start_Hz: Option<f64>,
    detuning_stop_Hz: Option<f64>,
    detuning_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSaturation {
    powers_W: Option<Vec<f64>>,
    alpha0: Option<f64>,
    p_sat_W: Option<f64>,
    noise: Option<f64>,
    seed: Option<u64>,
    initial_interaction_factor: Option<f64>,
    detuning_start_Hz: Option<f64>,
    detuning_stop_Hz: Option<f64>,
    detuning_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAllan {
    input: Option<PathBuf>,
    sample_period_s: Option<f64>,
    noise_kind: Option<String>,
    level_Hz: Option<f64>,
    n_samples: Option<usize>,
    seed: Option<u64>,
    taus_s: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct VaporSettings {
    pub state: VaporState,
    pub line: RbD2Line,
    pub model: VaporPressureModel,
}

#[derive(Debug, Clone)]
pub struct RingSettings {
    pub params: RingParams,
    /// Input-output rates used by the ensemble simulation.
    pub rates: CavityRates,
}

#[derive(Debug, Clone)]
pub struct ModeSettings {
    pub field: ModeField,
    /// Atomic coherence decay, Hz.
    pub gamma: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationSettings {
    pub n_configs: usize,
    pub seed: u64,
    pub count: AtomCount,
    pub depth_factor: f64,
    /// Cavity resonance minus the atomic line centre, Hz.
    pub cavity_detuning: f64,
    pub detunings: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SaturationSettings {
    pub powers: Vec<f64>,
    pub alpha0: Option<f64>,
    pub p_sat: Option<f64>,
    pub noise: f64,
    pub seed: u64,
    pub fit: InteractionFitOptions,
    pub detunings: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum AllanSource {
    File { path: PathBuf, sample_period: Option<f64> },
    Synthetic { kind: NoiseKind, level: f64, n: usize, sample_period: f64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct AllanSettings {
    pub source: AllanSource,
    pub taus: Option<Vec<f64>>,
}

/// A validated configuration. Blocks the command did not ask for may be
/// absent.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: String,
    pub vapor: Option<VaporSettings>,
    pub ring: Option<RingSettings>,
    pub mode: Option<ModeSettings>,
    pub simulation: Option<SimulationSettings>,
    pub saturation: Option<SaturationSettings>,
    pub allan: Option<AllanSettings>,
    /// From the mode block, defaulted even when the block is absent (m³).
    pub interaction_volume: f64,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn vapor(&self) -> &VaporSettings {
        self.vapor.as_ref().expect("vapor block validated")
    }

    pub fn ring(&self) -> &RingSettings {
        self.ring.as_ref().expect("ring block validated")
    }

    pub fn mode(&self) -> &ModeSettings {
        self.mode.as_ref().expect("mode block validated")
    }

    pub fn simulation(&self) -> &SimulationSettings {
        self.simulation.as_ref().expect("simulation block validated")
    }

    pub fn saturation(&self) -> &SaturationSettings {
        self.saturation.as_ref().expect("saturation block validated")
    }

    pub fn allan(&self) -> &AllanSettings {
        self.allan.as_ref().expect("allan block validated")
    }

    /// Ensemble description for the Monte-Carlo simulation.
    pub fn ensemble_spec(&self) -> Result<EnsembleSpec, CliError> {
        let vapor = self.vapor();
        let mode = self.mode();
        let sim = self.simulation();
        let region = ShellRegion::around(&self.ring().params, &mode.field, sim.depth_factor)?;
        Ok(EnsembleSpec {
            count: sim.count,
            region,
            vapor: vapor.state,
            line: vapor.line.clone(),
            mode: mode.field,
        })
    }

    /// Cavity rates with the configured cavity detuning applied.
    pub fn simulation_rates(&self) -> CavityRates {
        self.ring().rates.with_detuning(self.simulation().cavity_detuning)
    }

    pub fn power_ladder(&self) -> Result<PowerLadder, CliError> {
        let s = self.saturation();
        let (Some(alpha0), Some(p_sat)) = (s.alpha0, s.p_sat) else {
            return Err(CliError::Validation(
                "synthetic power ladder needs saturation.alpha0 and saturation.p_sat_W".into(),
            ));
        };
        Ok(PowerLadder { powers: s.powers.clone(), alpha0, p_sat, noise: s.noise, seed: s.seed })
    }
}

/// Reads a config from a path. Relative paths that do not exist are looked
/// up in `$RINGQED_CONFIG_DIR`, with and without a `.toml` suffix.
pub fn resolve_config_path(path: &Path) -> Result<PathBuf, CliError> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV) {
            let dir = PathBuf::from(dir);
            for candidate in [dir.join(path), dir.join(path).with_extension("toml")] {
                if candidate.exists() {
                    return Ok(candidate);
                }
            }
        }
    }
    Err(CliError::Io(format!("config file {} not found", path.display())))
}

/// Applies `key.path=value` overrides to a parsed TOML table. Values are
/// read as TOML and fall back to plain strings.
pub fn apply_overrides(table: &mut toml::Table, overrides: &[String]) -> Result<(), CliError> {
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("override {item:?} is not key=value")))?;
        let value = value.trim();
        let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        let parts: Vec<&str> = key.trim().split('.').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(CliError::Usage(format!("bad override key {key:?}")));
        }
        let mut node = &mut *table;
        for part in &parts[..parts.len() - 1] {
            let entry = node
                .entry(part.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            node = entry
                .as_table_mut()
                .ok_or_else(|| CliError::Validation(format!("override {key}: {part} is not a block")))?;
        }
        node.insert(parts[parts.len() - 1].to_string(), parsed);
    }
    Ok(())
}

/// Parses and validates `text`, requiring every block in `needs`.
pub fn parse_config(text: &str, overrides: &[String], needs: &[Block]) -> Result<RunConfig, CliError> {
    let mut table: toml::Table =
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config is not valid TOML: {e}")))?;
    apply_overrides(&mut table, overrides)?;
    let raw: RawConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Validation(format!("config: {}", e.message())))?;
    build(raw, needs)
}

fn build(raw: RawConfig, needs: &[Block]) -> Result<RunConfig, CliError> {
    let need = |b: Block| needs.contains(&b);
    let mut missing = Vec::new();
    if raw.scenario.is_none() {
        missing.push("scenario".to_string());
    }
    // collect every missing key before failing
    let vapor = raw.vapor.unwrap_or_default();
    if need(Block::Vapor) && vapor.temperature_K.is_none() {
        missing.push("vapor.temperature_K".into());
    }
    let ring = raw.ring.unwrap_or_default();
    if need(Block::Ring) {
        if ring.n_eff.is_none() {
            missing.push("ring.n_eff".into());
        }
        let by_coupling = ring.coupling_r.is_some() || ring.round_trip_tau.is_some();
        let by_q = ring.loaded_Q.is_some() || ring.contrast.is_some();
        if by_coupling {
            for (k, v) in [("ring.coupling_r", ring.coupling_r), ("ring.round_trip_tau", ring.round_trip_tau)] {
                if v.is_none() {
                    missing.push(k.into());
                }
            }
        }
        if by_q || !by_coupling {
            for (k, v) in [("ring.loaded_Q", ring.loaded_Q), ("ring.contrast", ring.contrast)] {
                if v.is_none() {
                    missing.push(k.into());
                }
            }
        }
    }
    let mode = raw.mode.unwrap_or_default();
    if need(Block::Mode) && mode.g0_Hz.is_none() {
        missing.push("mode.g0_Hz".into());
    }
    let saturation = raw.saturation.unwrap_or_default();
    if need(Block::Saturation) && saturation.powers_W.is_none() {
        missing.push("saturation.powers_W".into());
    }
    let allan = raw.allan.unwrap_or_default();
    if need(Block::Allan) && allan.input.is_none() {
        for (k, present) in [
            ("allan.noise_kind", allan.noise_kind.is_some()),
            ("allan.level_Hz", allan.level_Hz.is_some()),
            ("allan.n_samples", allan.n_samples.is_some()),
            ("allan.sample_period_s", allan.sample_period_s.is_some()),
        ] {
            if !present {
                missing.push(k.into());
            }
        }
    }
    if !missing.is_empty() {
        return Err(CliError::Validation(format!("missing required keys: {}", missing.join(", "))));
    }

    let vapor_settings = if need(Block::Vapor) || need(Block::Ring) || need(Block::Mode) {
        Some(build_vapor(&vapor)?)
    } else {
        None
    };
    let line = vapor_settings.as_ref().map(|v| v.line.clone()).unwrap_or_else(RbD2Line::rb87);
    let ring_settings = if need(Block::Ring) || need(Block::Mode) {
        if ring.n_eff.is_none() {
            return Err(CliError::Validation("missing required keys: ring.n_eff".into()));
        }
        Some(build_ring(&ring, &line)?)
    } else {
        None
    };
    let mode_settings = if need(Block::Mode) {
        let ring = ring_settings.as_ref().expect("ring built for mode");
        let transit = vapor_settings.as_ref().map(|v| v.state.transit_broadening);
        Some(build_mode(&mode, ring, &line, transit)?)
    } else {
        None
    };
    let simulation = if need(Block::Simulation) {
        Some(build_simulation(raw.simulation.unwrap_or_default())?)
    } else {
        None
    };
    let saturation = if need(Block::Saturation) { Some(build_saturation(saturation)?) } else { None };
    let allan = if need(Block::Allan) { Some(build_allan(allan)?) } else { None };
    let interaction_volume = positive(
        "mode.interaction_volume_m3",
        mode.interaction_volume_m3.unwrap_or(DEFAULT_INTERACTION_VOLUME),
    )?;
    let output_dir = raw.output.and_then(|o| o.directory).unwrap_or_else(|| PathBuf::from("."));

    Ok(RunConfig {
        scenario: raw.scenario.expect("checked above"),
        vapor: vapor_settings,
        ring: ring_settings,
        mode: mode_settings,
        simulation,
        saturation,
        allan,
        interaction_volume,
        output_dir,
    })
}

fn invalid(key: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{key}: {e}"))
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be positive, got {v}")))
    }
}

fn build_vapor(raw: &RawVapor) -> Result<VaporSettings, CliError> {
    let line = match &raw.line_table {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("vapor.line_table {}: {e}", path.display())))?;
            RbD2Line::from_table(&text).map_err(|e| invalid("vapor.line_table", e))?
        }
        None => RbD2Line::rb87(),
    };
    let model = raw.pressure_model.unwrap_or_default();
    let t = raw.temperature_K.expect("checked");
    let mut state = VaporState::with_model(t, &line, model).map_err(|e| invalid("vapor.temperature_K", e))?;
    if let Some(n) = raw.density_per_m3 {
        if !(n >= 0.0 && n.is_finite()) {
            return Err(invalid("vapor.density_per_m3", format!("must be ≥ 0, got {n}")));
        }
        state = state.with_density(n);
    }
    let transit = raw.transit_broadening_Hz.unwrap_or(DEFAULT_TRANSIT_BROADENING);
    if !(transit >= 0.0 && transit.is_finite()) {
        return Err(invalid("vapor.transit_broadening_Hz", format!("must be ≥ 0, got {transit}")));
    }
    state = state.with_transit_broadening(transit);
    state.validate().map_err(|e| invalid("vapor", e))?;
    Ok(VaporSettings { state, line, model })
}

fn build_ring(raw: &RawRing, line: &RbD2Line) -> Result<RingSettings, CliError> {
    let radius = positive("ring.radius_m", raw.radius_m.unwrap_or(DEFAULT_RADIUS))?;
    let n_eff = positive("ring.n_eff", raw.n_eff.expect("checked"))?;
    let wavelength = positive("ring.wavelength_m", raw.wavelength_m.unwrap_or_else(|| line.wavelength()))?;
    let regime = raw.regime.unwrap_or_default();
    let (mut params, rates) = match (raw.coupling_r, raw.round_trip_tau, raw.loaded_Q, raw.contrast) {
        (Some(r), Some(tau), None, None) => {
            let params = RingParams::new(radius, n_eff, r, tau, wavelength)
                .map_err(|e| invalid("ring.coupling_r", e))?
                .tuned();
            let rates = params.rates();
            (params, rates)
        }
        (None, None, Some(q), Some(contrast)) => {
            let params = RingParams::from_q_contrast(radius, n_eff, wavelength, q, contrast, regime)
                .map_err(|e| invalid("ring.loaded_Q", e))?;
            let kappa = raw.kappa_Hz.unwrap_or_else(|| params.kappa.expect("set from Q"));
            let rates = CavityRates::from_contrast(positive("ring.kappa_Hz", kappa)?, contrast, regime)
                .map_err(|e| invalid("ring.contrast", e))?;
            (params, rates)
        }
        _ => {
            return Err(CliError::Validation(
                "ring: give either coupling_r and round_trip_tau, or loaded_Q and contrast".into(),
            ))
        }
    };
    if let Some(k) = raw.kappa_Hz {
        match params.loaded_q {
            Some(_) => {
                params.kappa = Some(k);
                params.validate().map_err(|e| invalid("ring.kappa_Hz", e))?;
            }
            None => {
                let implied = params.kappa_from_coupling();
                if (k / implied - 1.0).abs() > KAPPA_Q_TOLERANCE {
                    return Err(invalid(
                        "ring.kappa_Hz",
                        format!("{k:e} Hz inconsistent with r and τ (implied {implied:e} Hz)"),
                    ));
                }
            }
        }
    }
    Ok(RingSettings { params, rates })
}

fn build_mode(
    raw: &RawMode,
    ring: &RingSettings,
    line: &RbD2Line,
    transit: Option<f64>,
) -> Result<ModeSettings, CliError> {
    let g0 = positive("mode.g0_Hz", raw.g0_Hz.expect("checked"))?;
    let gamma = positive("mode.gamma_Hz", raw.gamma_Hz.or(transit).unwrap_or(DEFAULT_TRANSIT_BROADENING))?;
    let decay = match raw.decay_length_m {
        Some(d) => positive("mode.decay_length_m", d)?,
        None => default_decay_length(line.wavelength(), ring.params.n_eff).map_err(|e| invalid("ring.n_eff", e))?,
    };
    let volume = positive(
        "mode.interaction_volume_m3",
        raw.interaction_volume_m3.unwrap_or(DEFAULT_INTERACTION_VOLUME),
    )?;
    let field = ModeField::new(g0, decay, volume).map_err(|e| invalid("mode", e))?;
    Ok(ModeSettings { field, gamma })
}

fn grid(
    block: &str,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    defaults: (f64, f64, usize),
) -> Result<Vec<f64>, CliError> {
    let start = start.unwrap_or(defaults.0);
    let stop = stop.unwrap_or(defaults.1);
    let n = points.unwrap_or(defaults.2);
    if n < 3 || !(stop > start) {
        return Err(invalid(
            &format!("{block}.detuning_points"),
            format!("need at least 3 points on an increasing range, got {n} on [{start}, {stop}]"),
        ));
    }
    let g = linear_grid(start, stop, n);
    check_grid(&g).map_err(|e| invalid(&format!("{block}.detuning_start_Hz"), e))?;
    Ok(g)
}

fn build_simulation(raw: RawSimulation) -> Result<SimulationSettings, CliError> {
    let count = match raw.atom_count.as_deref().unwrap_or("from_density") {
        "from_density" => AtomCount::FromDensity,
        "poisson" => AtomCount::Poisson,
        "fixed" => AtomCount::Fixed(
            raw.n_atoms
                .ok_or_else(|| CliError::Validation("missing required keys: simulation.n_atoms".into()))?,
        ),
        other => {
            return Err(invalid(
                "simulation.atom_count",
                format!("{other:?} is not one of from_density, poisson, fixed"),
            ))
        }
    };
    let n_configs = raw.n_configs.unwrap_or(DEFAULT_N_CONFIGS);
    if n_configs == 0 {
        return Err(invalid("simulation.n_configs", "must be at least 1"));
    }
    let depth_factor = positive("simulation.depth_factor", raw.depth_factor.unwrap_or(DEFAULT_DEPTH_FACTOR))?;
    let detunings = grid(
        "simulation",
        raw.detuning_start_Hz,
        raw.detuning_stop_Hz,
        raw.detuning_points,
        (-5e9, 5e9, 2001),
    )?;
    if raw.cavity_detuning_Hz.is_some_and(|d| !d.is_finite()) {
        return Err(invalid("simulation.cavity_detuning_Hz", "must be finite"));
    }
    Ok(SimulationSettings {
        n_configs,
        seed: raw.seed.unwrap_or(0),
        count,
        depth_factor,
        cavity_detuning: raw.cavity_detuning_Hz.unwrap_or(0.0),
        detunings,
    })
}

fn build_saturation(raw: RawSaturation) -> Result<SaturationSettings, CliError> {
    let powers = raw.powers_W.expect("checked");
    if powers.len() < 2 {
        return Err(invalid("saturation.powers_W", "need at least two powers"));
    }
    if powers.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
        return Err(invalid("saturation.powers_W", "powers must be finite and ≥ 0"));
    }
    if let Some(a) = raw.alpha0 {
        positive("saturation.alpha0", a)?;
    }
    if let Some(p) = raw.p_sat_W {
        positive("saturation.p_sat_W", p)?;
    }
    let noise = raw.noise.unwrap_or(0.0);
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(invalid("saturation.noise", format!("must be ≥ 0, got {noise}")));
    }
    let mut fit = InteractionFitOptions::default();
    if let Some(x) = raw.initial_interaction_factor {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(invalid("saturation.initial_interaction_factor", "must be ≥ 0"));
        }
        fit.initial_if = x;
    }
    let detunings = grid(
        "saturation",
        raw.detuning_start_Hz,
        raw.detuning_stop_Hz,
        raw.detuning_points,
        (-4e9, 4e9, 401),
    )?;
    Ok(SaturationSettings {
        powers,
        alpha0: raw.alpha0,
        p_sat: raw.p_sat_W,
        noise,
        seed: raw.seed.unwrap_or(0),
        fit,
        detunings,
    })
}

fn build_allan(raw: RawAllan) -> Result<AllanSettings, CliError> {
    if let Some(taus) = &raw.taus_s {
        if taus.is_empty() || taus.iter().any(|t| !(*t > 0.0)) {
            return Err(invalid("allan.taus_s", "taus must be positive"));
        }
    }
    let source = match raw.input {
        Some(path) => AllanSource::File {
            path,
            sample_period: raw.sample_period_s.map(|p| positive("allan.sample_period_s", p)).transpose()?,
        },
        None => {
            let kind: NoiseKind = raw
                .noise_kind
                .expect("checked")
                .parse()
                .map_err(|e| invalid("allan.noise_kind", e))?;
            let level = raw.level_Hz.expect("checked");
            if !(level >= 0.0 && level.is_finite()) {
                return Err(invalid("allan.level_Hz", format!("must be ≥ 0, got {level}")));
            }
            AllanSource::Synthetic {
                kind,
                level,
                n: raw.n_samples.expect("checked"),
                sample_period: positive("allan.sample_period_s", raw.sample_period_s.expect("checked"))?,
                seed: raw.seed.unwrap_or(0),
            }
        }
    };
    Ok(AllanSettings { source, taus: raw.taus_s })
}
