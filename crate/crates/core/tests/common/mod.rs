#![allow(dead_code)]

use ringqed::cavity::{default_decay_length, CavityRates, CouplingRegime, ModeField, RingParams};
use ringqed::cavity::{DEFAULT_INTERACTION_VOLUME, DEFAULT_RADIUS};
use ringqed::cqed::{AtomCount, EnsembleSpec, ShellRegion, DEFAULT_DEPTH_FACTOR};
use ringqed::vapor::{RbD2Line, VaporState};

pub const G0: f64 = 330e6;
pub const KAPPA: f64 = 445e6;
pub const GAMMA: f64 = 200e6;
pub const CONTRAST: f64 = 0.8;

/// 100 °C device: 53 atoms, Doppler-broadened, in a shell three decay
/// lengths deep.
pub fn hot_device(depth_factor: f64) -> (EnsembleSpec, CavityRates) {
    let line = RbD2Line::rb87();
    let ring = RingParams::new(DEFAULT_RADIUS, 1.6, 0.99, 0.98, line.wavelength()).unwrap().tuned();
    let decay = default_decay_length(line.wavelength(), ring.n_eff).unwrap();
    let mode = ModeField::new(G0, decay, DEFAULT_INTERACTION_VOLUME).unwrap();
    let vapor = VaporState::at_temperature(373.15, &line).unwrap();
    let spec = EnsembleSpec {
        count: AtomCount::Fixed(53),
        region: ShellRegion::around(&ring, &mode, depth_factor).unwrap(),
        vapor,
        line,
        mode,
    };
    let rates = CavityRates::from_contrast(KAPPA, CONTRAST, CouplingRegime::Under).unwrap();
    (spec, rates)
}

pub fn default_hot_device() -> (EnsembleSpec, CavityRates) {
    hot_device(DEFAULT_DEPTH_FACTOR)
}
