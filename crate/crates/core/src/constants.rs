//! CODATA 2018 exact / recommended values (SI).

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
/// Pascals per torr.
pub const TORR: f64 = 101_325.0 / 760.0;
