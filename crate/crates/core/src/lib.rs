//! Warm-vapor cavity QED for atomically-clad microring resonators.
//!
//! The crate is organised by physical subsystem:
//!
//! * [`vapor`]: rubidium vapor density, Doppler statistics and the weak-probe
//!   susceptibility of the D2 line.
//! * [`cavity`]: all-pass microring transfer function, evanescent coupling
//!   profile and photon-number bookkeeping.
//! * [`cqed`]: Monte-Carlo atom ensembles, linear-response (weak drive)
//!   spectra, Rabi-splitting extraction, cooperativity and a small Lindblad
//!   steady-state solver used as an oracle.
//! * [`saturation`]: coupled-oscillator saturation model and the
//!   interaction-factor power law.
//! * [`fitting`]: Levenberg-Marquardt engine and the three fit pipelines.
//! * [`stability`]: overlapping Allan deviation and noise synthesis.
//! * [`interchange`]: the text formats shared with the command line tool.
//!
//! Frequencies, rates and couplings are ordinary frequencies in Hz
//! (i.e. `κ` here is `κ/2π` in angular notation) unless a name says otherwise.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod constants;
pub mod cqed;
pub mod error;
pub mod faddeeva;
pub mod fitting;
pub mod interchange;
pub mod saturation;
pub mod spectrum;
pub mod stability;
pub mod vapor;

pub use error::{Error, Result};
pub use spectrum::{SpectrumTrace, TraceKind, TraceMeta};
