//! Many-atom cavity QED.
//!
//! Atoms are placed at random in the evanescent shell of the ring, each with
//! its own Doppler detuning and position-dependent coupling. The weak-drive
//! spectrum of each configuration follows from the coupled-oscillator
//! self-energy; configurations are averaged in parallel with a fixed-order
//! reduction. A dense Lindblad solver for at most two atoms serves as an
//! oracle for the linear and saturation models.

mod cooperativity;
mod ensemble;
mod lindblad;
mod linear;

pub use cooperativity::{cooperativity_report, Coupling, CooperativityReport};
pub use ensemble::{
    configuration_seed, place_atoms, Atom, AtomCount, AtomEnsemble, EnsembleSpec, ShellRegion,
    DEFAULT_DEPTH_FACTOR,
};
pub use lindblad::{lindblad_steady_state, LindbladResult, LindbladSystem, CONVERGENCE_TOLERANCE};
pub use linear::{
    average_spectra, average_spectra_with_error, extract_splitting, self_energy,
    simulate_average, weak_drive_spectrum, AveragedSpectrum, DEFAULT_N_CONFIGS,
    SPLITTING_PROMINENCE,
};
