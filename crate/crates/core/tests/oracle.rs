mod common;

use common::{GAMMA, G0, KAPPA, CONTRAST};
use ringqed::cavity::{CavityRates, CouplingRegime};
use ringqed::cqed::{lindblad_steady_state, weak_drive_spectrum, AtomEnsemble, LindbladSystem};
use ringqed::spectrum::linear_grid;

fn compare(atoms: Vec<(f64, f64)>, dephasing: f64) -> f64 {
    let rates = CavityRates::from_contrast(KAPPA, CONTRAST, CouplingRegime::Under).unwrap();
    let sys = LindbladSystem {
        atoms: atoms.clone(),
        rates,
        gamma: GAMMA,
        dephasing,
        drive: 0.01 * KAPPA,
        photon_cutoff: 5,
    };
    let x = linear_grid(-3e9, 3e9, 61);
    let ensemble = AtomEnsemble::from_couplings(&atoms, 373.15).unwrap();
    let linear = weak_drive_spectrum(&ensemble, &rates, GAMMA, &x).unwrap();
    let mut worst: f64 = 0.0;
    for (&d, &t) in x.iter().zip(linear.transmission()) {
        let q = lindblad_steady_state(&sys, d).unwrap();
        assert!(q.photon_number < 1e-3, "n = {}", q.photon_number);
        worst = worst.max((q.transmission - t).abs() / t);
    }
    worst
}

#[test]
fn single_atom_matches_linear_response() {
    let worst = compare(vec![(G0, 0.0)], 0.0);
    assert!(worst < 1e-3, "{worst:e}");
}

#[test]
fn detuned_atom_with_dephasing_matches() {
    let worst = compare(vec![(G0, 4e8)], 0.5 * GAMMA);
    assert!(worst < 1e-3, "{worst:e}");
}

#[test]
fn two_atoms_match() {
    let worst = compare(vec![(G0, -2e8), (0.6 * G0, 3e8)], 0.0);
    assert!(worst < 1e-3, "{worst:e}");
}
