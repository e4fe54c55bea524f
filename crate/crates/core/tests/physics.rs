mod common;

use common::{CONTRAST, G0, GAMMA, KAPPA};
use ringqed::cavity::{CavityRates, CouplingRegime};
use ringqed::cqed::{lindblad_steady_state, LindbladSystem};
use ringqed::spectrum::linear_grid;
use ringqed::stability::{allan_deviation, default_taus, log_log_slope, synthesize_noise, AllanCurve, NoiseKind};
use ringqed::vapor::{free_space_transmission, RbD2Line, VaporState};
use ringqed::Error;
use std::f64::consts::PI;

const C: f64 = 299_792_458.0;

/// Beer-Lambert transmission with the Doppler integral done by direct
/// quadrature of Lorentzians, independent of the Faddeeva evaluation.
fn quadrature_transmission(path: f64, vapor: &VaporState, line: &RbD2Line, detuning: f64) -> f64 {
    let gamma = vapor.lorentzian_half_width(line);
    let sigma = vapor.doppler_sigma();
    let lambda = C / line.center_frequency;
    let strength = lambda.powi(3) * line.degeneracy_ratio * line.natural_linewidth / (8.0 * PI * PI);
    let steps = 4000;
    let h = 16.0 * sigma / steps as f64;
    let mut im_chi = 0.0;
    for comp in &line.components {
        let mut acc = 0.0;
        for k in 0..=steps {
            let u = -8.0 * sigma + k as f64 * h;
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            let gauss = (-(u * u) / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
            let x = detuning - comp.offset - u;
            acc += w * gauss * gamma / (gamma * gamma + x * x);
        }
        im_chi += comp.strength * acc * h;
    }
    im_chi *= vapor.density * strength;
    let k = 2.0 * PI * (line.center_frequency + detuning) / C;
    (-k * im_chi * path).exp()
}

/// Positions of the two deepest local minima, refined by a parabola.
fn two_minima(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mut mins: Vec<(f64, f64)> = (1..y.len() - 1)
        .filter(|&i| y[i] < y[i - 1] && y[i] <= y[i + 1])
        .map(|i| {
            let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
            let shift = 0.5 * (a - c) / (a - 2.0 * b + c);
            (x[i] + shift * (x[1] - x[0]), b)
        })
        .collect();
    mins.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (p, q) = (mins[0].0, mins[1].0);
    (p.min(q), p.max(q))
}

#[test]
fn ground_state_dips_at_fifty_celsius() {
    let line = RbD2Line::rb87();
    let vapor = VaporState::at_temperature(323.15, &line).unwrap();
    let path = 0.004;
    let x = linear_grid(-8e9, 8e9, 3201);
    let lib = free_space_transmission(path, &vapor, &line, &x).unwrap();
    let oracle: Vec<f64> = x.iter().map(|&d| quadrature_transmission(path, &vapor, &line, d)).collect();
    for (a, b) in lib.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-6, "{a} {b}");
    }
    let (l1, l2) = two_minima(&x, &lib);
    let (o1, o2) = two_minima(&x, &oracle);
    let sep = l2 - l1;
    assert!((sep / (o2 - o1) - 1.0).abs() < 0.01, "{sep:e}");
    assert!((sep / 6.834_682_61e9 - 1.0).abs() < 0.05, "{sep:e}");
    // both dips clearly resolved and not bottomed out
    let depth = lib.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(depth > 0.01 && depth < 0.9, "{depth}");
}

#[test]
fn saturation_pulls_transmission_back_to_bare_cavity() {
    let rates = CavityRates::from_contrast(KAPPA, CONTRAST, CouplingRegime::Under).unwrap();
    let bare = (1.0 - 2.0 * rates.kappa_ext / rates.kappa).powi(2);
    let mut last = f64::INFINITY;
    for eps in [0.01, 0.2, 0.5, 1.0, 2.0] {
        let mut sys = LindbladSystem {
            atoms: vec![(G0, 0.0)],
            rates,
            gamma: GAMMA,
            dephasing: 0.0,
            drive: eps * KAPPA,
            photon_cutoff: 6,
        };
        let r = loop {
            match lindblad_steady_state(&sys, 0.0) {
                Ok(r) => break r,
                Err(Error::Accuracy(_)) => sys.photon_cutoff += 4,
                Err(e) => panic!("{e}"),
            }
        };
        let gap = (r.transmission - bare).abs();
        assert!(gap < last, "drive {eps}κ: gap {gap} after {last}");
        last = gap;
    }
}

fn slope_between(curve: &AllanCurve, lo: f64, hi: f64) -> f64 {
    let mut sub = curve.clone();
    let keep: Vec<usize> = (0..curve.taus.len()).filter(|&i| curve.taus[i] >= lo && curve.taus[i] <= hi).collect();
    sub.taus = keep.iter().map(|&i| curve.taus[i]).collect();
    sub.deviations = keep.iter().map(|&i| curve.deviations[i]).collect();
    sub.n_samples = keep.iter().map(|&i| curve.n_samples[i]).collect();
    log_log_slope(&sub).unwrap()
}

#[test]
fn white_fm_slope_is_minus_half() {
    let s = synthesize_noise(NoiseKind::WhiteFm, 1e5, 100_000, 1e-3, 3).unwrap();
    let taus: Vec<f64> = (0..=20).map(|k| 1e-3 * (10f64.powf(k as f64 / 5.0)).round()).collect();
    let curve = allan_deviation(&s, &taus).unwrap();
    // central decade of the four available
    let slope = slope_between(&curve, 1e-2, 1e-1);
    assert!((slope + 0.5).abs() < 0.05, "{slope}");
}

#[test]
fn locked_and_unlocked_contrast() {
    let n = 10_000;
    let locked = synthesize_noise(NoiseKind::WhiteFm, 0.3e6, n, 1.0, 10).unwrap();
    let unlocked = synthesize_noise(NoiseKind::RandomWalkFm, 8e6, n, 1.0, 11).unwrap();
    let drift = unlocked.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - unlocked.values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(drift > 100e6, "{drift:e}");
    let lc = allan_deviation(&locked, &default_taus(&locked)).unwrap();
    let uc = allan_deviation(&unlocked, &default_taus(&unlocked)).unwrap();
    assert!(lc.deviations.iter().all(|&d| d < 1e6), "{:?}", lc.deviations);
    assert!(*uc.deviations.last().unwrap() > 100e6, "{:?}", uc.deviations);
}

#[test]
fn allan_offset_and_scale() {
    let s = synthesize_noise(NoiseKind::RandomWalkFm, 2e3, 5000, 0.01, 4).unwrap();
    let taus = default_taus(&s);
    let base = allan_deviation(&s, &taus).unwrap();
    let mut shifted = s.clone();
    shifted.values.iter_mut().for_each(|v| *v += 7.5e8);
    let mut scaled = s.clone();
    scaled.values.iter_mut().for_each(|v| *v *= -3.0);
    let a = allan_deviation(&shifted, &taus).unwrap();
    let b = allan_deviation(&scaled, &taus).unwrap();
    for i in 0..taus.len() {
        assert!((a.deviations[i] / base.deviations[i] - 1.0).abs() < 1e-6);
        assert!((b.deviations[i] / base.deviations[i] - 3.0).abs() < 1e-9);
    }
}
