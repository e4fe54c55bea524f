//! Acceptance criteria AC1–AC9. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits non-zero if any
//! criterion fails.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use ringqed::cavity::{intracavity_photons, CavityRates, CouplingRegime, RingParams, DEFAULT_RADIUS};
use ringqed::cqed::{
    cooperativity_report, extract_splitting, lindblad_steady_state, weak_drive_spectrum, AtomCount, AtomEnsemble,
    Coupling, LindbladSystem,
};
use ringqed::fitting::{fit_interaction_factor, fit_saturation, interaction_model, InteractionFitOptions};
use ringqed::saturation::{interaction_factor_law, saturation_input, saturation_photon_number, SaturationPoint};
use ringqed::spectrum::{linear_grid, SpectrumTrace, TraceMeta};
use ringqed::stability::{allan_deviation, default_taus, log_log_slope, synthesize_noise, AllanCurve, NoiseKind};
use ringqed::vapor::{density_from_temperature, RbD2Line, VaporState};
use ringqed_cli::config::{parse_config, preset_text, Block};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = fn() -> Outcome;

fn ac1_cooperativity() -> Outcome {
    let r = cooperativity_report(Coupling::Collective { g: 1e9, n: 53.0 }, 445e6, 200e6).unwrap();
    let pass = (r.c - 5.62).abs() <= 0.01 && (r.c0 - 0.106).abs() <= 0.002;
    outcome(pass, format!("C = {:.4} (5.62 ± 0.01), C/53 = {:.5} (0.106 ± 0.002)", r.c, r.c0))
}

fn ac2_atom_number() -> Outcome {
    let n = density_from_temperature(373.15).unwrap() * 11.2e-18;
    outcome((n - 53.0).abs() <= 5.0, format!("N = {n:.2} (53 ± 5)"))
}

fn ac3_rabi_splitting() -> Outcome {
    let cfg = parse_config(
        preset_text("paper_100C").unwrap(),
        &[],
        &[Block::Vapor, Block::Ring, Block::Mode, Block::Simulation],
    )
    .unwrap();
    let inputs_match = cfg.simulation().n_configs == 100
        && cfg.simulation().count == AtomCount::Fixed(53)
        && cfg.mode().field.peak_coupling == 330e6
        && cfg.ring().rates.kappa == 445e6
        && cfg.mode().gamma == 200e6
        && cfg.vapor().state.temperature == 373.15;
    let start = Instant::now();
    let trace = ringqed_cli::commands::simulate(&cfg).unwrap();
    let elapsed = start.elapsed();
    let s = extract_splitting(&trace).unwrap();
    let pass = inputs_match
        && elapsed < Duration::from_secs(60)
        && s.is_some_and(|s| (s / 1.95e9 - 1.0).abs() <= 0.10);
    outcome(
        pass,
        format!(
            "splitting = {} (1.95 GHz ± 10 %), 100 configurations in {:.2} s",
            s.map(|s| format!("{:.4} GHz", s / 1e9)).unwrap_or_else(|| "none".into()),
            elapsed.as_secs_f64()
        ),
    )
}

fn ac4_photon_numbers() -> Outcome {
    let line = RbD2Line::rb87();
    let n_cav = intracavity_photons(0.8, 3e-9, 2.2e5, line.center_frequency).unwrap();
    let n_sat = saturation_photon_number(200e6, 125e6).unwrap();
    let pass = (0.55..=0.75).contains(&n_cav) && (n_sat - 1.28).abs() <= 0.01;
    outcome(pass, format!("n_cav = {n_cav:.4} ([0.55, 0.75]), n_sat = {n_sat:.4} (1.28 ± 0.01)"))
}

fn ac5_saturation_scaling() -> Outcome {
    let ratio = saturation_input(51.2, 0.033, 200e6).unwrap() / saturation_input(1.0, 0.033, 200e6).unwrap();
    outcome((ratio - 6.8).abs() <= 0.1, format!("P_sat(N = 51.2)/P_sat(N = 1) = {ratio:.4} (6.8 ± 0.1)"))
}

fn ac6_oracle_equivalence() -> Outcome {
    let rates = CavityRates::from_contrast(445e6, 0.8, CouplingRegime::Under).unwrap();
    let sys = LindbladSystem {
        atoms: vec![(330e6, 0.0)],
        rates,
        gamma: 200e6,
        dephasing: 0.0,
        drive: 0.01 * 445e6,
        photon_cutoff: 5,
    };
    let x = linear_grid(-3e9, 3e9, 121);
    let start = Instant::now();
    let ensemble = AtomEnsemble::from_couplings(&sys.atoms, 373.15).unwrap();
    let linear = weak_drive_spectrum(&ensemble, &rates, 200e6, &x).unwrap();
    let mut worst: f64 = 0.0;
    let mut max_n: f64 = 0.0;
    for (&d, &t) in x.iter().zip(linear.transmission()) {
        let q = lindblad_steady_state(&sys, d).unwrap();
        max_n = max_n.max(q.photon_number);
        worst = worst.max((q.transmission - t).abs() / t);
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-3 && max_n < 1e-3 && elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "max relative deviation {worst:.2e} (≤ 1e-3) at n_cav ≤ {max_n:.1e}, cutoff 5, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn ac7_fit_roundtrips() -> Outcome {
    let start = Instant::now();
    let line = RbD2Line::rb87();
    let ring =
        RingParams::from_q_contrast(DEFAULT_RADIUS, 1.6, line.wavelength(), 2.2e5, 0.8, CouplingRegime::Under)
            .unwrap();
    let vapor = VaporState::at_temperature(373.15, &line).unwrap();
    let x = linear_grid(-4e9, 4e9, 401);
    let clean = interaction_model(&x, &ring, &vapor, &line, 0.30).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut worst_if: f64 = 0.0;
    for _ in 0..20 {
        let y: Vec<f64> = clean.iter().map(|t| t + noise.sample(&mut rng)).collect();
        let trace = SpectrumTrace::new(x.clone(), y, TraceMeta::default()).unwrap();
        let fit = fit_interaction_factor(&trace, &ring, &vapor, &line, &InteractionFitOptions::default()).unwrap();
        worst_if = worst_if.max((fit.value("interaction_factor").unwrap() / 0.30 - 1.0).abs());
    }

    let trials = 200;
    let mut covered = 0;
    for _ in 0..trials {
        let points: Vec<SaturationPoint> = (0..8)
            .map(|i| {
                let power = 1e-9 * 2f64.powi(i);
                let alpha = interaction_factor_law(power, 0.4, 10e-9).unwrap() + noise.sample(&mut rng);
                SaturationPoint { power, alpha, sigma: 0.01 }
            })
            .collect();
        let p = fit_saturation(&points).unwrap().parameter("p_sat").unwrap().clone();
        if (p.value - 10e-9).abs() <= p.ci95 {
            covered += 1;
        }
    }
    let coverage = covered as f64 / trials as f64;
    let elapsed = start.elapsed();
    let pass = worst_if <= 0.02 && coverage >= 0.90 && elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!(
            "IF worst error {:.2} % over 20 trials (≤ 2 %), P_sat CI coverage {:.1} % of {trials} (≥ 90 %), {:.2} s",
            100.0 * worst_if,
            100.0 * coverage,
            elapsed.as_secs_f64()
        ),
    )
}

fn central_decade_slope(curve: &AllanCurve, lo: f64, hi: f64) -> f64 {
    let keep: Vec<usize> = (0..curve.taus.len()).filter(|&i| curve.taus[i] >= lo && curve.taus[i] <= hi).collect();
    let sub = AllanCurve {
        taus: keep.iter().map(|&i| curve.taus[i]).collect(),
        deviations: keep.iter().map(|&i| curve.deviations[i]).collect(),
        n_samples: keep.iter().map(|&i| curve.n_samples[i]).collect(),
    };
    log_log_slope(&sub).unwrap()
}

fn ac8_allan() -> Outcome {
    let start = Instant::now();
    let white = synthesize_noise(NoiseKind::WhiteFm, 1e5, 100_000, 1e-3, 3).unwrap();
    let taus: Vec<f64> = (0..=20).map(|k| 1e-3 * (10f64.powf(k as f64 / 5.0)).round()).collect();
    let slope = central_decade_slope(&allan_deviation(&white, &taus).unwrap(), 1e-2, 1e-1);

    let locked = synthesize_noise(NoiseKind::WhiteFm, 0.3e6, 10_000, 1.0, 10).unwrap();
    let unlocked = synthesize_noise(NoiseKind::RandomWalkFm, 8e6, 10_000, 1.0, 11).unwrap();
    let lc = allan_deviation(&locked, &default_taus(&locked)).unwrap();
    let uc = allan_deviation(&unlocked, &default_taus(&unlocked)).unwrap();
    let locked_max = lc.deviations.iter().cloned().fold(0.0, f64::max);
    let unlocked_long = *uc.deviations.last().unwrap();
    let elapsed = start.elapsed();
    let pass = (slope + 0.5).abs() <= 0.05
        && locked_max < 1e6
        && unlocked_long > 100e6
        && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "white-FM slope {slope:.4} (-0.5 ± 0.05), locked max {:.3} MHz (< 1), unlocked at {} s {:.1} MHz (> 100), {:.2} s",
            locked_max / 1e6,
            uc.taus.last().unwrap(),
            unlocked_long / 1e6,
            elapsed.as_secs_f64()
        ),
    )
}

fn ac9_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| {
        Command::new(env!("CARGO_BIN_EXE_ringqed"))
            .args(["--preset", "paper_100C", "-o", out, "simulate-spectrum"])
            .current_dir(dir.path())
            .output()
            .unwrap()
            .status
            .success()
    };
    let ok = run("first") && run("second");
    let a = std::fs::read(dir.path().join("first/paper_100C_spectrum.csv")).unwrap_or_default();
    let b = std::fs::read(dir.path().join("second/paper_100C_spectrum.csv")).unwrap_or_default();
    let pass = ok && !a.is_empty() && a == b;
    outcome(pass, format!("two simulate-spectrum runs, {} bytes each, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let checks: [(&str, &str, Check); 9] = [
        ("AC1", "cooperativity arithmetic", ac1_cooperativity),
        ("AC2", "atom number", ac2_atom_number),
        ("AC3", "Rabi splitting", ac3_rabi_splitting),
        ("AC4", "photon numbers", ac4_photon_numbers),
        ("AC5", "saturation scaling", ac5_saturation_scaling),
        ("AC6", "oracle equivalence", ac6_oracle_equivalence),
        ("AC7", "fit roundtrips", ac7_fit_roundtrips),
        ("AC8", "Allan analysis", ac8_allan),
        ("AC9", "determinism", ac9_determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let o = match std::panic::catch_unwind(check) {
            Ok(o) => o,
            Err(_) => outcome(false, "panicked".into()),
        };
        if !o.pass {
            failed += 1;
        }
        println!("{id} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
