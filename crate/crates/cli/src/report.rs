//! Headline numbers of the model, evaluated for a configuration and
//! compared with their published values.

use crate::commands::simulate;
use crate::config::RunConfig;
use crate::error::CliError;
use ringqed::cavity::intracavity_photons;
use ringqed::cqed::{
    cooperativity_report, extract_splitting, lindblad_steady_state, weak_drive_spectrum, AtomEnsemble, Coupling,
    LindbladSystem,
};
use ringqed::fitting::{saturation_scan, synthesize_power_ladder};
use ringqed::interchange::write_spectrum;
use ringqed::saturation::{saturation_input, saturation_photon_number};
use ringqed::spectrum::linear_grid;
use ringqed::stability::{allan_deviation, log_log_slope, synthesize_noise, NoiseKind};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub quantity: String,
    pub value: f64,
    pub reference: String,
    pub within: bool,
}

fn row(quantity: &str, value: f64, reference: &str, within: bool) -> Row {
    Row { quantity: quantity.into(), value, reference: reference.into(), within }
}

fn near(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

pub fn evaluate(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    let kappa = cfg.ring().rates.kappa;
    let gamma = cfg.mode().gamma;
    let line = &cfg.vapor().line;
    let mut rows = Vec::new();

    let coop = cooperativity_report(Coupling::Collective { g: 1e9, n: 53.0 }, kappa, gamma)?;
    rows.push(row("collective cooperativity C (g = 1 GHz)", coop.c, "5.62 ± 0.01", near(coop.c, 5.62, 0.01)));
    rows.push(row("single-atom cooperativity C/53", coop.c0, "0.106 ± 0.002", near(coop.c0, 0.106, 0.002)));

    let atoms = cfg.vapor().state.density * cfg.interaction_volume;
    rows.push(row("atoms in the interaction volume", atoms, "53 ± 5", near(atoms, 53.0, 5.0)));

    let trace = simulate(cfg)?;
    let splitting = extract_splitting(&trace)?.unwrap_or(f64::NAN);
    rows.push(row("vacuum Rabi splitting (Hz)", splitting, "1.95e9 ± 10 %", near(splitting, 1.95e9, 0.195e9)));

    let n_cav = intracavity_photons(0.8, 3e-9, 2.2e5, line.center_frequency)?;
    rows.push(row("intracavity photons at 3 nW", n_cav, "0.55 to 0.75", (0.55..=0.75).contains(&n_cav)));
    let n_sat = saturation_photon_number(gamma, 125e6)?;
    rows.push(row("saturation photon number (g0 = 125 MHz)", n_sat, "1.28 ± 0.01", near(n_sat, 1.28, 0.01)));

    let ratio = saturation_input(51.2, 0.033, gamma)? / saturation_input(1.0, 0.033, gamma)?;
    rows.push(row("saturation input ratio N = 51.2 vs 1", ratio, "6.8 ± 0.1", near(ratio, 6.8, 0.1)));

    let oracle = lindblad_deviation(cfg)?;
    rows.push(row("master equation vs linear response", oracle, "< 1e-3 relative", oracle < 1e-3));

    let v = cfg.vapor();
    let ladder = cfg.power_ladder()?;
    let s = cfg.saturation();
    let traces = synthesize_power_ladder(&ladder, &cfg.ring().params, &v.state, &v.line, &s.detunings, &cfg.scenario)?;
    let scan = saturation_scan(&traces, &cfg.ring().params, &v.state, &v.line, &s.fit)?;
    let p = scan.fit.parameter("p_sat").expect("p_sat fitted");
    rows.push(row(
        "fitted saturation power (W)",
        p.value,
        &format!("{:e} within the 95 % CI (± {:.3e})", ladder.p_sat, p.ci95),
        (p.value - ladder.p_sat).abs() <= p.ci95,
    ));

    let series = synthesize_noise(NoiseKind::WhiteFm, 1e5, 100_000, 1e-3, cfg.simulation().seed)?;
    let taus: Vec<f64> = (0..=5).map(|k| 1e-3 * (10f64.powf(1.0 + k as f64 / 5.0)).round()).collect();
    let slope = log_log_slope(&allan_deviation(&series, &taus)?).unwrap_or(f64::NAN);
    rows.push(row("white-FM Allan slope", slope, "-0.5 ± 0.05", near(slope, -0.5, 0.05)));

    let again = simulate(cfg)?;
    let same = write_spectrum(&trace)? == write_spectrum(&again)?;
    rows.push(row("repeat simulation byte-identical", if same { 1.0 } else { 0.0 }, "1", same));
    Ok(rows)
}

/// Worst relative transmission difference between the one-atom master
/// equation at weak drive and linear response over ±3 GHz.
fn lindblad_deviation(cfg: &RunConfig) -> Result<f64, CliError> {
    let rates = cfg.ring().rates;
    let g0 = cfg.mode().field.peak_coupling;
    let gamma = cfg.mode().gamma;
    let sys = LindbladSystem {
        atoms: vec![(g0, 0.0)],
        rates,
        gamma,
        dephasing: 0.0,
        drive: 0.01 * rates.kappa,
        photon_cutoff: 5,
    };
    let x = linear_grid(-3e9, 3e9, 61);
    let ensemble = AtomEnsemble::from_couplings(&sys.atoms, cfg.vapor().state.temperature)?;
    let linear = weak_drive_spectrum(&ensemble, &rates, gamma, &x)?;
    let mut worst: f64 = 0.0;
    for (&d, &t) in x.iter().zip(linear.transmission()) {
        let q = lindblad_steady_state(&sys, d)?;
        worst = worst.max((q.transmission - t).abs() / t);
    }
    Ok(worst)
}

pub fn render(cfg: &RunConfig, rows: &[Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} report\n", cfg.scenario);
    let _ = writeln!(out, "| quantity | value | reference | status |");
    let _ = writeln!(out, "|---|---|---|---|");
    for r in rows {
        let status = if r.within { "ok" } else { "OUTSIDE" };
        let _ = writeln!(out, "| {} | {:.6e} | {} | {status} |", r.quantity, r.value, r.reference);
    }
    out
}
