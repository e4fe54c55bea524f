use crate::config::{self, AllanSource, Block, RunConfig};
use crate::error::CliError;
use crate::{report, Cli, Command, FitModel, GlobalArgs};
use log::info;
use ringqed::cqed::{extract_splitting, simulate_average};
use ringqed::fitting::{
    fit_interaction_factor, fit_lorentzian, saturation_scan, synthesize_power_ladder, InteractionFitOptions,
    LorentzianOptions,
};
use ringqed::interchange::{read_frequency_series, read_spectrum, write_allan, write_saturation_points, write_spectrum};
use ringqed::spectrum::{SpectrumTrace, TraceKind};
use ringqed::stability::{allan_deviation, default_taus, log_log_slope, synthesize_noise, FrequencySeries};
use ringqed::vapor::{RbD2Line, VaporPressureModel};
use std::fs;
use std::path::{Path, PathBuf};

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::SimulateSpectrum => simulate_spectrum(g),
        Command::FitSpectrum { input, model } => fit_spectrum(g, input, *model),
        Command::SaturationScan { traces, emit_traces } => saturation(g, traces, *emit_traces),
        Command::Allan { input, sample_period, taus } => allan(g, input.as_deref(), *sample_period, taus),
        Command::VaporInfo => vapor_info(g),
        Command::Report => report_cmd(g),
        Command::Presets { name } => presets(name.as_deref()),
    }
}

fn config_text(g: &GlobalArgs) -> Result<Option<String>, CliError> {
    if let Some(name) = &g.preset {
        let text = config::preset_text(name).ok_or_else(|| {
            let known: Vec<_> = config::preset_names().collect();
            CliError::Usage(format!("unknown preset {name:?} (available: {})", known.join(", ")))
        })?;
        return Ok(Some(text.to_string()));
    }
    match &g.config {
        Some(path) => {
            let path = config::resolve_config_path(path)?;
            info!("config {}", path.display());
            let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(Some(text))
        }
        None => Ok(None),
    }
}

fn overrides(g: &GlobalArgs) -> Vec<String> {
    let mut all = g.overrides.clone();
    if let Some(dir) = &g.output {
        all.push(format!("output.directory={}", toml::Value::String(dir.display().to_string())));
    }
    all
}

/// Loads and validates the configuration, requiring `needs`.
pub fn load(g: &GlobalArgs, needs: &[Block]) -> Result<RunConfig, CliError> {
    let text = config_text(g)?
        .ok_or_else(|| CliError::Usage("no configuration given: pass --config FILE or --preset NAME".into()))?;
    config::parse_config(&text, &overrides(g), needs)
}

/// Like [`load`] but a missing configuration is allowed.
fn load_optional(g: &GlobalArgs, needs: &[Block]) -> Result<Option<RunConfig>, CliError> {
    match config_text(g)? {
        Some(text) => config::parse_config(&text, &overrides(g), needs).map(Some),
        None => Ok(None),
    }
}

fn output_dir(cfg: Option<&RunConfig>, g: &GlobalArgs) -> PathBuf {
    g.output
        .clone()
        .or_else(|| cfg.map(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_output(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

/// Averaged spectrum of the configured ensemble.
pub fn simulate(cfg: &RunConfig) -> Result<SpectrumTrace, CliError> {
    let spec = cfg.ensemble_spec()?;
    let sim = cfg.simulation();
    let avg = simulate_average(&spec, &cfg.simulation_rates(), cfg.mode().gamma, &sim.detunings, sim.n_configs, sim.seed)?;
    let mut trace = avg.mean;
    trace.meta.scenario = cfg.scenario.clone();
    trace.meta.kind = TraceKind::Simulated;
    Ok(trace)
}

fn simulate_spectrum(g: &GlobalArgs) -> Result<(), CliError> {
    let cfg = load(g, &[Block::Vapor, Block::Ring, Block::Mode, Block::Simulation])?;
    let trace = simulate(&cfg)?;
    let text = write_spectrum(&trace)?;
    write_output(&output_dir(Some(&cfg), g), &format!("{}_spectrum.csv", cfg.scenario), &text)?;
    match extract_splitting(&trace)? {
        Some(s) => println!("splitting_Hz = {s:e}"),
        None => println!("splitting_Hz = none"),
    }
    Ok(())
}

fn fit_spectrum(g: &GlobalArgs, input: &Path, model: FitModel) -> Result<(), CliError> {
    let trace = read_spectrum(&read_text(input)?)?;
    let (cfg, fit) = match model {
        FitModel::Lorentzian => {
            let cfg = load_optional(g, &[])?;
            let reference = RbD2Line::rb87().center_frequency;
            (cfg, fit_lorentzian(&trace, &LorentzianOptions::at(reference))?)
        }
        FitModel::Interaction => {
            let cfg = load(g, &[Block::Vapor, Block::Ring])?;
            let v = cfg.vapor();
            let fit = fit_interaction_factor(&trace, &cfg.ring().params, &v.state, &v.line, &InteractionFitOptions::default())?;
            (Some(cfg), fit)
        }
    };
    for p in fit.parameters.iter().chain(&fit.derived) {
        println!("{} = {:e} ± {:e}", p.name, p.value, p.ci95);
    }
    for f in &fit.flags {
        log::warn!("{f}");
    }
    write_output(&output_dir(cfg.as_ref(), g), &format!("{}_fit.json", stem(input)), &fit.to_json())?;
    Ok(())
}

fn saturation(g: &GlobalArgs, files: &[PathBuf], emit: bool) -> Result<(), CliError> {
    let synthetic = files.is_empty();
    let needs: &[Block] = if synthetic {
        &[Block::Vapor, Block::Ring, Block::Saturation]
    } else {
        &[Block::Vapor, Block::Ring]
    };
    let cfg = load(g, needs)?;
    let v = cfg.vapor();
    let ring = &cfg.ring().params;
    let dir = output_dir(Some(&cfg), g);
    let (traces, opts) = if synthetic {
        let ladder = cfg.power_ladder()?;
        let s = cfg.saturation();
        let traces = synthesize_power_ladder(&ladder, ring, &v.state, &v.line, &s.detunings, &cfg.scenario)?;
        (traces, s.fit)
    } else {
        let traces = files
            .iter()
            .map(|f| Ok(read_spectrum(&read_text(f)?)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        (traces, InteractionFitOptions::default())
    };
    let scan = saturation_scan(&traces, ring, &v.state, &v.line, &opts)?;
    if synthetic && emit {
        for (i, t) in traces.iter().enumerate() {
            write_output(&dir, &format!("{}_trace_{i:02}.csv", cfg.scenario), &write_spectrum(t)?)?;
        }
    }
    write_output(&dir, &format!("{}_saturation.csv", cfg.scenario), &write_saturation_points(&scan.curve.points))?;
    let json = serde_json::to_string_pretty(&scan).map_err(|e| CliError::Data(e.to_string()))?;
    write_output(&dir, &format!("{}_saturation_fit.json", cfg.scenario), &json)?;
    for p in &scan.fit.parameters {
        println!("{} = {:e} ± {:e}", p.name, p.value, p.ci95);
    }
    for f in &scan.fit.flags {
        log::warn!("{f}");
    }
    Ok(())
}

fn allan(g: &GlobalArgs, input: Option<&Path>, period: Option<f64>, taus: &[f64]) -> Result<(), CliError> {
    let (cfg, series) = match input {
        Some(path) => {
            let cfg = load_optional(g, &[])?;
            let series = read_frequency_series(&read_text(path)?, period, &stem(path))?;
            (cfg, series)
        }
        None => {
            let cfg = load(g, &[Block::Allan])?;
            let series = series_from_config(&cfg, period)?;
            (Some(cfg), series)
        }
    };
    let taus = if !taus.is_empty() {
        taus.to_vec()
    } else {
        cfg.as_ref()
            .and_then(|c| c.allan.as_ref())
            .and_then(|a| a.taus.clone())
            .unwrap_or_else(|| default_taus(&series))
    };
    let curve = allan_deviation(&series, &taus)?;
    let name = cfg.as_ref().map(|c| c.scenario.clone()).unwrap_or_else(|| series.label.clone());
    write_output(&output_dir(cfg.as_ref(), g), &format!("{name}_allan.csv"), &write_allan(&curve, &series.label))?;
    if let Some(slope) = log_log_slope(&curve) {
        println!("log_log_slope = {slope}");
    }
    if let Some(max) = curve.deviations.iter().cloned().reduce(f64::max) {
        println!("max_deviation_Hz = {max:e}");
    }
    Ok(())
}

fn series_from_config(cfg: &RunConfig, period: Option<f64>) -> Result<FrequencySeries, CliError> {
    match &cfg.allan().source {
        AllanSource::File { path, sample_period } => {
            Ok(read_frequency_series(&read_text(path)?, period.or(*sample_period), &stem(path))?)
        }
        AllanSource::Synthetic { kind, level, n, sample_period, seed } => {
            Ok(synthesize_noise(*kind, *level, *n, *sample_period, *seed)?)
        }
    }
}

fn vapor_info(g: &GlobalArgs) -> Result<(), CliError> {
    let cfg = load(g, &[Block::Vapor])?;
    let v = cfg.vapor();
    let model_name = match v.model {
        VaporPressureModel::Nesmeyanov => "nesmeyanov",
        VaporPressureModel::Alcock => "alcock",
    };
    let atoms = v.state.density * cfg.interaction_volume;
    println!("temperature_K = {}", v.state.temperature);
    println!("pressure_model = {model_name}");
    println!("vapor_pressure_Torr = {:e}", v.model.pressure_torr(v.state.temperature));
    println!("density_per_m3 = {:e}", v.state.density);
    println!("doppler_fwhm_Hz = {:e}", v.state.doppler_fwhm);
    println!("transit_broadening_Hz = {:e}", v.state.transit_broadening);
    println!("interaction_volume_m3 = {:e}", cfg.interaction_volume);
    println!("atoms_in_mode = {atoms}");
    Ok(())
}

fn report_cmd(g: &GlobalArgs) -> Result<(), CliError> {
    let cfg = load(g, &[Block::Vapor, Block::Ring, Block::Mode, Block::Simulation, Block::Saturation])?;
    let rows = report::evaluate(&cfg)?;
    let text = report::render(&cfg, &rows);
    write_output(&output_dir(Some(&cfg), g), &format!("{}_report.md", cfg.scenario), &text)?;
    let failed: Vec<&str> = rows.iter().filter(|r| !r.within).map(|r| r.quantity.as_str()).collect();
    if failed.is_empty() {
        println!("all {} quantities within tolerance", rows.len());
        Ok(())
    } else {
        Err(CliError::Accuracy(format!("outside tolerance: {}", failed.join(", "))))
    }
}

fn presets(name: Option<&str>) -> Result<(), CliError> {
    match name {
        None => {
            for n in config::preset_names() {
                println!("{n}");
            }
            Ok(())
        }
        Some(n) => {
            let text = config::preset_text(n).ok_or_else(|| CliError::Usage(format!("unknown preset {n:?}")))?;
            print!("{text}");
            Ok(())
        }
    }
}
