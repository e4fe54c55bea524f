//! Command-line front end for `ringqed`: configuration, presets and the
//! pipelines behind each subcommand.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use config::{parse_config, Block, RunConfig};
pub use error::CliError;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "ringqed", version, about = "Atom-cladded microring cavity QED simulations and fits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration. Relative paths not found in the working
    /// directory are looked up in $RINGQED_CONFIG_DIR.
    #[arg(long, short, global = true, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Use a shipped preset instead of a config file.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Override a config key, e.g. `--set vapor.temperature_K=363.15`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Output directory (overrides output.directory).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// More log output on stderr (repeat for more).
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitModel {
    /// Lorentzian dip on a flat baseline.
    Lorentzian,
    /// Clad-ring transfer function with the interaction factor free.
    Interaction,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo averaged weak-drive transmission spectrum.
    SimulateSpectrum,
    /// Fit a spectrum file and write the fit result as JSON.
    FitSpectrum {
        /// Spectrum CSV.
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FitModel::Lorentzian)]
        model: FitModel,
    },
    /// Fit the interaction factor at each power, then the saturation power.
    SaturationScan {
        /// Spectrum files carrying power_W metadata; synthesised from the
        /// saturation block when omitted.
        #[arg(long, num_args = 1..)]
        traces: Vec<PathBuf>,
        /// Also write the synthesised traces.
        #[arg(long)]
        emit_traces: bool,
    },
    /// Allan deviation of a frequency series.
    Allan {
        /// Series file (time_s,offset_Hz or a single offset_Hz column);
        /// synthesised from the allan block when omitted.
        #[arg(long, short)]
        input: Option<PathBuf>,
        /// Sample period for single-column input (s).
        #[arg(long)]
        sample_period: Option<f64>,
        /// Averaging times (s); octave spaced up to a third of the record by default.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        taus: Vec<f64>,
    },
    /// Vapor density, Doppler width and atom number in the mode.
    VaporInfo,
    /// Headline numbers of the model against their reference values.
    Report,
    /// List the shipped presets, or print one.
    Presets {
        /// Preset to print.
        name: Option<String>,
    },
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    commands::dispatch(cli)
}
