//! Plain-text file formats.
//!
//! Every format is CSV preceded by `#` comment lines; the first comment
//! names the format and version, the others carry `key=value` metadata.
//! Numbers are written in Rust's shortest round-trip form, so reading a
//! file and writing it again reproduces it byte for byte.

use crate::error::{Error, Result};
use crate::saturation::SaturationPoint;
use crate::spectrum::{SpectrumTrace, TraceKind, TraceMeta};
use crate::stability::{AllanCurve, FrequencySeries};
use std::fmt::Write as _;

const SPECTRUM_MAGIC: &str = "# ringqed spectrum v1";
const SPECTRUM_COLUMNS: &str = "detuning_Hz,transmission";
const ALLAN_MAGIC: &str = "# ringqed allan v1";
const ALLAN_COLUMNS: &str = "tau_s,deviation_Hz,n_samples";
const SATURATION_MAGIC: &str = "# ringqed saturation v1";
const SATURATION_COLUMNS: &str = "power_W,alpha,sigma";
const SERIES_COLUMNS: &str = "time_s,offset_Hz";

/// Slack allowed above 1 for simulated transmission (rounding only).
const SIMULATED_CEILING: f64 = 1.0 + 1e-9;

pub fn write_spectrum(trace: &SpectrumTrace) -> Result<String> {
    let m = &trace.meta;
    if m.scenario.contains(['\n', '\r']) {
        return Err(Error::data("scenario name must be a single line"));
    }
    let mut out = String::new();
    writeln!(out, "{SPECTRUM_MAGIC}").unwrap();
    writeln!(out, "# scenario={}", m.scenario).unwrap();
    writeln!(out, "# kind={}", m.kind).unwrap();
    if let Some(seed) = m.seed {
        writeln!(out, "# seed={seed}").unwrap();
    }
    if let Some(p) = m.power_w {
        writeln!(out, "# power_W={p}").unwrap();
    }
    if let Some(t) = m.temperature_k {
        writeln!(out, "# temperature_K={t}").unwrap();
    }
    writeln!(out, "{SPECTRUM_COLUMNS}").unwrap();
    for (d, t) in trace.points() {
        writeln!(out, "{d},{t}").unwrap();
    }
    Ok(out)
}

/// Parses a spectrum file. Transmission must be finite and non-negative;
/// simulated traces must also stay at or below 1, while measured and
/// synthetic ones may exceed it through noise.
pub fn read_spectrum(text: &str) -> Result<SpectrumTrace> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_end() == SPECTRUM_MAGIC => {}
        _ => return Err(Error::data(format!("missing {SPECTRUM_MAGIC:?} header"))),
    }
    let mut meta = TraceMeta::default();
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut seen_columns = false;
    for (i, raw) in lines {
        let line = raw.trim_end();
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let Some((key, value)) = rest.trim().split_once('=') else { continue };
            let value = value.trim();
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| Error::data(format!("line {lineno}: bad number {v:?} for {key}")))
            };
            match key.trim() {
                "scenario" => meta.scenario = value.to_string(),
                "kind" => meta.kind = value.parse()?,
                "seed" => {
                    meta.seed = Some(
                        value
                            .parse()
                            .map_err(|_| Error::data(format!("line {lineno}: bad seed {value:?}")))?,
                    )
                }
                "power_W" => meta.power_w = Some(num(value)?),
                "temperature_K" => meta.temperature_k = Some(num(value)?),
                other => return Err(Error::data(format!("line {lineno}: unknown metadata key {other:?}"))),
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if !seen_columns {
            if line != SPECTRUM_COLUMNS {
                return Err(Error::data(format!("line {lineno}: expected column header {SPECTRUM_COLUMNS:?}")));
            }
            seen_columns = true;
            continue;
        }
        let (d, t) = parse_pair(line, lineno)?;
        if !(t >= 0.0) {
            return Err(Error::data(format!("line {lineno}: negative transmission {t}")));
        }
        if meta.kind == TraceKind::Simulated && t > SIMULATED_CEILING {
            return Err(Error::data(format!("line {lineno}: simulated transmission {t} exceeds 1")));
        }
        x.push(d);
        y.push(t);
    }
    SpectrumTrace::new(x, y, meta)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(f64, f64)> {
    let mut it = line.split(',').map(str::trim);
    let parse = |v: Option<&str>| -> Result<f64> {
        let v = v.ok_or_else(|| Error::data(format!("line {lineno}: expected two columns")))?;
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::data(format!("line {lineno}: bad number {v:?}")))
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(Error::data(format!("line {lineno}: expected two columns")));
    }
    Ok((a, b))
}

pub fn write_allan(curve: &AllanCurve, label: &str) -> String {
    let mut out = String::new();
    writeln!(out, "{ALLAN_MAGIC}").unwrap();
    writeln!(out, "# label={}", label.replace(['\n', '\r'], " ")).unwrap();
    writeln!(out, "{ALLAN_COLUMNS}").unwrap();
    for ((t, d), n) in curve.taus.iter().zip(&curve.deviations).zip(&curve.n_samples) {
        writeln!(out, "{t},{d},{n}").unwrap();
    }
    out
}

/// Frequency series as `time_s,offset_Hz` rows.
pub fn write_frequency_series(series: &FrequencySeries) -> String {
    let mut out = String::new();
    writeln!(out, "# label={}", series.label.replace(['\n', '\r'], " ")).unwrap();
    writeln!(out, "{SERIES_COLUMNS}").unwrap();
    for (i, v) in series.values.iter().enumerate() {
        writeln!(out, "{},{v}", i as f64 * series.sample_period).unwrap();
    }
    out
}

/// Reads either `time_s,offset_Hz` rows on a uniform time grid, or a single
/// column of offsets when `sample_period` is given. `#` lines and a
/// non-numeric header line are skipped.
pub fn read_frequency_series(text: &str, sample_period: Option<f64>, label: &str) -> Result<FrequencySeries> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut columns = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let nums: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        let Some(nums) = nums else {
            if values.is_empty() && columns.is_none() {
                continue;
            }
            return Err(Error::data(format!("line {lineno}: bad number in {line:?}")));
        };
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(Error::data(format!("line {lineno}: non-finite value")));
        }
        match (*columns.get_or_insert(nums.len()), nums.len()) {
            (1, 1) => values.push(nums[0]),
            (2, 2) => {
                times.push(nums[0]);
                values.push(nums[1]);
            }
            (c, got) => {
                return Err(Error::data(format!("line {lineno}: expected {c} column(s), got {got}")));
            }
        }
    }
    let period = match (columns, sample_period) {
        (Some(1), Some(p)) => p,
        (Some(1), None) => {
            return Err(Error::Usage("single-column series needs a sample period".into()));
        }
        (Some(2), given) => {
            if times.len() < 2 {
                return Err(Error::data("need at least two samples"));
            }
            let p = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            if let Some(w) = times.windows(2).position(|w| ((w[1] - w[0]) / p - 1.0).abs() > 1e-6) {
                return Err(Error::data(format!("time column is not uniformly spaced at sample {}", w + 1)));
            }
            if let Some(g) = given {
                if (g / p - 1.0).abs() > 1e-6 {
                    return Err(Error::data(format!("declared period {g} s disagrees with time column ({p} s)")));
                }
            }
            p
        }
        _ => return Err(Error::data("no samples found")),
    };
    FrequencySeries::new(period, values, label)
}

pub fn write_saturation_points(points: &[SaturationPoint]) -> String {
    let mut out = String::new();
    writeln!(out, "{SATURATION_MAGIC}").unwrap();
    writeln!(out, "{SATURATION_COLUMNS}").unwrap();
    for p in points {
        writeln!(out, "{},{},{}", p.power, p.alpha, p.sigma).unwrap();
    }
    out
}

pub fn read_saturation_points(text: &str) -> Result<Vec<SaturationPoint>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim_end() == SATURATION_MAGIC => {}
        _ => return Err(Error::data(format!("missing {SATURATION_MAGIC:?} header"))),
    }
    let mut out = Vec::new();
    let mut seen_columns = false;
    for (i, raw) in lines {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if !seen_columns {
            if line != SATURATION_COLUMNS {
                return Err(Error::data(format!("line {}: expected {SATURATION_COLUMNS:?}", i + 1)));
            }
            seen_columns = true;
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>().map_err(|_| Error::data(format!("line {}: bad number", i + 1))))
            .collect::<Result<_>>()?;
        if v.len() != 3 {
            return Err(Error::data(format!("line {}: expected 3 columns", i + 1)));
        }
        out.push(SaturationPoint { power: v[0], alpha: v[1], sigma: v[2] });
    }
    Ok(out)
}
