//! JSON configuration files and `key=value` overrides.
//!
//! A config file is a JSON object holding any subset of the [`SystemParams`]
//! fields (missing ones fall back to [`default_params`]) plus an optional
//! `"sweep"` object. Overrides use the keys listed in [`KEYS`]; the
//! normalized keys (`*_over_omegam`, `*_over_kappa`) are resolved against the
//! current mechanical frequency and cavity decay, so apply them after those.

use std::f64::consts::PI;
use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::sweep::SweepConfig;

/// Accepted override keys with their units.
pub const KEYS: &[(&str, &str)] = &[
    ("cavity_length", "m"),
    ("cavity_length_mm", "mm"),
    ("laser_wavelength", "m"),
    ("laser_wavelength_nm", "nm"),
    ("input_power", "W"),
    ("input_power_w", "W"),
    ("input_power_mw", "mW"),
    ("cavity_decay", "rad/s"),
    ("finesse", ""),
    ("kappa_over_omegam", "κ_c/ω_m"),
    ("effective_mass", "kg"),
    ("effective_mass_ng", "ng"),
    ("mech_freq", "rad/s"),
    ("mech_freq_mhz", "ω_m/2π in MHz"),
    ("quality_factor", ""),
    ("duffing", "rad/s"),
    ("duffing_over_omegam", "λ/ω_m"),
    ("opa_gain", "rad/s"),
    ("opa_gain_over_omegam", "G0/ω_m"),
    ("opa_gain_over_kappa", "G0/κ_c"),
    ("opa_phase", "rad"),
    ("opa_phase_rad", "rad"),
    ("opa_phase_over_pi", "θ/π"),
    ("bare_detuning", "rad/s"),
    ("detuning_over_omegam", "Δ/ω_m"),
    ("bath_temp", "K"),
    ("bath_temp_mk", "mK"),
    ("thermal_photons", ""),
];

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: SystemParams,
    pub sweep: Option<SweepConfig>,
}

/// Mirror of L = 1 mm, λ_L = 512 nm, P_in = 3 mW, F = 1.67e4, m = 5 ng,
/// ω_m/2π = 5 MHz, Q_m = 1e5, no OPA, no Duffing term, resonant drive.
pub fn default_params() -> SystemParams {
    SystemParams {
        cavity_length: 1e-3,
        laser_wavelength: 512e-9,
        input_power: 3e-3,
        cavity_decay: None,
        finesse: Some(1.67e4),
        effective_mass: 5e-12,
        mech_freq: 2.0 * PI * 5e6,
        quality_factor: 1e5,
        duffing: 0.0,
        opa_gain: 0.0,
        opa_phase: 0.0,
        bare_detuning: 0.0,
        bath_temp: 0.0,
        thermal_photons: 0.0,
    }
}

/// Set one parameter by key.
pub fn set_param(p: &mut SystemParams, key: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::Config(format!("`{key}`: value must be finite, got {value}")));
    }
    let w = p.mech_freq;
    match key {
        "cavity_length" => p.cavity_length = value,
        "cavity_length_mm" => p.cavity_length = value * 1e-3,
        "laser_wavelength" => p.laser_wavelength = value,
        "laser_wavelength_nm" => p.laser_wavelength = value * 1e-9,
        "input_power" | "input_power_w" => p.input_power = value,
        "input_power_mw" => p.input_power = value * 1e-3,
        "cavity_decay" => p.set_cavity_decay(value),
        "kappa_over_omegam" => p.set_cavity_decay(value * w),
        "finesse" => {
            p.finesse = Some(value);
            p.cavity_decay = None;
        }
        "effective_mass" => p.effective_mass = value,
        "effective_mass_ng" => p.effective_mass = value * 1e-12,
        "mech_freq" => p.mech_freq = value,
        "mech_freq_mhz" => p.mech_freq = 2.0 * PI * value * 1e6,
        "quality_factor" => p.quality_factor = value,
        "duffing" => p.duffing = value,
        "duffing_over_omegam" => p.duffing = value * w,
        "opa_gain" => p.opa_gain = value,
        "opa_gain_over_omegam" => p.opa_gain = value * w,
        "opa_gain_over_kappa" => p.opa_gain = value * p.kappa_c(),
        "opa_phase" | "opa_phase_rad" => p.opa_phase = value.rem_euclid(2.0 * PI),
        "opa_phase_over_pi" => p.opa_phase = (value * PI).rem_euclid(2.0 * PI),
        "bare_detuning" => p.bare_detuning = value,
        "detuning_over_omegam" => p.bare_detuning = value * w,
        "bath_temp" => p.bath_temp = value,
        "bath_temp_mk" => p.bath_temp = value * 1e-3,
        "thermal_photons" => p.thermal_photons = value,
        _ => {
            return Err(Error::Config(format!(
                "unknown key `{key}`; known keys: {}",
                KEYS.iter().map(|k| k.0).collect::<Vec<_>>().join(", ")
            )))
        }
    }
    Ok(())
}

/// Read one parameter by key, in that key's units.
pub fn get_param(p: &SystemParams, key: &str) -> Result<f64> {
    let w = p.mech_freq;
    Ok(match key {
        "cavity_length" => p.cavity_length,
        "cavity_length_mm" => p.cavity_length * 1e3,
        "laser_wavelength" => p.laser_wavelength,
        "laser_wavelength_nm" => p.laser_wavelength * 1e9,
        "input_power" | "input_power_w" => p.input_power,
        "input_power_mw" => p.input_power * 1e3,
        "cavity_decay" => p.kappa_c(),
        "kappa_over_omegam" => p.kappa_c() / w,
        "finesse" => p.finesse.unwrap_or(f64::NAN),
        "effective_mass" => p.effective_mass,
        "effective_mass_ng" => p.effective_mass * 1e12,
        "mech_freq" => w,
        "mech_freq_mhz" => w / (2.0 * PI * 1e6),
        "quality_factor" => p.quality_factor,
        "duffing" => p.duffing,
        "duffing_over_omegam" => p.duffing / w,
        "opa_gain" => p.opa_gain,
        "opa_gain_over_omegam" => p.opa_gain / w,
        "opa_gain_over_kappa" => p.opa_gain / p.kappa_c(),
        "opa_phase" | "opa_phase_rad" => p.opa_phase,
        "opa_phase_over_pi" => p.opa_phase / PI,
        "bare_detuning" => p.bare_detuning,
        "detuning_over_omegam" => p.bare_detuning / w,
        "bath_temp" => p.bath_temp,
        "bath_temp_mk" => p.bath_temp * 1e3,
        "thermal_photons" => p.thermal_photons,
        _ => return Err(Error::Config(format!("unknown key `{key}`"))),
    })
}

/// Numbers, optionally written with π: `0.3`, `pi`, `pi/8`, `5pi/3`, `1.3*pi`.
pub fn parse_value(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || Error::Config(format!("cannot parse `{s}` as a number"));
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (t[..pos].trim_end_matches('*').trim(), t[pos + 2..].trim());
    let k = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let d = match tail.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if tail.is_empty() => 1.0,
        None => return Err(bad()),
    };
    Ok(k * PI / d)
}

/// Split `key=value`.
pub fn parse_assignment(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected key=value, got `{s}`")))?;
    Ok((k.trim().to_string(), parse_value(v)?))
}

pub fn apply_overrides<S: AsRef<str>>(p: &mut SystemParams, sets: &[S]) -> Result<()> {
    for s in sets {
        let (k, v) = parse_assignment(s.as_ref())?;
        set_param(p, &k, v)?;
    }
    Ok(())
}

/// Parse a config document. Parameters not present keep their defaults.
pub fn from_json(text: &str) -> Result<Config> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let Value::Object(mut obj) = doc else {
        return Err(Error::Config("config must be a JSON object".into()));
    };
    let sweep = match obj.remove("sweep") {
        None | Some(Value::Null) => None,
        Some(v) => Some(SweepConfig::deserialize(v).map_err(|e| Error::Config(format!("sweep: {e}")))?),
    };
    let params = merge_params(default_params(), obj)?;
    params.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(Config { params, sweep })
}

pub fn load(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

fn merge_params(base: SystemParams, overlay: Map<String, Value>) -> Result<SystemParams> {
    let Value::Object(mut merged) = serde_json::to_value(&base).map_err(|e| Error::Config(e.to_string()))? else {
        unreachable!("SystemParams serializes to an object")
    };
    // the loss is given one way or the other
    if overlay.contains_key("cavity_decay") || overlay.contains_key("finesse") {
        merged.remove("cavity_decay");
        merged.remove("finesse");
    }
    merged.extend(overlay);
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(e.to_string()))
}
