//! Figure presets: each one is a caption's parameter set, resolved through
//! its "as in figN" chain, plus the sweep that draws the figure.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::config::{default_params, set_param};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::sweep::{Axis, AxisRange, Constraint, SeriesEntry, SweepSpec};

pub const NAMES: &[&str] = &[
    "fig2", "fig3", "fig4", "fig4b", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig10b", "fig11",
    "fig11b", "fig12",
];

/// Duffing strengths drawn in fig3, in units of ω_m.
pub const FIG3_DUFFING: [f64; 4] = [0.0, 2.5e-5, 5e-5, 1e-4];
/// Input powers of the fig7/fig8 families, mW.
pub const FIG7_POWERS_MW: [f64; 4] = [3.0, 5.0, 8.0, 12.0];

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub caption: &'static str,
    /// Preset whose parameters this one starts from.
    pub inherits: Option<&'static str>,
    /// Parameters stated by this caption, as override keys.
    pub stated: &'static [(&'static str, f64)],
    pub spec: SweepSpec,
}

struct Def {
    caption: &'static str,
    inherits: Option<&'static str>,
    stated: &'static [(&'static str, f64)],
}

fn def(name: &str) -> Option<Def> {
    Some(match name {
        "fig2" => Def {
            caption: "Bare cavity (G0 = 0), different Duffing strengths: L = 1 mm, λ_L = 512 nm, P_in = 3 mW, \
                      F = 1.67e4 (κ_c ≈ 0.9 ω_m), m = 5 ng, ω_m/2π = 5 MHz, Q_m = 1e5.",
            inherits: None,
            stated: &[
                ("mech_freq_mhz", 5.0),
                ("cavity_length_mm", 1.0),
                ("laser_wavelength_nm", 512.0),
                ("input_power_mw", 3.0),
                ("finesse", 1.67e4),
                ("effective_mass_ng", 5.0),
                ("quality_factor", 1e5),
                ("opa_gain", 0.0),
            ],
        },
        "fig3" => Def {
            caption: "ω_m/2π = 2 MHz, κ_c = 0.2 ω_m, G0 = 0.3 κ_c, θ = π/8, P_in = 3 mW. \
                      Other parameters as in fig2.",
            inherits: Some("fig2"),
            stated: &[
                ("mech_freq_mhz", 2.0),
                ("kappa_over_omegam", 0.2),
                ("opa_gain_over_kappa", 0.3),
                ("opa_phase_rad", PI / 8.0),
                ("input_power_mw", 3.0),
            ],
        },
        "fig4" => Def {
            caption: "Δ ≈ Δ_crit = 0.7998 ω_m, λ = 1e-4 ω_m, (a) G0 = 0.3 κ_c and different θ. \
                      Other parameters as in fig3.",
            inherits: Some("fig3"),
            stated: &[
                ("detuning_over_omegam", 0.7998),
                ("duffing_over_omegam", 1e-4),
                ("opa_gain_over_kappa", 0.3),
            ],
        },
        "fig4b" => Def {
            caption: "Δ ≈ Δ_crit = 0.7998 ω_m, λ = 1e-4 ω_m, (b) θ = 5π/3 and different G0. \
                      Other parameters as in fig3.",
            inherits: Some("fig3"),
            stated: &[
                ("detuning_over_omegam", 0.7998),
                ("duffing_over_omegam", 1e-4),
                ("opa_phase_rad", 5.0 * PI / 3.0),
            ],
        },
        "fig5" => Def {
            caption: "Bare cavity (G0 = 0), ω_m/2π = 10 MHz, Q_m = 1e6, κ_c = 0.3 ω_m, λ_L = 1064 nm, \
                      P_in = 3 mW, T = 25 mK. Other parameters as in fig4.",
            inherits: Some("fig4"),
            stated: &[
                ("mech_freq_mhz", 10.0),
                ("quality_factor", 1e6),
                ("kappa_over_omegam", 0.3),
                ("laser_wavelength_nm", 1064.0),
                ("input_power_mw", 3.0),
                ("bath_temp_mk", 25.0),
                ("opa_gain", 0.0),
            ],
        },
        "fig6" => Def {
            caption: "Bare cavity (G0 = 0), κ_c = 0.3 ω_m, P_in = 3 mW, different λ. \
                      Other parameters as in fig5.",
            inherits: Some("fig5"),
            stated: &[("opa_gain", 0.0), ("kappa_over_omegam", 0.3), ("input_power_mw", 3.0)],
        },
        "fig7" => Def {
            caption: "Bare cavity (G0 = 0), P_in = 3, 5, 8, 12 mW, κ_c = 0.3 ω_m, Δ' = Ω_m. \
                      Other parameters as in fig6.",
            inherits: Some("fig6"),
            stated: &[("opa_gain", 0.0), ("kappa_over_omegam", 0.3)],
        },
        "fig8" => Def {
            caption: "Bare cavity (G0 = 0), κ_c = 0.3 ω_m, different P_in, Δ' = Ω_m. \
                      Other parameters as in fig7.",
            inherits: Some("fig7"),
            stated: &[("opa_gain", 0.0), ("kappa_over_omegam", 0.3)],
        },
        "fig9" => Def {
            caption: "P_in = 3 mW, κ_c = 0.3 ω_m, G0 = 0.3 κ_c, different θ, Δ' = Ω_m. \
                      Other parameters as in fig8.",
            inherits: Some("fig8"),
            stated: &[("input_power_mw", 3.0), ("kappa_over_omegam", 0.3), ("opa_gain_over_kappa", 0.3)],
        },
        "fig10" => Def {
            caption: "(a) λ = 0, P_in = 3 mW, (G0, θ) = (0.3κ_c, π), (0.3κ_c, 1.3π), (0.6κ_c, 0.71π), G0 = 0. \
                      Other parameters as in fig9.",
            inherits: Some("fig9"),
            stated: &[("duffing_over_omegam", 0.0), ("input_power_mw", 3.0)],
        },
        "fig10b" => Def {
            caption: "(b) λ = 4e-9 ω_m, P_in = 3 mW, (G0, θ) = (0.3κ_c, π), (0.3κ_c, 1.3π), (0.6κ_c, 0.71π), G0 = 0. \
                      Other parameters as in fig9.",
            inherits: Some("fig9"),
            stated: &[("duffing_over_omegam", 4e-9), ("input_power_mw", 3.0)],
        },
        "fig11" => Def {
            caption: "κ_c = 0.3 ω_m, (a) G0 = κ_c and different θ, Δ' = Ω_m. \
                      Other parameters as in fig10.",
            inherits: Some("fig10"),
            stated: &[("kappa_over_omegam", 0.3), ("opa_gain_over_kappa", 1.0)],
        },
        "fig11b" => Def {
            caption: "κ_c = 0.3 ω_m, (b) θ = 0 and G0 = 0, 0.7κ_c, 1.2κ_c, 1.6κ_c, 2.8κ_c, Δ' = Ω_m. \
                      Other parameters as in fig10.",
            inherits: Some("fig10"),
            stated: &[("kappa_over_omegam", 0.3), ("opa_phase_rad", 0.0)],
        },
        "fig12" => Def {
            caption: "λ = 1e-4 ω_m, P_in = 3 mW, κ_c = 0.3 ω_m, θ = π/2, different G0, range of Δ with β_s ≥ 40. \
                      Other parameters as in fig11.",
            inherits: Some("fig11"),
            stated: &[
                ("duffing_over_omegam", 1e-4),
                ("input_power_mw", 3.0),
                ("kappa_over_omegam", 0.3),
                ("opa_phase_rad", PI / 2.0),
            ],
        },
        _ => return None,
    })
}

/// Keys that other keys are measured against go first.
fn priority(key: &str) -> u8 {
    match key {
        k if k.starts_with("mech_freq") => 0,
        "cavity_decay" | "finesse" | "kappa_over_omegam" => 1,
        _ => 2,
    }
}

/// All parameters a caption implies once its inheritance chain is followed.
/// Later captions override earlier ones key by key; normalized values keep
/// their meaning (λ/ω_m stays λ/ω_m when ω_m changes).
pub fn resolved(name: &str) -> Result<Vec<(&'static str, f64)>> {
    let mut chain = Vec::new();
    let mut cur = Some(name.to_string());
    while let Some(n) = cur {
        let d = def(&n).ok_or_else(|| Error::UnknownPreset(n.clone()))?;
        cur = d.inherits.map(str::to_string);
        chain.push(d);
    }
    let mut order: Vec<&'static str> = Vec::new();
    let mut values: BTreeMap<&'static str, f64> = BTreeMap::new();
    for d in chain.iter().rev() {
        for &(k, v) in d.stated {
            // one loss key at a time
            if priority(k) == 1 {
                for other in ["cavity_decay", "finesse", "kappa_over_omegam"] {
                    values.remove(other);
                    order.retain(|o| *o != other);
                }
            }
            if matches!(k, "opa_gain" | "opa_gain_over_kappa" | "opa_gain_over_omegam") {
                for other in ["opa_gain", "opa_gain_over_kappa", "opa_gain_over_omegam"] {
                    values.remove(other);
                    order.retain(|o| *o != other);
                }
            }
            if !values.contains_key(k) {
                order.push(k);
            }
            values.insert(k, v);
        }
    }
    order.sort_by_key(|k| priority(k));
    Ok(order.into_iter().map(|k| (k, values[k])).collect())
}

/// Fixed parameters of a preset.
pub fn preset_params(name: &str) -> Result<SystemParams> {
    let mut p = default_params();
    for (k, v) in resolved(name)? {
        set_param(&mut p, k, v)?;
    }
    p.validate()?;
    Ok(p)
}

fn series(values: &[f64], key: &str, label: impl Fn(f64) -> String) -> Vec<SeriesEntry> {
    values.iter().map(|&v| SeriesEntry::new(label(v), &[(key, v)])).collect()
}

fn duffing_label(v: f64) -> String {
    format!("lambda={v:e}")
}

fn opa_pairs(pairs: &[(f64, f64)]) -> Vec<SeriesEntry> {
    pairs
        .iter()
        .map(|&(g0, th)| {
            SeriesEntry::new(
                format!("G0={g0}kappa,theta={th}pi"),
                &[("opa_gain_over_kappa", g0), ("opa_phase_over_pi", th)],
            )
        })
        .collect()
}

fn phase_series(g0: f64, phases_over_pi: &[f64], with_bare: bool) -> Vec<SeriesEntry> {
    let mut s = Vec::new();
    if with_bare {
        s.push(SeriesEntry::new("G0=0", &[("opa_gain", 0.0)]));
    }
    s.extend(opa_pairs(&phases_over_pi.iter().map(|&t| (g0, t)).collect::<Vec<_>>()));
    s
}

fn build(name: &str, fixed: SystemParams) -> SweepSpec {
    let lambda_axis = AxisRange::log(1e-12, 1e-2, 121);
    let mut s = match name {
        "fig2" => {
            let mut s = SweepSpec::new(Axis::Detuning, AxisRange::linear(0.0, 3.0, 301), fixed);
            s.series = series(&[0.0, 1e-4, 2e-4, 5e-4], "duffing_over_omegam", duffing_label);
            s
        }
        "fig3" => {
            let mut s = SweepSpec::new(Axis::Detuning, AxisRange::linear(0.0, 12.0, 481), fixed);
            s.series = series(&FIG3_DUFFING, "duffing_over_omegam", duffing_label);
            s
        }
        "fig4" => {
            let mut s = SweepSpec::new(Axis::InputPower, AxisRange::linear(0.0, 20e-3, 201), fixed);
            s.series = phase_series(0.3, &[0.0, 0.125, 0.5, 1.0, 5.0 / 3.0], true);
            s
        }
        "fig4b" => {
            let mut s = SweepSpec::new(Axis::InputPower, AxisRange::linear(0.0, 20e-3, 201), fixed);
            s.series = series(&[0.0, 0.1, 0.2, 0.3], "opa_gain_over_kappa", |v| format!("G0={v}kappa"));
            s
        }
        "fig5" | "fig6" => {
            let mut s = SweepSpec::new(Axis::Detuning, AxisRange::linear(0.0, 3.0, 301), fixed);
            s.series = series(&[0.0, 2e-9, 4e-9, 6e-9], "duffing_over_omegam", duffing_label);
            s
        }
        "fig7" | "fig8" => {
            let mut s = SweepSpec::new(Axis::Duffing, lambda_axis, fixed);
            s.series = series(&FIG7_POWERS_MW, "input_power_mw", |v| format!("P={v}mW"));
            s.constraint = Constraint::OptimalDetuning;
            s
        }
        "fig9" => {
            let mut s = SweepSpec::new(Axis::Duffing, lambda_axis, fixed);
            s.series = phase_series(0.3, &[0.0, 0.25, 0.5, 0.75, 1.0], true);
            s.constraint = Constraint::OptimalDetuning;
            s
        }
        "fig10" | "fig10b" => {
            let mut s = SweepSpec::new(Axis::Detuning, AxisRange::linear(0.0, 3.0, 301), fixed);
            s.series = opa_pairs(&[(0.3, 1.0), (0.3, 1.3), (0.6, 0.71), (0.0, 0.0)]);
            s
        }
        "fig11" => {
            let mut s = SweepSpec::new(Axis::Duffing, lambda_axis, fixed);
            s.series = phase_series(1.0, &[0.0, 0.5, 1.0, 1.5], true);
            s.constraint = Constraint::OptimalDetuning;
            s
        }
        "fig11b" => {
            let mut s = SweepSpec::new(Axis::Duffing, lambda_axis, fixed);
            s.series = series(&[0.0, 0.7, 1.2, 1.6, 2.8], "opa_gain_over_kappa", |v| format!("G0={v}kappa"));
            s.constraint = Constraint::OptimalDetuning;
            s
        }
        "fig12" => {
            let mut s = SweepSpec::new(Axis::Detuning, AxisRange::linear(0.0, 5.0, 501), fixed);
            s.series = series(&[0.0, 0.3, 0.6, 0.9], "opa_gain_over_kappa", |v| format!("G0={v}kappa"));
            s.min_beta = Some(40.0);
            s
        }
        _ => unreachable!("preset table and builder disagree on `{name}`"),
    };
    s.outputs = Vec::new();
    s
}

pub fn figure_preset(name: &str) -> Result<FigurePreset> {
    let (name, d) = NAMES
        .iter()
        .find(|n| **n == name)
        .and_then(|n| def(n).map(|d| (*n, d)))
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    let fixed = preset_params(name)?;
    Ok(FigurePreset {
        name,
        caption: d.caption,
        inherits: d.inherits,
        stated: d.stated,
        spec: build(name, fixed),
    })
}
