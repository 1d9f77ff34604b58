//! Physical inputs, constants and the derived rates every other module consumes.
//!
//! User-facing values are SI. Everything downstream runs on [`NormalizedParams`],
//! where every rate is divided by the mechanical frequency (ω_m ↦ 1).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CODATA 2018 exact values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Speed of light, m/s.
    pub c: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    k_b: 1.380_649e-23,
    c: 299_792_458.0,
};

/// Raw SI description of the cavity, mirror, OPA and drive.
///
/// The cavity loss is given either as a decay rate `cavity_decay` (rad/s) or
/// as a `finesse`; exactly one must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// m
    pub cavity_length: f64,
    /// m
    pub laser_wavelength: f64,
    /// W
    pub input_power: f64,
    /// rad/s
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_decay: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finesse: Option<f64>,
    /// kg
    pub effective_mass: f64,
    /// rad/s
    pub mech_freq: f64,
    pub quality_factor: f64,
    /// rad/s
    #[serde(default)]
    pub duffing: f64,
    /// rad/s
    #[serde(default)]
    pub opa_gain: f64,
    /// rad, in [0, 2π)
    #[serde(default)]
    pub opa_phase: f64,
    /// rad/s
    pub bare_detuning: f64,
    /// K
    #[serde(default)]
    pub bath_temp: f64,
    #[serde(default)]
    pub thermal_photons: f64,
}

/// Derived SI rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Single-photon optomechanical coupling, rad/s.
    pub g: f64,
    /// Drive amplitude |ε|, rad/s (real, positive).
    pub epsilon: f64,
    pub gamma_m: f64,
    pub kappa_c: f64,
    pub omega_l: f64,
    pub omega_m: f64,
    /// Thermal phonon occupation of the mechanical bath.
    pub n_m: f64,
    /// |(κ_c − 2G0 cos θ) / 2g|
    pub k_bar: f64,
}

/// SI quantities that do not enter the normalized equations but are needed
/// to convert results back (powers, temperatures) and to round-trip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiContext {
    pub cavity_length: f64,
    pub laser_wavelength: f64,
    pub effective_mass: f64,
    pub bath_temp: f64,
}

impl Default for SiContext {
    fn default() -> Self {
        Self {
            cavity_length: 1e-3,
            laser_wavelength: 512e-9,
            effective_mass: 5e-12,
            bath_temp: 0.0,
        }
    }
}

/// All rates in units of ω_m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedParams {
    /// Scale, rad/s.
    pub omega_m: f64,
    pub g: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub duffing: f64,
    pub opa_gain: f64,
    pub opa_phase: f64,
    pub detuning: f64,
    pub n_m: f64,
    pub n_ph: f64,
    pub context: SiContext,
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {v}"),
        })
    }
}

fn check_non_negative(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and >= 0, got {v}"),
        })
    }
}

/// Bose occupation at frequency `omega` (rad/s) and temperature `temp` (K).
pub fn bose_occupation(omega: f64, temp: f64) -> f64 {
    if temp <= 0.0 {
        return 0.0;
    }
    let x = CONSTANTS.hbar * omega / (CONSTANTS.k_b * temp);
    1.0 / x.exp_m1()
}

/// κ_c = πc / (2 F L).
pub fn kappa_from_finesse(finesse: f64, cavity_length: f64) -> f64 {
    PI * CONSTANTS.c / (2.0 * finesse * cavity_length)
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("cavity_length", self.cavity_length)?;
        check_positive("laser_wavelength", self.laser_wavelength)?;
        check_positive("effective_mass", self.effective_mass)?;
        check_positive("mech_freq", self.mech_freq)?;
        check_positive("quality_factor", self.quality_factor)?;
        check_non_negative("input_power", self.input_power)?;
        check_non_negative("opa_gain", self.opa_gain)?;
        check_non_negative("bath_temp", self.bath_temp)?;
        check_non_negative("thermal_photons", self.thermal_photons)?;
        check_non_negative("duffing", self.duffing)?;
        if !self.bare_detuning.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bare_detuning",
                reason: "must be finite".into(),
            });
        }
        if !(self.opa_phase.is_finite() && (0.0..2.0 * PI).contains(&self.opa_phase)) {
            return Err(Error::InvalidParameter {
                name: "opa_phase",
                reason: format!("must lie in [0, 2π), got {}", self.opa_phase),
            });
        }
        match (self.cavity_decay, self.finesse) {
            (Some(k), None) => check_non_negative("cavity_decay", k),
            (None, Some(f)) => check_positive("finesse", f),
            (Some(_), Some(_)) => Err(Error::InvalidParameter {
                name: "cavity_decay",
                reason: "give either cavity_decay or finesse, not both".into(),
            }),
            (None, None) => Err(Error::InvalidParameter {
                name: "cavity_decay",
                reason: "one of cavity_decay or finesse is required".into(),
            }),
        }
    }

    /// Cavity decay rate in rad/s, converting from finesse when needed.
    pub fn kappa_c(&self) -> f64 {
        match (self.cavity_decay, self.finesse) {
            (Some(k), _) => k,
            (None, Some(f)) => kappa_from_finesse(f, self.cavity_length),
            (None, None) => f64::NAN,
        }
    }

    pub fn omega_l(&self) -> f64 {
        2.0 * PI * CONSTANTS.c / self.laser_wavelength
    }

    /// Replace the loss specification by an explicit decay rate.
    pub fn set_cavity_decay(&mut self, kappa: f64) {
        self.cavity_decay = Some(kappa);
        self.finesse = None;
    }

    pub fn derive(&self) -> Result<DerivedParams> {
        self.validate()?;
        let c = CONSTANTS;
        let omega_l = self.omega_l();
        let omega_m = self.mech_freq;
        let kappa_c = self.kappa_c();
        // ω_c ≈ ω_L in the coupling
        let g = omega_l / self.cavity_length
            * (c.hbar / (2.0 * self.effective_mass * omega_m)).sqrt();
        let epsilon = (2.0 * kappa_c * self.input_power / (c.hbar * omega_l)).sqrt();
        let k_bar = ((kappa_c - 2.0 * self.opa_gain * self.opa_phase.cos()) / (2.0 * g)).abs();
        Ok(DerivedParams {
            g,
            epsilon,
            gamma_m: omega_m / self.quality_factor,
            kappa_c,
            omega_l,
            omega_m,
            n_m: bose_occupation(omega_m, self.bath_temp),
            k_bar,
        })
    }

    pub fn normalize(&self) -> Result<NormalizedParams> {
        let d = self.derive()?;
        let w = d.omega_m;
        Ok(NormalizedParams {
            omega_m: w,
            g: d.g / w,
            epsilon: d.epsilon / w,
            kappa: d.kappa_c / w,
            gamma: d.gamma_m / w,
            duffing: self.duffing / w,
            opa_gain: self.opa_gain / w,
            opa_phase: self.opa_phase,
            detuning: self.bare_detuning / w,
            n_m: d.n_m,
            n_ph: self.thermal_photons,
            context: SiContext {
                cavity_length: self.cavity_length,
                laser_wavelength: self.laser_wavelength,
                effective_mass: self.effective_mass,
                bath_temp: self.bath_temp,
            },
        })
    }
}

impl NormalizedParams {
    /// κ_p = 2 G0 cos θ
    pub fn kappa_p(&self) -> f64 {
        2.0 * self.opa_gain * self.opa_phase.cos()
    }

    /// Δ_p = 2 G0 sin θ
    pub fn delta_p(&self) -> f64 {
        2.0 * self.opa_gain * self.opa_phase.sin()
    }

    /// κ̄ = κ_c − 2 G0 cos θ
    pub fn kappa_bar(&self) -> f64 {
        self.kappa - self.kappa_p()
    }

    /// d₀ = Δ − 2 G0 sin θ
    pub fn d0(&self) -> f64 {
        self.detuning - self.delta_p()
    }

    pub fn k_bar(&self) -> f64 {
        (self.kappa_bar() / (2.0 * self.g)).abs()
    }

    /// Laser angular frequency, rad/s.
    pub fn omega_l(&self) -> f64 {
        2.0 * PI * CONSTANTS.c / self.context.laser_wavelength
    }

    /// Input power (W) that produces the normalized drive ε² = `eps2`.
    pub fn power_from_eps2(&self, eps2: f64) -> f64 {
        if self.kappa == 0.0 {
            return 0.0;
        }
        eps2 * self.omega_m * CONSTANTS.hbar * self.omega_l() / (2.0 * self.kappa)
    }

    /// Normalized ε² for an input power in W.
    pub fn eps2_from_power(&self, power: f64) -> f64 {
        2.0 * self.kappa * power / (CONSTANTS.hbar * self.omega_l() * self.omega_m)
    }

    pub fn input_power(&self) -> f64 {
        self.power_from_eps2(self.epsilon * self.epsilon)
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.epsilon = self.eps2_from_power(power).sqrt();
        self
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn with_duffing(mut self, duffing: f64) -> Self {
        self.duffing = duffing;
        self
    }

    /// Inverse of [`SystemParams::normalize`]; the loss is returned as `cavity_decay`.
    pub fn to_system_params(&self) -> SystemParams {
        let w = self.omega_m;
        SystemParams {
            cavity_length: self.context.cavity_length,
            laser_wavelength: self.context.laser_wavelength,
            input_power: self.input_power(),
            cavity_decay: Some(self.kappa * w),
            finesse: None,
            effective_mass: self.context.effective_mass,
            mech_freq: w,
            quality_factor: 1.0 / self.gamma,
            duffing: self.duffing * w,
            opa_gain: self.opa_gain * w,
            opa_phase: self.opa_phase,
            bare_detuning: self.detuning * w,
            bath_temp: self.context.bath_temp,
            thermal_photons: self.n_ph,
        }
    }
}
