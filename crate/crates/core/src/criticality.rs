//! Critical point of the multistability region: exact discriminant route,
//! small-λ series, and the harmonic (λ = 0) limit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::NormalizedParams;
use crate::poly;
use crate::steady_state::SteadyStateBranch;

/// Series results with 16 k̄² λ above this are marked untrusted.
pub const PERTURBATIVE_TRUST: f64 = 0.1;

/// Upper bound on positive real roots by Descartes' rule of signs.
pub fn descartes_positive_bound(coeffs: &[f64]) -> Result<usize> {
    poly::descartes_sign_changes(coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalMethod {
    Exact,
    Perturbative,
    Harmonic,
}

impl CriticalMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Perturbative => "perturbative",
            Self::Harmonic => "harmonic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValues {
    pub beta: f64,
    /// Δ_crit in units of ω_m.
    pub detuning: f64,
    /// ε² at threshold, normalized.
    pub eps2: f64,
    /// P_crit in W.
    pub power: f64,
    pub method: CriticalMethod,
    /// False when the series is evaluated outside its validity range.
    pub trusted: bool,
}

/// Coefficients of the discriminant Δ_quad as a cubic in x = β_s²,
/// with the Cardano quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalIntermediate {
    pub r3: f64,
    pub r2: f64,
    pub r1: f64,
    pub r0: f64,
    pub p: f64,
    pub q: f64,
    /// Δ_cub = p³ + q²
    pub discriminant: f64,
}

impl CriticalIntermediate {
    pub fn new(p: &NormalizedParams) -> Self {
        let (g, l) = (p.g, p.duffing);
        let kb2 = p.kappa_bar().powi(2);
        let s = 1.0 + 12.0 * l;
        let r3 = 1024.0 * g * g * l * l;
        let r2 = 128.0 * l * (g * g * s - 18.0 * l * kb2);
        let r1 = 4.0 * s * (g * g * s - 24.0 * l * kb2);
        let r0 = -kb2 * s * s;
        let pp = r1 / (3.0 * r3) - r2 * r2 / (9.0 * r3 * r3);
        let q = r0 / (2.0 * r3) - r1 * r2 / (6.0 * r3 * r3) + r2.powi(3) / (27.0 * r3.powi(3));
        Self {
            r3,
            r2,
            r1,
            r0,
            p: pp,
            q,
            discriminant: pp.powi(3) + q * q,
        }
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.r3, self.r2, self.r1, self.r0]
    }

    /// Δ_quad(x)
    pub fn quad(&self, x: f64) -> f64 {
        poly::eval(&self.coefficients(), x)
    }

    /// Real root of the cubic from the Cardano form, x = β_crit².
    pub fn cardano_root(&self) -> f64 {
        let u = (-self.q + self.discriminant.sqrt()).cbrt();
        -self.r2 / (3.0 * self.r3) + u - self.p / u
    }
}

/// Root of Δ_quad on (0, ∞) polished from `guess` by safeguarded Newton.
fn polish_positive_root(ci: &CriticalIntermediate, guess: f64) -> f64 {
    let c = ci.coefficients();
    let mut lo = 0.0;
    let mut hi = 1.0;
    while poly::eval(&c, hi) < 0.0 {
        hi *= 2.0;
    }
    let mut x = if guess.is_finite() && guess > lo && guess < hi {
        guess
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..200 {
        let (f, df) = poly::eval_with_derivative(&c, x);
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// Δ_crit from β_crit.
fn critical_detuning(beta: f64, p: &NormalizedParams) -> f64 {
    let (g, l) = (p.g, p.duffing);
    p.delta_p()
        + (128.0 * beta.powi(3) * g * l + 4.0 * beta * g * (1.0 + 12.0 * l))
            / (12.0 * (1.0 + 4.0 * beta * beta) * l + 1.0)
}

/// Exact critical values from the discriminant cubic. Requires λ > 0.
pub fn critical_values_exact(p: &NormalizedParams) -> Result<CriticalValues> {
    if p.g <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: "coupling must be positive".into(),
        });
    }
    if p.duffing <= 0.0 {
        return Err(Error::HarmonicRouteRequired);
    }
    let ci = CriticalIntermediate::new(p);
    let roots: Vec<f64> = poly::real_roots(&ci.coefficients())?
        .into_iter()
        .map(|r| r.value)
        .collect();
    // p³ and q² cancel when r3 is tiny; the sign is then meaningless
    let resolved = ci.discriminant.abs() > 1e-9 * ci.p.powi(3).abs().max(ci.q * ci.q);
    let single = if resolved && ci.discriminant.is_finite() {
        ci.discriminant > 0.0
    } else {
        roots.len() == 1
    };
    if !single {
        return Err(Error::MultiCritical {
            discriminant: ci.discriminant,
            roots,
        });
    }
    let guess = if resolved { ci.cardano_root() } else { roots[0] };
    let x = polish_positive_root(&ci, guess);
    let beta = x.sqrt();
    let detuning = critical_detuning(beta, p);
    let at_crit = p.with_detuning(detuning);
    let mut c = crate::steady_state::quintic_coefficients(&at_crit);
    c[5] = 0.0;
    let eps2 = poly::eval(&c, beta) / p.g;
    Ok(CriticalValues {
        beta,
        detuning,
        eps2,
        power: p.power_from_eps2(eps2),
        method: CriticalMethod::Exact,
        trusted: true,
    })
}

/// Small-λ series in k̄ and λ/ω_m.
pub fn critical_values_perturbative(p: &NormalizedParams) -> Result<CriticalValues> {
    if p.g <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: "coupling must be positive".into(),
        });
    }
    let (g, l) = (p.g, p.duffing);
    let k = p.k_bar();
    let k2 = k * k;
    let beta = k * (1.0 + 64.0 * k2 * l + 256.0 * k2 * l * l * (16.0 * k2 - 1.0)).sqrt();
    let detuning =
        p.delta_p() + 4.0 * g * k * (1.0 + 16.0 * k2 * l + 192.0 * k2 * l * l * (4.0 * k2 - 1.0));
    // P = 4ħ g k̄³ ω_L ω_m / κ_c · (...), i.e. ε² = 8 g k̄³ · (...)
    let eps2 = 8.0 * g * k2 * k * (1.0 + 12.0 * l * (1.0 + 4.0 * k2) + 3072.0 * k2 * k2 * l * l);
    Ok(CriticalValues {
        beta,
        detuning,
        eps2,
        power: p.power_from_eps2(eps2),
        method: CriticalMethod::Perturbative,
        trusted: 16.0 * k2 * l <= PERTURBATIVE_TRUST,
    })
}

/// λ = 0 closed forms.
pub fn critical_values_harmonic(p: &NormalizedParams) -> Result<CriticalValues> {
    if p.g <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "g",
            reason: "coupling must be positive".into(),
        });
    }
    let kb = p.kappa_bar();
    let beta = (kb / (2.0 * p.g)).abs();
    // P = ħω_Lω_m κ̄² β / (g κ_c), i.e. ε² = 2 κ̄² β / g
    let eps2 = 2.0 * kb * kb * beta / p.g;
    Ok(CriticalValues {
        beta,
        detuning: p.delta_p() + 4.0 * p.g * beta,
        eps2,
        power: p.power_from_eps2(eps2),
        method: CriticalMethod::Harmonic,
        trusted: p.duffing == 0.0,
    })
}

/// Exact route for λ > 0, harmonic route for λ = 0.
pub fn critical_values(p: &NormalizedParams) -> Result<CriticalValues> {
    if p.duffing > 0.0 {
        critical_values_exact(p)
    } else {
        critical_values_harmonic(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultistabilityMargins {
    pub beta: f64,
    pub detuning: f64,
    /// W
    pub power: f64,
    pub multistable: bool,
}

/// β_s > β_crit, Δ > Δ_crit and P_in > P_crit, all strict.
pub fn multistability_test(
    p: &NormalizedParams,
    branch: &SteadyStateBranch,
    crit: &CriticalValues,
) -> MultistabilityMargins {
    let beta = branch.beta - crit.beta;
    let detuning = p.detuning - crit.detuning;
    let power = p.input_power() - crit.power;
    MultistabilityMargins {
        beta,
        detuning,
        power,
        multistable: beta > 0.0 && detuning > 0.0 && power > 0.0,
    }
}
