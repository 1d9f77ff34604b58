//! Linearized fluctuation dynamics in the squeezed mechanical frame: the
//! transformed quantities, the 4×4 drift matrix (order x, y, q, p) and its
//! stability by Routh–Hurwitz and by eigenvalues.

use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::NormalizedParams;
use crate::steady_state::OperatingPoint;

/// Eigenvalues with |max Re| below this (units of ω_m) are marginal.
pub const MARGINAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformedFrame {
    /// Λ = 3λ(1 + 4β²)
    pub enhanced_duffing: f64,
    /// r = ¼ ln(1 + 4Λ/ω_m)
    pub squeeze: f64,
    /// Ω_m = e^{2r} ω_m
    pub omega_eff: f64,
    /// Ḡ = 2 g α
    pub coupling: f64,
    /// Ḡ′ = e^{−r} Ḡ
    pub coupling_t: f64,
    /// Δ_p = 2 G0 sin θ
    pub delta_p: f64,
    /// κ_p = 2 G0 cos θ
    pub kappa_p: f64,
}

pub fn transform_frame(point: &OperatingPoint, p: &NormalizedParams) -> TransformedFrame {
    let enhanced_duffing = 3.0 * p.duffing * (1.0 + 4.0 * point.beta * point.beta);
    let squeeze = 0.25 * (4.0 * enhanced_duffing).ln_1p();
    let coupling = 2.0 * p.g * point.alpha;
    TransformedFrame {
        enhanced_duffing,
        squeeze,
        omega_eff: (2.0 * squeeze).exp(),
        coupling,
        coupling_t: (-squeeze).exp() * coupling,
        delta_p: p.delta_p(),
        kappa_p: p.kappa_p(),
    }
}

/// Drift matrix A of δu̇ = A δu + noise, δu = (δx, δy, δq, δp).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(pub Matrix4<f64>);

pub fn build_drift(
    frame: &TransformedFrame,
    point: &OperatingPoint,
    p: &NormalizedParams,
) -> DriftMatrix {
    let d = point.eff_detuning;
    let (k, kp, dp) = (p.kappa, frame.kappa_p, frame.delta_p);
    let (g, om, gm) = (frame.coupling_t, frame.omega_eff, p.gamma);
    #[rustfmt::skip]
    let a = Matrix4::new(
        -(k - kp), d + dp,   0.0, 0.0,
        -(d - dp), -(k + kp), g,   0.0,
        0.0,       0.0,      -gm,  om,
        g,         0.0,      -om, -gm,
    );
    DriftMatrix(a)
}

impl DriftMatrix {
    pub fn eigenvalues(&self) -> [Complex64; 4] {
        let ev = match Schur::try_new(self.0, f64::EPSILON, 10_000) {
            Some(s) => s.complex_eigenvalues(),
            None => self.0.complex_eigenvalues(),
        };
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
        out
    }

    pub fn max_real(&self) -> f64 {
        self.eigenvalues()[0].re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    #[serde(skip)]
    pub eigenvalues: [Complex64; 4],
    pub max_real: f64,
    pub eigen_stable: bool,
    /// |max Re| within [`MARGINAL_TOL`].
    pub marginal: bool,
    pub rh_stable: bool,
    /// Δ′ + Δ_p > 0
    pub regime_positive: bool,
}

impl StabilityVerdict {
    pub fn stable(&self) -> bool {
        self.eigen_stable
    }
}

/// Routh–Hurwitz sign conditions of the drift matrix together with the
/// eigenvalue verdict. s1 = H₂/2 and s2 = det A; s3 = H₃/4 where H_k are the
/// Hurwitz determinants of the characteristic quartic.
pub fn routh_hurwitz(
    frame: &TransformedFrame,
    point: &OperatingPoint,
    p: &NormalizedParams,
) -> StabilityVerdict {
    let (k, gm) = (p.kappa, p.gamma);
    let d = point.eff_detuning;
    let g0sq4 = 4.0 * p.opa_gain * p.opa_gain;
    let w4 = frame.omega_eff * frame.omega_eff; // e^{4r} ω_m²
    let opt = d * d + k * k - g0sq4;
    let reg = d + frame.delta_p;
    let gbar2 = frame.coupling * frame.coupling;

    let s1 = gm * ((2.0 * k + gm).powi(2) + w4) + k * opt;
    let s2 = opt * (w4 + gm * gm) - reg * gbar2;
    let inner = opt - w4 + gm * (gm + 2.0 * k);
    let s3 = gm * k * (inner * inner + 4.0 * (gm + k).powi(2) * w4) + (gm + k).powi(2) * reg * gbar2;

    let drift = build_drift(frame, point, p);
    let eigenvalues = drift.eigenvalues();
    let max_real = eigenvalues[0].re;
    StabilityVerdict {
        s1,
        s2,
        s3,
        eigenvalues,
        max_real,
        eigen_stable: max_real < -MARGINAL_TOL,
        marginal: max_real.abs() <= MARGINAL_TOL,
        rh_stable: s1 > 0.0 && s2 > 0.0 && s3 > 0.0,
        regime_positive: reg > 0.0,
    }
}

/// Operating point satisfying Δ′ = Ω_m together with the steady-state
/// equations, and the bare detuning that realizes it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalDetuning {
    pub detuning: f64,
    pub point: OperatingPoint,
    pub iterations: usize,
    pub used_bisection: bool,
}

const RELAXATION: f64 = 0.5;
const MAX_ITER: usize = 200;
const RESIDUAL_TOL: f64 = 1e-10;

fn omega_eff_of(beta: f64, p: &NormalizedParams) -> f64 {
    (1.0 + 12.0 * p.duffing * (1.0 + 4.0 * beta * beta)).sqrt()
}

/// Positive root of 16λβ³ + (1 + 12λ)β = rhs (monotone, so unique).
fn duffing_amplitude(rhs: f64, duffing: f64) -> f64 {
    let f = |b: f64| 16.0 * duffing * b * b * b + (1.0 + 12.0 * duffing) * b - rhs;
    let mut hi = rhs / (1.0 + 12.0 * duffing);
    if duffing > 0.0 {
        hi = hi.min((rhs / (16.0 * duffing)).cbrt());
    }
    hi = hi.max(0.0);
    let mut b = hi;
    for _ in 0..100 {
        let fb = f(b);
        let df = 48.0 * duffing * b * b + 1.0 + 12.0 * duffing;
        let next = (b - fb / df).clamp(0.0, hi.max(b));
        if (next - b).abs() <= 1e-15 * (1.0 + b) {
            return next;
        }
        b = next;
    }
    b
}

/// Damped fixed-point iteration on β, falling back to bisection on the
/// steady-state residual (equivalent to bisection on the bare detuning,
/// since Δ = Ω_m(β) + 2gβ is monotone in β).
pub fn solve_optimal_detuning(p: &NormalizedParams) -> Result<OptimalDetuning> {
    let (dp, kb) = (p.delta_p(), p.kappa_bar());
    let eps2 = p.epsilon * p.epsilon;
    let intensity = |beta: f64| {
        let om = omega_eff_of(beta, p);
        eps2 / ((om - dp).powi(2) + kb * kb)
    };
    let update = |beta: f64| duffing_amplitude(p.g * intensity(beta), p.duffing);

    let finish = |beta: f64, iterations: usize, used_bisection: bool| {
        let om = omega_eff_of(beta, p);
        let alpha = intensity(beta).sqrt();
        OptimalDetuning {
            detuning: om + 2.0 * p.g * beta,
            point: OperatingPoint {
                beta,
                alpha,
                eff_detuning: om,
            },
            iterations,
            used_bisection,
        }
    };

    let mut beta = update(0.0);
    for it in 1..=MAX_ITER {
        let next = (1.0 - RELAXATION) * beta + RELAXATION * update(beta);
        if !next.is_finite() {
            break;
        }
        let done = (next - beta).abs() <= RESIDUAL_TOL * (1.0 + next.abs());
        beta = next;
        if done {
            return Ok(finish(beta, it, false));
        }
    }

    let residual = |b: f64| {
        16.0 * p.duffing * b * b * b + (1.0 + 12.0 * p.duffing) * b - p.g * intensity(b)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while residual(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::OptimalDetuning("no bracket for the amplitude".into()));
        }
    }
    if residual(lo) > 0.0 {
        return Err(Error::OptimalDetuning("residual positive at zero amplitude".into()));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= RESIDUAL_TOL * (1.0 + hi) {
            break;
        }
    }
    Ok(finish(0.5 * (lo + hi), MAX_ITER, true))
}
