//! Mean-field steady states from the quintic amplitude equation.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::params::NormalizedParams;
use crate::poly;
use crate::stability::{routh_hurwitz, transform_frame, StabilityVerdict, TransformedFrame};

/// (β_s, α_s, Δ′) triple that the linearization is built around.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub beta: f64,
    pub alpha: f64,
    /// Δ′ = Δ − 2gβ_s
    pub eff_detuning: f64,
}

impl OperatingPoint {
    /// α_s = ε / sqrt((Δ′ − Δ_p)² + (κ_c − κ_p)²)
    pub fn from_beta(beta: f64, p: &NormalizedParams) -> Self {
        let eff_detuning = p.detuning - 2.0 * p.g * beta;
        let den = (eff_detuning - p.delta_p()).powi(2) + p.kappa_bar().powi(2);
        let alpha = if p.epsilon == 0.0 {
            0.0
        } else {
            p.epsilon / den.sqrt()
        };
        Self {
            beta,
            alpha,
            eff_detuning,
        }
    }

    pub fn intensity(&self) -> f64 {
        self.alpha * self.alpha
    }
}

/// Amplitude quintic in β_s, descending degree.
pub fn quintic_coefficients(p: &NormalizedParams) -> [f64; 6] {
    let (g, l, e) = (p.g, p.duffing, p.epsilon);
    let d0 = p.d0();
    let kb = p.kappa_bar();
    let s = 1.0 + 12.0 * l;
    [
        64.0 * g * g * l,
        -64.0 * g * l * d0,
        4.0 * (g * g * s + 4.0 * l * (kb * kb + d0 * d0)),
        -4.0 * g * s * d0,
        s * (d0 * d0 + kb * kb),
        -g * e * e,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityThresholds {
    pub beta_min: f64,
    pub ratio_max: f64,
}

impl Default for ValidityThresholds {
    fn default() -> Self {
        Self {
            beta_min: 40.0,
            ratio_max: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizationValidity {
    pub beta_large: bool,
    pub duffing_small: bool,
    /// λβ_s / Λ
    pub ratio_enhanced: f64,
    /// λβ_s / Ḡ
    pub ratio_coupling: f64,
}

impl LinearizationValidity {
    pub fn evaluate(
        point: &OperatingPoint,
        frame: &TransformedFrame,
        p: &NormalizedParams,
        th: &ValidityThresholds,
    ) -> Self {
        let lb = p.duffing * point.beta.abs();
        let ratio = |den: f64| {
            if lb == 0.0 {
                0.0
            } else if den == 0.0 {
                f64::INFINITY
            } else {
                lb / den.abs()
            }
        };
        let ratio_enhanced = ratio(frame.enhanced_duffing);
        let ratio_coupling = ratio(frame.coupling);
        Self {
            beta_large: point.beta >= th.beta_min,
            duffing_small: ratio_enhanced < th.ratio_max && ratio_coupling < th.ratio_max,
            ratio_enhanced,
            ratio_coupling,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyStateBranch {
    pub beta: f64,
    pub alpha: f64,
    pub eff_detuning: f64,
    pub intensity: f64,
    pub stable: bool,
    pub marginal: bool,
    #[serde(serialize_with = "ser_eigs")]
    pub eigenvalues: [Complex64; 4],
    pub verdict: StabilityVerdict,
    pub frame: TransformedFrame,
    pub validity: LinearizationValidity,
    /// Another root lies within the near-degenerate tolerance (critical point).
    pub near_degenerate: bool,
}

fn ser_eigs<S: serde::Serializer>(eigs: &[Complex64; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(4))?;
    for z in eigs {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl SteadyStateBranch {
    pub fn point(&self) -> OperatingPoint {
        OperatingPoint {
            beta: self.beta,
            alpha: self.alpha,
            eff_detuning: self.eff_detuning,
        }
    }

    pub fn from_point(
        point: OperatingPoint,
        p: &NormalizedParams,
        th: &ValidityThresholds,
        near_degenerate: bool,
    ) -> Self {
        let frame = transform_frame(&point, p);
        let verdict = routh_hurwitz(&frame, &point, p);
        Self {
            beta: point.beta,
            alpha: point.alpha,
            eff_detuning: point.eff_detuning,
            intensity: point.intensity(),
            stable: verdict.eigen_stable,
            marginal: verdict.marginal,
            eigenvalues: verdict.eigenvalues,
            verdict,
            frame,
            validity: LinearizationValidity::evaluate(&point, &frame, p, th),
            near_degenerate,
        }
    }
}

pub fn solve_branches(p: &NormalizedParams) -> Result<Vec<SteadyStateBranch>> {
    solve_branches_with(p, &ValidityThresholds::default())
}

/// All real roots of the quintic, ascending in β_s, each with its stability.
pub fn solve_branches_with(
    p: &NormalizedParams,
    th: &ValidityThresholds,
) -> Result<Vec<SteadyStateBranch>> {
    if p.epsilon == 0.0 {
        let pt = OperatingPoint::from_beta(0.0, p);
        return Ok(vec![SteadyStateBranch::from_point(pt, p, th, false)]);
    }
    let coeffs = quintic_coefficients(p);
    let roots = poly::real_roots(&coeffs)?;
    Ok(roots
        .into_iter()
        .map(|r| SteadyStateBranch::from_point(OperatingPoint::from_beta(r.value, p), p, th, r.near_degenerate))
        .collect())
}

/// Index of the stable branch with the largest intracavity intensity.
pub fn operating_branch(branches: &[SteadyStateBranch]) -> Option<usize> {
    branches
        .iter()
        .enumerate()
        .filter(|(_, b)| b.stable)
        .max_by(|a, b| a.1.intensity.total_cmp(&b.1.intensity))
        .map(|(i, _)| i)
}
