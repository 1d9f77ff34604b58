//! Stationary quadrature fluctuations around a steady state: Lyapunov and
//! spectral covariances, derived observables, and the closed-form
//! good-cavity approximations.

use nalgebra::{Matrix4, SMatrix, SVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{NormalizedParams, CONSTANTS};
use crate::quadrature::{self, Tolerance};
use crate::stability::{build_drift, DriftMatrix, TransformedFrame, MARGINAL_TOL};
use crate::steady_state::{LinearizationValidity, OperatingPoint, SteadyStateBranch};

/// Vacuum variance of a quadrature, x = (a + a†)/√2.
pub const VACUUM: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(pub Matrix4<f64>);

pub fn diffusion_matrix(frame: &TransformedFrame, p: &NormalizedParams) -> DiffusionMatrix {
    let opt = p.kappa * (2.0 * p.n_ph + 1.0);
    let mech = p.gamma * (2.0 * p.n_m + 1.0);
    let e2r = (2.0 * frame.squeeze).exp();
    DiffusionMatrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
        opt,
        opt,
        mech * e2r,
        mech / e2r,
    )))
}

/// Symmetrized covariance of (δx, δy, δq, δp) in the squeezed frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(pub Matrix4<f64>);

impl CovarianceMatrix {
    pub fn mechanical(&self) -> MechanicalMoments {
        MechanicalMoments {
            vqq: self.0[(2, 2)],
            vpp: self.0[(3, 3)],
            vqp: self.0[(2, 3)],
        }
    }
}

/// (q, p) block of the covariance, squeezed frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechanicalMoments {
    pub vqq: f64,
    pub vpp: f64,
    pub vqp: f64,
}

/// Solves A V + V Aᵀ + D = 0 for a strictly stable A.
pub fn covariance_lyapunov(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let max_real = a.max_real();
    if max_real >= -MARGINAL_TOL || max_real.is_nan() {
        return Err(Error::NoStationaryState { max_real });
    }
    let a = a.0;
    let mut k = SMatrix::<f64, 16, 16>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let row = i + 4 * j;
            for m in 0..4 {
                k[(row, m + 4 * j)] += a[(i, m)];
                k[(row, i + 4 * m)] += a[(j, m)];
            }
        }
    }
    let rhs = SVector::<f64, 16>::from_iterator(d.0.iter().map(|x| -x));
    let lu = k.lu();
    let mut v = lu
        .solve(&rhs)
        .ok_or(Error::NoStationaryState { max_real })?;
    for _ in 0..2 {
        let r = rhs - k * v;
        if let Some(dv) = lu.solve(&r) {
            v += dv;
        }
    }
    let vm = Matrix4::from_column_slice(v.as_slice());
    let vm = 0.5 * (vm + vm.transpose());
    let residual = (a * vm + vm * a.transpose() + d.0).norm();
    if residual > 1e-10 * d.0.norm() {
        return Err(Error::NoStationaryState { max_real });
    }
    Ok(CovarianceMatrix(vm))
}

/// Input-noise to mechanical-quadrature transfer functions in the squeezed
/// frame; inputs ordered (x_in, y_in, q_in, p_in).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferFunctions {
    pub kappa: f64,
    pub gamma: f64,
    pub opa_gain: f64,
    pub eff_detuning: f64,
    pub frame: TransformedFrame,
}

impl TransferFunctions {
    pub fn new(frame: &TransformedFrame, point: &OperatingPoint, p: &NormalizedParams) -> Self {
        Self {
            kappa: p.kappa,
            gamma: p.gamma,
            opa_gain: p.opa_gain,
            eff_detuning: point.eff_detuning,
            frame: *frame,
        }
    }

    fn optical(&self, w: f64) -> Complex64 {
        let kw = Complex64::new(self.kappa, -w);
        self.eff_detuning * self.eff_detuning + kw * kw - 4.0 * self.opa_gain * self.opa_gain
    }

    /// χ_m⁻¹(ω) = γ² − 2iγω − ω² + e^{4r}ω_m²
    pub fn chi_inv(&self, w: f64) -> Complex64 {
        let g = self.gamma;
        Complex64::new(g * g - w * w + self.frame.omega_eff.powi(2), -2.0 * g * w)
    }

    /// d(ω) = det(−iω − A)
    pub fn d(&self, w: f64) -> Complex64 {
        let f = &self.frame;
        self.optical(w) * self.chi_inv(w)
            - f.coupling * f.coupling * (self.eff_detuning + f.delta_p)
    }

    /// (A₁..A₄, B₁..B₄): δq̃ = Σ A_j in_j, δp̃ = Σ B_j in_j.
    pub fn at(&self, w: f64) -> ([Complex64; 4], [Complex64; 4]) {
        let f = &self.frame;
        let d = self.d(w);
        let sk = (2.0 * self.kappa).sqrt();
        let sg = (2.0 * self.gamma).sqrt();
        let er = f.squeeze.exp();
        let gw = Complex64::new(self.gamma, -w);
        let reg = self.eff_detuning + f.delta_p;
        let l = self.optical(w);
        let a1 = sk / d * er * f.coupling * Complex64::new(self.kappa + f.kappa_p, -w);
        let a2 = sk / d * er * f.coupling * reg;
        let a3 = sg / d * gw * l;
        let a4 = f.omega_eff / gw * a3;
        let b1 = gw / f.omega_eff * a1;
        let b2 = sk / d / er * f.coupling * gw * reg;
        let b3 = sg / d * (f.coupling * f.coupling * reg / (er * er) - f.omega_eff * l);
        ([a1, a2, a3, a4], [b1, b2, b3, a3])
    }
}

/// Symmetrized input-noise strengths N_j, with D_jj = 2·rate_j·N_j.
pub fn noise_weights(frame: &TransformedFrame, p: &NormalizedParams) -> [f64; 4] {
    let opt = 0.5 * (2.0 * p.n_ph + 1.0);
    let mech = 0.5 * (2.0 * p.n_m + 1.0);
    let e2r = (2.0 * frame.squeeze).exp();
    [opt, opt, mech * e2r, mech / e2r]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralCovariance {
    pub moments: MechanicalMoments,
    /// Quadrature error estimate per moment, absolute.
    pub error: [f64; 3],
    /// 1/ω² estimate of the contribution beyond the cutoff.
    pub tail: [f64; 3],
    pub evaluations: usize,
}

/// Integrand of (1/π)∫₀^∞ for (V_qq, V_pp, V_qp).
fn spectral_density(tf: &TransferFunctions, n: &[f64; 4], w: f64) -> [f64; 3] {
    let (a, b) = tf.at(w);
    let mut out = [0.0; 3];
    for j in 0..4 {
        out[0] += a[j].norm_sqr() * n[j];
        out[1] += b[j].norm_sqr() * n[j];
        out[2] += (a[j] * b[j].conj()).re * n[j];
    }
    out
}

/// Mechanical (q, p) moments from the frequency-domain integrals of the
/// noise spectra. The integrand is even in ω. [0, W] with
/// W = 50·max(Ω_m, κ_c, |Δ′| + |Δ_p|) is split at the resonances; the range
/// beyond W is integrated after mapping to a finite interval. `tail` holds
/// the 1/ω² estimate of that range for diagnostics.
pub fn covariance_spectral(
    frame: &TransformedFrame,
    point: &OperatingPoint,
    p: &NormalizedParams,
) -> Result<SpectralCovariance> {
    let drift = build_drift(frame, point, p);
    let eig = drift.eigenvalues();
    if eig[0].re >= -MARGINAL_TOL || eig[0].re.is_nan() {
        return Err(Error::NoStationaryState { max_real: eig[0].re });
    }
    let tf = TransferFunctions::new(frame, point, p);
    let n = noise_weights(frame, p);
    let cutoff = 50.0
        * frame
            .omega_eff
            .max(p.kappa)
            .max(point.eff_detuning.abs() + frame.delta_p.abs());

    let mut bps = Vec::new();
    for mu in eig {
        let c = mu.im.abs();
        let w = mu.re.abs();
        bps.push(c);
        for m in [0.25, 1.0, 4.0, 16.0, 64.0, 256.0] {
            bps.push(c - m * w);
            bps.push(c + m * w);
        }
    }
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-11,
        max_intervals: 50_000,
    };
    let inner = quadrature::integrate(|w| spectral_density(&tf, &n, w), 0.0, cutoff, &bps, tol)?;
    // [W, ∞) through ω = W/t, t ∈ (0, 1]
    let outer = quadrature::integrate(
        |t| {
            let f = spectral_density(&tf, &n, cutoff / t);
            let jac = cutoff / (t * t);
            [f[0] * jac, f[1] * jac, f[2] * jac]
        },
        0.0,
        1.0,
        &[],
        tol,
    )?;
    let pi = std::f64::consts::PI;
    let edge = spectral_density(&tf, &n, cutoff);
    let tail: [f64; 3] = std::array::from_fn(|i| edge[i] * cutoff / pi);
    let v: [f64; 3] = std::array::from_fn(|i| (inner.value[i] + outer.value[i]) / pi);
    Ok(SpectralCovariance {
        moments: MechanicalMoments {
            vqq: v[0],
            vpp: v[1],
            vqp: v[2],
        },
        error: std::array::from_fn(|i| (inner.error[i] + outer.error[i]) / pi),
        tail,
        evaluations: inner.evaluations + outer.evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lyapunov,
    Spectral,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Lyapunov => "lyapunov",
            Self::Spectral => "spectral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationReport {
    pub method: Method,
    pub var_q: f64,
    pub var_p: f64,
    pub var_q_t: f64,
    pub var_p_t: f64,
    pub cov_qp_t: f64,
    pub n_eff: f64,
    pub n_eff_t: f64,
    /// n_eff came out negative from rounding and was set to zero.
    pub n_eff_clamped: bool,
    /// K
    pub t_eff: f64,
    /// dB
    pub d_q: f64,
    /// dB
    pub d_p: f64,
    pub eta: f64,
    pub squeeze: f64,
    pub validity: LinearizationValidity,
}

/// Squeezing in dB relative to the vacuum variance.
pub fn squeezing_db(var: f64) -> f64 {
    -10.0 * (var / VACUUM).log10()
}

/// T_eff = ħω_m / (k_B ln(1 + 1/n)); `omega_m` in rad/s.
pub fn effective_temperature(n: f64, omega_m: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    CONSTANTS.hbar * omega_m / (CONSTANTS.k_b * (1.0 / n).ln_1p())
}

/// η = 1 − Ḡ²(Δ′ + Δ_p) / (ω_m e^{4r} (Δ′² + κ_c² − 4G0²))
pub fn bistability_parameter(
    frame: &TransformedFrame,
    point: &OperatingPoint,
    p: &NormalizedParams,
) -> f64 {
    let d = point.eff_detuning;
    let den = frame.omega_eff.powi(2)
        * (d * d + p.kappa * p.kappa - 4.0 * p.opa_gain * p.opa_gain);
    1.0 - frame.coupling.powi(2) * (d + frame.delta_p) / den
}

pub fn report(
    frame: &TransformedFrame,
    point: &OperatingPoint,
    p: &NormalizedParams,
    m: &MechanicalMoments,
    method: Method,
    validity: LinearizationValidity,
) -> FluctuationReport {
    let e2r = (2.0 * frame.squeeze).exp();
    let var_q = m.vqq / e2r;
    let var_p = m.vpp * e2r;
    let n_eff_t = 0.5 * (m.vqq + m.vpp - 1.0);
    let raw = 0.5 * (var_q + var_p - 1.0);
    let (n_eff, n_eff_clamped) = if raw < 0.0 { (0.0, true) } else { (raw, false) };
    FluctuationReport {
        method,
        var_q,
        var_p,
        var_q_t: m.vqq,
        var_p_t: m.vpp,
        cov_qp_t: m.vqp,
        n_eff,
        n_eff_t,
        n_eff_clamped,
        t_eff: effective_temperature(n_eff, p.omega_m),
        d_q: squeezing_db(var_q),
        d_p: squeezing_db(var_p),
        eta: bistability_parameter(frame, point, p),
        squeeze: frame.squeeze,
        validity,
    }
}

/// Full report for a steady-state branch by the chosen method.
pub fn analyze(
    branch: &SteadyStateBranch,
    p: &NormalizedParams,
    method: Method,
) -> Result<FluctuationReport> {
    let point = branch.point();
    let frame = &branch.frame;
    let moments = match method {
        Method::Lyapunov => {
            let a = build_drift(frame, &point, p);
            covariance_lyapunov(&a, &diffusion_matrix(frame, p))?.mechanical()
        }
        Method::Spectral => covariance_spectral(frame, &point, p)?.moments,
    };
    Ok(report(frame, &point, p, &moments, method, branch.validity))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxVariances {
    pub var_q: f64,
    pub var_p: f64,
    pub eta: f64,
    /// Q_m ≥ 100
    pub high_q: bool,
    /// κ_c ≥ 100 γ_m n̄_m
    pub low_temperature: bool,
}

/// Large-Q, low-temperature closed forms in the original frame.
pub fn approx_variances(
    frame: &TransformedFrame,
    point: &OperatingPoint,
    p: &NormalizedParams,
) -> ApproxVariances {
    let reg = point.eff_detuning + frame.delta_p;
    let k = p.kappa + frame.kappa_p;
    let e2r = frame.omega_eff;
    let eta = bistability_parameter(frame, point, p);
    let var_q = 1.0 / (4.0 * reg) + (reg * reg + k * k) / (e2r * e2r * 4.0 * eta * reg);
    let var_p = 0.5 * e2r + ((reg - e2r).powi(2) + k * k) / (4.0 * reg);
    ApproxVariances {
        var_q,
        var_p,
        eta,
        high_q: p.gamma <= 1e-2,
        low_temperature: p.kappa >= 100.0 * p.gamma * p.n_m,
    }
}

/// Δ′ minimizing n_eff for η ≈ 1: −Δ_p + sqrt(ω_m² + (κ_c + κ_p)²).
pub fn optimal_cooling_detuning(p: &NormalizedParams) -> f64 {
    -p.delta_p() + (1.0 + (p.kappa + p.kappa_p()).powi(2)).sqrt()
}

/// n_eff(r) series at the optimal cooling detuning, through r⁵.
pub fn neff_series(r: f64, k_eff: f64) -> f64 {
    let x2 = k_eff * k_eff;
    let s = (1.0 + x2).sqrt();
    -0.5 + 0.5 * s * (1.0 + 4.0 * r * r + 16.0 / 3.0 * r.powi(4))
        - x2 / s * (r + 8.0 / 3.0 * r.powi(3) + 32.0 / 15.0 * r.powi(5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoolingOptimum {
    pub r_opt: f64,
    pub n_eff_min: f64,
}

/// Second-order optimum of the series; `k_eff` = (κ_c + κ_p)/ω_m.
pub fn neff_optimum(k_eff: f64) -> CoolingOptimum {
    let x2 = k_eff * k_eff;
    CoolingOptimum {
        r_opt: 0.25 * x2 / (x2 + 1.0),
        n_eff_min: 0.5 * (-1.0 + (1.0 + x2).sqrt()) - 0.125 * x2 * x2 / (1.0 + x2).powf(1.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SiContext;
    use crate::stability::transform_frame;

    fn params(kappa: f64, gamma: f64, n_m: f64) -> NormalizedParams {
        NormalizedParams {
            omega_m: 2.0 * std::f64::consts::PI * 1e7,
            g: 1e-4,
            epsilon: 0.0,
            kappa,
            gamma,
            duffing: 0.0,
            opa_gain: 0.0,
            opa_phase: 0.0,
            detuning: 1.0,
            n_m,
            n_ph: 0.0,
            context: SiContext::default(),
        }
    }

    fn frame_with(
        p: &NormalizedParams,
        squeeze: f64,
        coupling: f64,
        d: f64,
    ) -> (TransformedFrame, OperatingPoint) {
        let point = OperatingPoint {
            beta: 0.0,
            alpha: 0.0,
            eff_detuning: d,
        };
        let mut f = transform_frame(&point, p);
        f.squeeze = squeeze;
        f.omega_eff = (2.0 * squeeze).exp();
        f.coupling = coupling;
        f.coupling_t = (-squeeze).exp() * coupling;
        (f, point)
    }

    #[test]
    fn scalar_lyapunov() {
        let a = DriftMatrix(-Matrix4::identity());
        let d = DiffusionMatrix(2.0 * Matrix4::identity());
        let v = covariance_lyapunov(&a, &d).unwrap();
        assert!((v.0 - Matrix4::identity()).norm() < 1e-14);
    }

    #[test]
    fn unstable_drift_has_no_stationary_state() {
        let a = DriftMatrix(Matrix4::identity());
        let d = DiffusionMatrix(Matrix4::identity());
        assert!(matches!(
            covariance_lyapunov(&a, &d),
            Err(Error::NoStationaryState { .. })
        ));
    }

    #[test]
    fn diffusion_entries() {
        let p = params(0.3, 1e-3, 0.0);
        let (f, _) = frame_with(&p, 0.0, 0.0, 1.0);
        assert_eq!(diffusion_matrix(&f, &p).0, Matrix4::from_diagonal(&nalgebra::Vector4::new(0.3, 0.3, 1e-3, 1e-3)));
        let p = params(0.3, 1e-3, 10.0);
        let dm = diffusion_matrix(&f, &p).0;
        assert!((dm[(2, 2)] - 21e-3).abs() < 1e-16 && (dm[(3, 3)] - 21e-3).abs() < 1e-16);
        let (f, _) = frame_with(&p, 0.3, 0.0, 1.0);
        let dm = diffusion_matrix(&f, &p).0;
        assert!((dm[(2, 2)] * dm[(3, 3)] - (21e-3f64).powi(2)).abs() < 1e-16);
    }

    #[test]
    fn decoupled_vacuum_is_half() {
        let p = params(0.3, 1e-3, 0.0);
        let (f, pt) = frame_with(&p, 0.0, 0.0, 0.8);
        let v = covariance_lyapunov(&build_drift(&f, &pt, &p), &diffusion_matrix(&f, &p)).unwrap();
        assert!((v.0 - Matrix4::<f64>::identity() * 0.5).norm() < 1e-12);
    }

    #[test]
    fn thermal_oscillator_both_methods() {
        for n in [0.0, 1.0, 100.0] {
            let p = params(0.3, 1e-3, n);
            let (f, pt) = frame_with(&p, 0.0, 0.0, 0.8);
            let s = covariance_spectral(&f, &pt, &p).unwrap().moments;
            assert!((s.vqq - (n + 0.5)).abs() < 1e-9 * (n + 0.5), "{s:?}");
            assert!((s.vpp - (n + 0.5)).abs() < 1e-9 * (n + 0.5));
            let r = report(&f, &pt, &p, &s, Method::Spectral, LinearizationValidity {
                beta_large: false,
                duffing_small: true,
                ratio_enhanced: 0.0,
                ratio_coupling: 0.0,
            });
            assert!((r.n_eff - n).abs() < 1e-9 * n.max(1.0));
        }
    }

    #[test]
    fn transfer_function_identities() {
        let mut p = params(0.3, 2e-3, 0.0);
        p.opa_gain = 0.05;
        p.opa_phase = 0.9;
        let (f, pt) = frame_with(&p, 0.2, 0.15, 1.1);
        let tf = TransferFunctions::new(&f, &pt, &p);
        let a = build_drift(&f, &pt, &p).0;
        for i in 0..100 {
            let w = -5.0 + 0.1 * i as f64 + 0.003;
            let (av, bv) = tf.at(w);
            assert_eq!(bv[3], av[2]);
            let lhs = av[3] * Complex64::new(p.gamma, -w);
            let rhs = f.omega_eff * av[2];
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1e-300));
            // resolvent oracle: (−iω − A)⁻¹ rows q, p times sqrt(2·rate)
            let m = nalgebra::Matrix4::<Complex64>::from_fn(|r, c| {
                let id = if r == c { Complex64::new(0.0, -w) } else { Complex64::new(0.0, 0.0) };
                id - a[(r, c)]
            });
            let det = m.determinant();
            assert!((det - tf.d(w)).norm() < 1e-10 * det.norm());
            let inv = m.try_inverse().unwrap();
            let rate = [p.kappa, p.kappa, p.gamma, p.gamma];
            for j in 0..4 {
                let s = (2.0 * rate[j]).sqrt();
                assert!((inv[(2, j)] * s - av[j]).norm() < 1e-10 * av[j].norm().max(1e-12));
                assert!((inv[(3, j)] * s - bv[j]).norm() < 1e-10 * bv[j].norm().max(1e-12));
            }
        }
    }

    #[test]
    fn lyapunov_matches_spectral_coupled_squeezed() {
        let mut p = params(0.25, 1e-4, 50.0);
        p.opa_gain = 0.04;
        p.opa_phase = 1.0;
        let (f, pt) = frame_with(&p, 0.3, 0.08, 1.6);
        let a = build_drift(&f, &pt, &p);
        assert!(a.max_real() < 0.0);
        let l = covariance_lyapunov(&a, &diffusion_matrix(&f, &p)).unwrap().mechanical();
        let s = covariance_spectral(&f, &pt, &p).unwrap().moments;
        for (x, y) in [(l.vqq, s.vqq), (l.vpp, s.vpp)] {
            assert!((x - y).abs() < 1e-6 * x.abs(), "{x} vs {y}");
        }
        assert!((l.vqp - s.vqp).abs() < 1e-6 * l.vqq.abs());
    }

    #[test]
    fn three_db_definition() {
        assert!((squeezing_db(0.25) - 10.0 * 2f64.log10()).abs() < 1e-15);
        assert_eq!(squeezing_db(0.5), 0.0);
    }

    #[test]
    fn thermal_temperature_limit() {
        let w = 2.0 * std::f64::consts::PI * 1e7;
        let n = 1e4;
        let t = effective_temperature(n, w);
        let classical = CONSTANTS.hbar * w * n / CONSTANTS.k_b;
        assert!((t - classical).abs() / classical < 1e-4);
        assert_eq!(effective_temperature(0.0, w), 0.0);
    }

    #[test]
    fn approximate_variances_reductions() {
        // r = 0, η = 1 (Ḡ = 0), Δ′ + Δ_p = ω_m, κ_c = −κ_p
        let mut p = params(0.3, 1e-6, 0.0);
        p.opa_gain = 0.15;
        p.opa_phase = std::f64::consts::PI;
        let (f, pt) = frame_with(&p, 0.0, 0.0, 1.0);
        let av = approx_variances(&f, &pt, &p);
        assert_eq!(av.eta, 1.0);
        assert!((av.var_q - 0.5).abs() < 1e-15 && (av.var_p - 0.5).abs() < 1e-15);
        // same with r > 0 and Δ′ + Δ_p = e^{2r}ω_m
        let r = 0.2;
        let (f, pt) = frame_with(&p, r, 0.0, (2.0 * r).exp());
        let av = approx_variances(&f, &pt, &p);
        assert!((av.var_q - 0.5 * (-2.0 * r).exp()).abs() < 1e-14);
        assert!((av.var_p - 0.5 * (2.0 * r).exp()).abs() < 1e-14);
    }

    #[test]
    fn optimum_values() {
        let o = neff_optimum(0.0);
        assert_eq!((o.r_opt, o.n_eff_min), (0.0, 0.0));
        let o = neff_optimum(0.3);
        assert!((o.r_opt - 0.020_642).abs() < 1e-6);
        // second-order truncation of the series is minimized at r_opt
        let x2: f64 = 0.09;
        let s = (1.0 + x2).sqrt();
        let quad = |r: f64| -0.5 + 0.5 * s * (1.0 + 4.0 * r * r) - x2 / s * r;
        assert!((quad(o.r_opt) - o.n_eff_min).abs() < 1e-15);
        assert!(quad(o.r_opt) < quad(o.r_opt + 1e-4) && quad(o.r_opt) < quad(o.r_opt - 1e-4));
        assert!((neff_series(0.0, 0.3) - (s - 1.0) / 2.0).abs() < 1e-15);
    }
}
