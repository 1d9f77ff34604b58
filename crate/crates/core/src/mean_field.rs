//! Time-domain mean-field equations for ⟨a⟩ and ⟨b⟩, used to cross-check
//! the steady-state branches dynamically.
//!
//! State ordering is (Re a, Im a, Re b, Im b). The drive is ε e^{iφ} with
//! ε = `p.epsilon` and φ the drive phase.

use nalgebra::{Matrix4, Schur, Vector4};
use num_complex::Complex64;
use ode_solvers::{Dopri5, OutputType, System};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::NormalizedParams;
use crate::steady_state::SteadyStateBranch;

pub type State = Vector4<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanField {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl MeanField {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self {
            a: [a.re, a.im],
            b: [b.re, b.im],
        }
    }

    pub fn a(&self) -> Complex64 {
        Complex64::new(self.a[0], self.a[1])
    }

    pub fn b(&self) -> Complex64 {
        Complex64::new(self.b[0], self.b[1])
    }

    fn to_state(self) -> State {
        State::new(self.a[0], self.a[1], self.b[0], self.b[1])
    }

    fn from_state(y: &State) -> Self {
        Self {
            a: [y[0], y[1]],
            b: [y[2], y[3]],
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Field {
    kappa: f64,
    gamma: f64,
    g: f64,
    duffing: f64,
    detuning: f64,
    kappa_p: f64,
    delta_p: f64,
    drive: [f64; 2],
}

impl Field {
    fn new(p: &NormalizedParams, drive_phase: f64) -> Self {
        Self {
            kappa: p.kappa,
            gamma: p.gamma,
            g: p.g,
            duffing: p.duffing,
            detuning: p.detuning,
            kappa_p: p.kappa_p(),
            delta_p: p.delta_p(),
            drive: [p.epsilon * drive_phase.cos(), p.epsilon * drive_phase.sin()],
        }
    }

    fn eval(&self, y: &State) -> State {
        let (ar, ai, br, bi) = (y[0], y[1], y[2], y[3]);
        let d = self.detuning - 2.0 * self.g * br;
        let x = 2.0 * br;
        State::new(
            -(self.kappa - self.kappa_p) * ar + (d + self.delta_p) * ai + self.drive[0],
            -(d - self.delta_p) * ar - (self.kappa + self.kappa_p) * ai + self.drive[1],
            bi - self.gamma * br,
            -br - 2.0 * self.duffing * (x * x * x + 3.0 * x) + self.g * (ar * ar + ai * ai)
                - self.gamma * bi,
        )
    }

    fn jacobian(&self, y: &State) -> Matrix4<f64> {
        let (ar, ai, br) = (y[0], y[1], y[2]);
        let d = self.detuning - 2.0 * self.g * br;
        let x = 2.0 * br;
        let (k, kp, dp, g, gm) = (self.kappa, self.kappa_p, self.delta_p, self.g, self.gamma);
        #[rustfmt::skip]
        let j = Matrix4::new(
            -(k - kp),             d + dp,          -2.0 * g * ai,                                 0.0,
            -(d - dp),             -(k + kp),       2.0 * g * ar,                                  0.0,
            0.0,                   0.0,             -gm,                                           1.0,
            2.0 * g * ar,          2.0 * g * ai,    -1.0 - 4.0 * self.duffing * (3.0 * x * x + 3.0), -gm,
        );
        j
    }
}

/// Mean-field vector field.
pub fn vector_field(p: &NormalizedParams, drive_phase: f64, s: &MeanField) -> MeanField {
    MeanField::from_state(&Field::new(p, drive_phase).eval(&s.to_state()))
}

/// Jacobian of the vector field in (Re a, Im a, Re b, Im b).
pub fn jacobian(p: &NormalizedParams, drive_phase: f64, s: &MeanField) -> Matrix4<f64> {
    Field::new(p, drive_phase).jacobian(&s.to_state())
}

struct OdeSystem {
    field: Field,
    guard: f64,
    diverged: bool,
}

impl System<f64, State> for OdeSystem {
    fn system(&self, _t: f64, y: &State, dy: &mut State) {
        *dy = self.field.eval(y);
    }

    fn solout(&mut self, _t: f64, y: &State, _dy: &State) -> bool {
        if y.amax() >= self.guard || y.amax().is_nan() {
            self.diverged = true;
        }
        self.diverged
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub rtol: f64,
    pub atol: f64,
    pub drive_phase: f64,
    /// States with any component above this count as diverged.
    pub overflow_guard: f64,
    pub max_steps: u32,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            drive_phase: 0.0,
            overflow_guard: 1e12,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<MeanField>,
    /// Integration stopped early at the overflow guard.
    pub diverged: bool,
}

impl Trajectory {
    pub fn last(&self) -> Option<&MeanField> {
        self.states.last()
    }
}

fn run(
    field: Field,
    y0: State,
    t0: f64,
    t1: f64,
    dt: f64,
    opts: &IntegrationOptions,
) -> Result<(Vec<f64>, Vec<State>, bool)> {
    // one sparse solve per sample interval; the dense interpolant of the
    // underlying solver is not reliable at the end of the range
    let n = ((t1 - t0) / dt).ceil().max(1.0) as usize;
    let mut ts = vec![t0];
    let mut ys = vec![y0];
    let mut y = y0;
    let mut steps = 0u32;
    for k in 1..=n {
        let a = t0 + (k - 1) as f64 * dt;
        let b = if k == n { t1 } else { t0 + k as f64 * dt };
        let sys = OdeSystem {
            field,
            guard: opts.overflow_guard,
            diverged: false,
        };
        let mut solver = Dopri5::from_param(
            sys,
            a,
            b,
            b - a,
            y,
            opts.rtol,
            opts.atol,
            0.9,
            0.04,
            0.2,
            10.0,
            b - a,
            0.0,
            opts.max_steps.saturating_sub(steps).max(1),
            1000,
            OutputType::Sparse,
        );
        let res = solver.integrate();
        let (t, out) = solver.results().get();
        let last = out.last().copied().unwrap_or(y);
        let diverged = last.amax() >= opts.overflow_guard || last.amax().is_nan();
        match res {
            Ok(stats) => steps = steps.saturating_add(stats.accepted_steps + stats.rejected_steps),
            Err(_) if diverged => {}
            Err(e) => return Err(Error::Integration(e.to_string())),
        }
        ts.push(if diverged { t.last().copied().unwrap_or(b) } else { b });
        ys.push(last);
        if diverged {
            return Ok((ts, ys, true));
        }
        y = last;
    }
    Ok((ts, ys, false))
}

/// Integrates from `initial` over [0, t_end] with adaptive Dormand–Prince
/// steps, sampling every `dt`.
pub fn integrate_mean_field(
    p: &NormalizedParams,
    initial: MeanField,
    t_end: f64,
    dt: f64,
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    if !(t_end > 0.0 && dt > 0.0) {
        return Err(Error::InvalidInput("t_end and dt must be positive".into()));
    }
    let y0 = initial.to_state();
    if !y0.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidInput("non-finite initial state".into()));
    }
    let (t, y, diverged) = run(Field::new(p, opts.drive_phase), y0, 0.0, t_end, dt, opts)?;
    Ok(Trajectory {
        t,
        states: y.iter().map(MeanField::from_state).collect(),
        diverged,
    })
}

/// Newton iteration on the vector field; `None` if it does not converge.
pub fn polish_fixed_point(p: &NormalizedParams, drive_phase: f64, guess: &MeanField) -> Option<MeanField> {
    let field = Field::new(p, drive_phase);
    let mut y = guess.to_state();
    for _ in 0..60 {
        let f = field.eval(&y);
        let step = field.jacobian(&y).lu().solve(&f)?;
        y -= step;
        if !y.iter().all(|x| x.is_finite()) {
            return None;
        }
        if step.amax() <= 1e-14 * y.amax().max(1.0) {
            return Some(MeanField::from_state(&y));
        }
    }
    None
}

/// Largest real part of the Jacobian eigenvalues at `s`.
pub fn max_growth_rate(p: &NormalizedParams, drive_phase: f64, s: &MeanField) -> f64 {
    let j = jacobian(p, drive_phase, s);
    let ev = match Schur::try_new(j, f64::EPSILON, 10_000) {
        Some(sc) => sc.complex_eigenvalues(),
        None => j.complex_eigenvalues(),
    };
    ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttractorOptions {
    pub integration: IntegrationOptions,
    /// Length of each integration chunk between convergence checks.
    pub chunk: f64,
    pub t_max: f64,
    /// A trajectory within this relative distance of a stable fixed point
    /// is taken to have converged to it.
    pub capture: f64,
}

impl Default for AttractorOptions {
    fn default() -> Self {
        Self {
            integration: IntegrationOptions::default(),
            chunk: 25.0,
            t_max: 1e6,
            capture: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Attractor {
    FixedPoint { state: MeanField, time: f64 },
    /// Exceeded the overflow guard: no attractor from this seed.
    Diverged { time: f64 },
    /// Still moving at t_max (limit cycle or very slow relaxation).
    NotConverged { state: MeanField },
}

/// Integrates from `initial` until the state settles on a stable fixed point
/// of the flow, which is then returned Newton-polished.
pub fn find_attractor(p: &NormalizedParams, initial: MeanField, opts: &AttractorOptions) -> Result<Attractor> {
    let phase = opts.integration.drive_phase;
    let field = Field::new(p, phase);
    let mut y = initial.to_state();
    let mut t = 0.0;
    while t < opts.t_max {
        let t1 = (t + opts.chunk).min(opts.t_max);
        let (_, ys, diverged) = run(field, y, t, t1, t1 - t, &opts.integration)?;
        if diverged {
            return Ok(Attractor::Diverged { time: t1 });
        }
        y = *ys.last().ok_or_else(|| Error::Integration("empty output".into()))?;
        t = t1;
        let here = MeanField::from_state(&y);
        if let Some(fp) = polish_fixed_point(p, phase, &here) {
            let z = fp.to_state();
            let close = (z - y).amax() <= opts.capture * z.amax().max(1.0);
            if close && max_growth_rate(p, phase, &fp) < 0.0 {
                return Ok(Attractor::FixedPoint { state: fp, time: t });
            }
        }
    }
    Ok(Attractor::NotConverged {
        state: MeanField::from_state(&y),
    })
}

/// Drive phase that makes ⟨a⟩ real and positive on this branch.
pub fn branch_drive_phase(branch: &SteadyStateBranch, p: &NormalizedParams) -> f64 {
    (branch.eff_detuning - p.delta_p()).atan2(p.kappa_bar())
}

/// Index of the branch whose (β_s, α_s) matches Re⟨b⟩ and |⟨a⟩| within
/// relative `tol`.
pub fn match_branch(state: &MeanField, branches: &[SteadyStateBranch], tol: f64) -> Option<usize> {
    let beta = state.b[0];
    let alpha = state.a().norm();
    branches.iter().position(|br| {
        (beta - br.beta).abs() <= tol * br.beta.abs().max(1.0)
            && (alpha - br.alpha).abs() <= tol * br.alpha.abs().max(1.0)
    })
}
