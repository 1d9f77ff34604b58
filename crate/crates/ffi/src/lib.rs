//! C ABI over `optomech-core`.
//!
//! A system is an opaque `OmSystem` handle built from JSON (or the default
//! parameter set) and released with `om_system_free`. Every call returns an
//! `OmStatus`; on failure `om_last_error` gives a message for the calling
//! thread. Results are written through caller-owned out-pointers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use optomech_core::config;
use optomech_core::criticality::{
    critical_values, critical_values_exact, critical_values_harmonic, critical_values_perturbative,
};
use optomech_core::fluctuations::{analyze, Method};
use optomech_core::steady_state::{operating_branch, solve_branches, SteadyStateBranch};
use optomech_core::{Error, NormalizedParams, SystemParams};

/// Opaque parameter set.
pub struct OmSystem {
    params: SystemParams,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidParameter = 3,
    NoStableBranch = 4,
    NoStationaryState = 5,
    NotApplicable = 6,
    Computation = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmCriticalMethod {
    Auto = 0,
    Exact = 1,
    Perturbative = 2,
    Harmonic = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmFluctuationMethod {
    Lyapunov = 0,
    Spectral = 1,
}

/// One steady-state branch; normalized units (ω_m = 1).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmBranch {
    pub beta: f64,
    pub alpha: f64,
    pub intensity: f64,
    pub eff_detuning: f64,
    pub max_real: f64,
    pub stable: bool,
    pub marginal: bool,
    pub beta_large: bool,
    pub duffing_small: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmCritical {
    pub beta: f64,
    /// units of ω_m
    pub detuning: f64,
    pub eps2: f64,
    /// W
    pub power: f64,
    /// 1 exact, 2 perturbative, 3 harmonic
    pub method: i32,
    pub trusted: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmFluctuations {
    pub branch: usize,
    pub var_q: f64,
    pub var_p: f64,
    pub n_eff: f64,
    /// K
    pub t_eff: f64,
    /// dB
    pub d_q: f64,
    /// dB
    pub d_p: f64,
    pub eta: f64,
    pub squeeze: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(OmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameter { .. } | Error::Config(_) => OmStatus::InvalidParameter,
            Error::InvalidInput(_) | Error::UnknownPreset(_) => OmStatus::InvalidArgument,
            Error::NoStationaryState { .. } => OmStatus::NoStationaryState,
            Error::HarmonicRouteRequired => OmStatus::NotApplicable,
            _ => OmStatus::Computation,
        };
        Fail(status, e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> OmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            OmStatus::Ok
        }
        Ok(Err(Fail(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            OmStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(OmStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(OmStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn system<'a>(h: *const OmSystem) -> Result<&'a OmSystem, Fail> {
    h.as_ref().ok_or_else(null)
}

fn normalized(s: &OmSystem) -> Result<NormalizedParams, Fail> {
    Ok(s.params.normalize()?)
}

fn branch_out(b: &SteadyStateBranch) -> OmBranch {
    OmBranch {
        beta: b.beta,
        alpha: b.alpha,
        intensity: b.intensity,
        eff_detuning: b.eff_detuning,
        max_real: b.verdict.max_real,
        stable: b.stable,
        marginal: b.marginal,
        beta_large: b.validity.beta_large,
        duffing_small: b.validity.duffing_small,
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn om_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Default parameter set (bare cavity, 3 mW, ω_m/2π = 5 MHz).
#[no_mangle]
pub extern "C" fn om_system_new_default() -> *mut OmSystem {
    Box::into_raw(Box::new(OmSystem {
        params: config::default_params(),
    }))
}

/// Builds a system from a JSON object of parameter fields, overlaid on the defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn om_system_from_json(json: *const c_char, out: *mut *mut OmSystem) -> OmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        *out = ptr::null_mut();
        let cfg = config::from_json(str_arg(json)?)?;
        cfg.params.validate()?;
        *out = Box::into_raw(Box::new(OmSystem { params: cfg.params }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn om_system_free(h: *mut OmSystem) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Sets one parameter by key, e.g. "detuning_over_omegam" or "input_power_mw".
///
/// # Safety
/// `h` must be a live handle and `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn om_system_set(h: *mut OmSystem, key: *const c_char, value: f64) -> OmStatus {
    guard(|| {
        let s = h.as_mut().ok_or_else(null)?;
        let mut p = s.params.clone();
        config::set_param(&mut p, str_arg(key)?, value)?;
        p.validate()?;
        s.params = p;
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle, `key` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn om_system_get(h: *const OmSystem, key: *const c_char, out: *mut f64) -> OmStatus {
    guard(|| {
        let s = system(h)?;
        let v = config::get_param(&s.params, str_arg(key)?)?;
        *out.as_mut().ok_or_else(null)? = v;
        Ok(())
    })
}

/// Writes up to `cap` branches (ascending β) into `out` and their total
/// count into `count`. With `out` null only the count is written.
/// Returns `BufferTooSmall` when `cap` is less than the count.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `cap` elements or be null; `count` writable.
#[no_mangle]
pub unsafe extern "C" fn om_steady_state(
    h: *const OmSystem,
    out: *mut OmBranch,
    cap: usize,
    count: *mut usize,
) -> OmStatus {
    guard(|| {
        let p = normalized(system(h)?)?;
        let count = count.as_mut().ok_or_else(null)?;
        let branches = solve_branches(&p)?;
        *count = branches.len();
        if out.is_null() {
            return Ok(());
        }
        for (i, b) in branches.iter().take(cap).enumerate() {
            *out.add(i) = branch_out(b);
        }
        if cap < branches.len() {
            return Err(Fail(
                OmStatus::BufferTooSmall,
                format!("{} branches, buffer holds {cap}", branches.len()),
            ));
        }
        Ok(())
    })
}

/// Critical point of the multistability region.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn om_critical(h: *const OmSystem, method: OmCriticalMethod, out: *mut OmCritical) -> OmStatus {
    guard(|| {
        let p = normalized(system(h)?)?;
        let out = out.as_mut().ok_or_else(null)?;
        let c = match method {
            OmCriticalMethod::Auto => critical_values(&p)?,
            OmCriticalMethod::Exact => critical_values_exact(&p)?,
            OmCriticalMethod::Perturbative => critical_values_perturbative(&p)?,
            OmCriticalMethod::Harmonic => critical_values_harmonic(&p)?,
        };
        *out = OmCritical {
            beta: c.beta,
            detuning: c.detuning,
            eps2: c.eps2,
            power: c.power,
            method: match c.method.as_str() {
                "exact" => 1,
                "perturbative" => 2,
                _ => 3,
            },
            trusted: c.trusted,
        };
        Ok(())
    })
}

/// Fluctuations on branch `branch`; a negative index picks the brightest stable branch.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn om_fluctuations(
    h: *const OmSystem,
    branch: isize,
    method: OmFluctuationMethod,
    out: *mut OmFluctuations,
) -> OmStatus {
    guard(|| {
        let p = normalized(system(h)?)?;
        let out = out.as_mut().ok_or_else(null)?;
        let branches = solve_branches(&p)?;
        let k = if branch < 0 {
            operating_branch(&branches)
                .ok_or_else(|| Fail(OmStatus::NoStableBranch, "no stable steady-state branch".into()))?
        } else if (branch as usize) < branches.len() {
            branch as usize
        } else {
            return Err(Fail(
                OmStatus::InvalidArgument,
                format!("branch {branch} out of range ({} branches)", branches.len()),
            ));
        };
        let m = match method {
            OmFluctuationMethod::Lyapunov => Method::Lyapunov,
            OmFluctuationMethod::Spectral => Method::Spectral,
        };
        let f = analyze(&branches[k], &p, m)?;
        *out = OmFluctuations {
            branch: k,
            var_q: f.var_q,
            var_p: f.var_p,
            n_eff: f.n_eff,
            t_eff: f.t_eff,
            d_q: f.d_q,
            d_p: f.d_p,
            eta: f.eta,
            squeeze: f.squeeze,
        };
        Ok(())
    })
}
