//! Real-coefficient polynomial helpers. Coefficients are stored in
//! descending degree order: `c[0] x^n + c[1] x^(n-1) + ... + c[n]`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative imaginary-part threshold under which an eigenvalue counts as real.
pub const REAL_ROOT_TOL: f64 = 1e-8;

/// Two real roots closer than this (relative) are flagged near-degenerate.
pub const NEAR_DEGENERATE_TOL: f64 = 1e-6;

/// Value and first derivative by Horner's scheme.
pub fn eval_with_derivative(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Drop exactly-zero leading coefficients.
pub fn trim_leading(coeffs: &[f64]) -> &[f64] {
    let first = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
    &coeffs[first..]
}

/// Number of sign changes in the nonzero coefficient sequence; an upper bound
/// (of equal parity) on the number of positive real roots.
pub fn descartes_sign_changes(coeffs: &[f64]) -> Result<usize> {
    let mut signs = coeffs.iter().filter(|c| **c != 0.0).map(|c| c.signum());
    let Some(mut prev) = signs.next() else {
        return Err(Error::InvalidInput("all-zero polynomial".into()));
    };
    let mut changes = 0;
    for s in signs {
        if s != prev {
            changes += 1;
        }
        prev = s;
    }
    Ok(changes)
}

/// Parlett–Reinsch diagonal similarity balancing, radix 2.
fn balance(m: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// All complex roots via eigenvalues of the balanced companion matrix.
pub fn complex_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidInput("non-finite polynomial coefficient".into()));
    }
    let c = trim_leading(coeffs);
    if c.is_empty() {
        return Err(Error::InvalidInput("all-zero polynomial".into()));
    }
    let n = c.len() - 1;
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![Complex64::new(-c[1] / c[0], 0.0)]),
        _ => {}
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -c[j + 1] / c[0];
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    balance(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::InvalidInput("companion eigenvalue iteration failed".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    /// Another real root lies within [`NEAR_DEGENERATE_TOL`].
    pub near_degenerate: bool,
}

/// One Newton step, kept only if it lowers |p|.
fn newton_polish(coeffs: &[f64], x: f64) -> f64 {
    let (p, dp) = eval_with_derivative(coeffs, x);
    if dp == 0.0 || !dp.is_finite() {
        return x;
    }
    let y = x - p / dp;
    if eval(coeffs, y).abs() < p.abs() {
        y
    } else {
        x
    }
}

/// Real roots, ascending. An eigenvalue is real when
/// `|Im| < REAL_ROOT_TOL · (1 + |Re|)`.
pub fn real_roots(coeffs: &[f64]) -> Result<Vec<RealRoot>> {
    let c = trim_leading(coeffs);
    let mut xs: Vec<f64> = complex_roots(c)?
        .into_iter()
        .filter(|z| z.im.abs() < REAL_ROOT_TOL * (1.0 + z.re.abs()))
        .map(|z| newton_polish(c, z.re))
        .collect();
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<RealRoot> = xs
        .iter()
        .map(|&value| RealRoot {
            value,
            near_degenerate: false,
        })
        .collect();
    for i in 1..out.len() {
        let (a, b) = (out[i - 1].value, out[i].value);
        if (b - a).abs() <= NEAR_DEGENERATE_TOL * (1.0 + a.abs().max(b.abs())) {
            out[i - 1].near_degenerate = true;
            out[i].near_degenerate = true;
        }
    }
    Ok(out)
}
