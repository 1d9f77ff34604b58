//! Globally adaptive 7/15-point Gauss–Kronrod quadrature for vector-valued
//! integrands on a finite interval with user breakpoints.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 0.0,
            rel: 1e-10,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub evaluations: usize,
    pub intervals: usize,
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    /// max over components of the error, used for ordering
    key: f64,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key)
    }
}

fn kronrod<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64, scale: f64) -> Piece<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for i in 0..N {
        k[i] = WGK[7] * fc[i];
        g[i] = WG[3] * fc[i];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        for i in 0..N {
            let s = f1[i] + f2[i];
            k[i] += WGK[j] * s;
            if j % 2 == 1 {
                g[i] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut key: f64 = 0.0;
    for i in 0..N {
        value[i] = k[i] * h;
        error[i] = ((k[i] - g[i]) * h).abs();
        key = key.max(error[i] / scale.max(f64::MIN_POSITIVE));
    }
    Piece { a, b, value, error, key }
}

/// Integrate `f` over `[a, b]`, splitting first at the in-range
/// `breakpoints`. Every component must reach `max(abs, rel·max_j |I_j|)`.
pub fn integrate<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Integral<N>> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Quadrature(format!("bad interval [{a}, {b}]")));
    }
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breakpoints.iter().copied().filter(|x| *x > a && *x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        heap.push(kronrod(&f, w[0], w[1], 1.0));
    }
    let mut evaluations = 15 * heap.len();

    loop {
        let mut total = [0.0; N];
        let mut err = [0.0; N];
        for p in heap.iter() {
            for i in 0..N {
                total[i] += p.value[i];
                err[i] += p.error[i];
            }
        }
        let big = total.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let target = tol.abs.max(tol.rel * big);
        let done = err.iter().all(|e| *e <= target);
        if done {
            return Ok(Integral {
                value: total,
                error: err,
                evaluations,
                intervals: heap.len(),
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature(format!(
                "{} intervals, error {:?} on value {:?}",
                heap.len(),
                err,
                total
            )));
        }
        // re-rank against the current target
        let mut pieces: Vec<Piece<N>> = heap.into_vec();
        for p in pieces.iter_mut() {
            p.key = p.error.iter().fold(0.0f64, |m, e| m.max(e / target.max(f64::MIN_POSITIVE)));
        }
        heap = BinaryHeap::from(pieces);
        // bisect a batch of the worst intervals
        let batch = (heap.len() / 8).clamp(1, 64);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let m = 0.5 * (worst.a + worst.b);
            if !(m > worst.a && m < worst.b) {
                return Err(Error::Quadrature(format!(
                    "interval [{}, {}] cannot be bisected further",
                    worst.a, worst.b
                )));
            }
            heap.push(kronrod(&f, worst.a, m, target));
            heap.push(kronrod(&f, m, worst.b, target));
            evaluations += 30;
        }
    }
}
