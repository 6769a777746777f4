//! Adaptive Gauss-Kronrod (G10/K21) quadrature with bisection, plus an
//! infinite-line driver that maps the tails onto finite intervals.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{CbsError, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn parts(&self) -> (f64, f64);
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn parts(&self) -> (f64, f64) {
        (*self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// Convergence target: stop once the error estimate falls below
/// `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            ..Self::default()
        }
    }

    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            ..Self::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs >= 0.0 && self.rel >= 0.0) || !(self.abs > 0.0 || self.rel > 0.0) {
            return Err(CbsError::InputDomain("tolerance must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(CbsError::InputDomain("need at least one subdivision"));
        }
        Ok(())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-8,
            rel: 0.0,
            max_subdivisions: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Contribution of the mapped tails (zero for finite intervals).
    pub tail: T,
}

#[derive(Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn kronrod21<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = T::zero();
    let mut kronrod = fc * WGK[10];
    for (j, &x) in XGK.iter().enumerate().take(10) {
        let dx = half * x;
        let sum = f(center - dx) + f(center + dx);
        kronrod = kronrod + sum * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + sum * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    (value, error)
}

fn total<T: QuadValue>(segments: &[Segment<T>]) -> (T, f64) {
    segments.iter().fold((T::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error))
}

fn adapt<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    mut segments: Vec<Segment<T>>,
    tol: &Tolerance,
    mut evaluations: usize,
) -> QuadratureResult<T> {
    loop {
        let (value, error) = total(&segments);
        if error <= tol.target(value.magnitude()) {
            return QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
                converged: true,
                tail: T::zero(),
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if segments.len() >= tol.max_subdivisions || !(mid > seg.a && mid < seg.b) {
            return QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
                converged: false,
                tail: T::zero(),
            };
        }
        let (lv, le) = kronrod21(f, seg.a, mid);
        let (rv, re) = kronrod21(f, mid, seg.b);
        evaluations += 42;
        segments[worst] = Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        };
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
        });
    }
}

fn finish<T: QuadValue>(r: QuadratureResult<T>) -> Result<QuadratureResult<T>> {
    if r.converged {
        Ok(r)
    } else {
        let (partial_re, partial_im) = r.value.parts();
        Err(CbsError::QuadratureNotConverged {
            partial_re,
            partial_im,
            error_estimate: r.error_estimate,
            evaluations: r.evaluations,
        })
    }
}

/// Adaptive quadrature of `f` over `[a, b]`, with optional interior
/// breakpoints where the integrand has structure.
pub fn integrate<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: &Tolerance,
) -> Result<QuadratureResult<T>> {
    tol.validate()?;
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(CbsError::InputDomain("integration bounds must be finite with a < b"));
    }
    let mut points: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mut edges = Vec::with_capacity(points.len() + 2);
    edges.push(a);
    edges.extend(points);
    edges.push(b);
    let segments: Vec<Segment<T>> = edges
        .windows(2)
        .map(|w| {
            let (value, error) = kronrod21(&f, w[0], w[1]);
            Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            }
        })
        .collect();
    let evaluations = 21 * segments.len();
    finish(adapt(&f, segments, tol, evaluations))
}

/// Integral over the whole real line.
///
/// The window `[lo, hi]` is integrated directly; each tail is mapped onto
/// `(0, 1]` through `x = hi + w (1/t - 1)` (and its mirror), which keeps integrands
/// decaying like `1/x^2` bounded, so no truncation error is incurred.
pub fn integrate_real_line<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    tol: &Tolerance,
) -> Result<QuadratureResult<T>> {
    tol.validate()?;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(CbsError::InputDomain("window must be finite with lo < hi"));
    }
    let width = hi - lo;
    let upper = |t: f64| f(hi + width * (1.0 / t - 1.0)) * (width / (t * t));
    let lower = |t: f64| f(lo - width * (1.0 / t - 1.0)) * (width / (t * t));

    // Window gets most of the error budget; each tail one tenth.
    let core_tol = Tolerance {
        abs: 0.8 * tol.abs,
        rel: 0.8 * tol.rel,
        ..*tol
    };
    let tail_tol = Tolerance {
        abs: 0.1 * tol.abs,
        rel: 0.1 * tol.rel,
        ..*tol
    };

    let core = integrate(&f, lo, hi, breakpoints, &core_tol);
    // A relative tail target would be measured against the (small) tail
    // itself; scale it by the window value instead.
    let core = core?;
    let tail_abs = tail_tol.abs.max(tail_tol.rel * core.value.magnitude());
    let tail_tol = Tolerance {
        abs: tail_abs.max(f64::MIN_POSITIVE),
        rel: 0.0,
        ..tail_tol
    };
    let up = integrate(upper, 0.0, 1.0, &[], &tail_tol)?;
    let down = integrate(lower, 0.0, 1.0, &[], &tail_tol)?;
    let tail = up.value + down.value;
    Ok(QuadratureResult {
        value: core.value + tail,
        error_estimate: core.error_estimate + up.error_estimate + down.error_estimate,
        evaluations: core.evaluations + up.evaluations + down.evaluations,
        converged: true,
        tail,
    })
}
