//! Adaptive Gauss–Kronrod (10/21 point) quadrature on finite intervals,
//! for real and complex integrands.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("subdivision limit reached: value {value:e}, error estimate {error:e}")]
    MaxSubdivisions { value: f64, error: f64 },
    #[error("integrand is not finite at t = {0}")]
    NonFinite(f64),
}

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_223_048,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One 21-point Kronrod panel: returns (Kronrod estimate, |Kronrod − Gauss|).
pub fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod = kronrod + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).magnitude())
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub epsabs: f64,
    pub epsrel: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { epsabs: 1e-12, epsrel: 1e-10, max_intervals: 2000 }
    }
}

impl QuadConfig {
    pub fn new(epsabs: f64, epsrel: f64) -> Self {
        QuadConfig { epsabs, epsrel, ..Default::default() }
    }
}

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive integration over `[a, b]`.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    cfg: QuadConfig,
) -> Result<QuadResult<T>, QuadError> {
    integrate_with_breaks(f, &[a, b], cfg)
}

/// Globally adaptive integration starting from the panels delimited by
/// `breaks` (sorted, at least two points).
pub fn integrate_with_breaks<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    breaks: &[f64],
    cfg: QuadConfig,
) -> Result<QuadResult<T>, QuadError> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    for w in breaks.windows(2) {
        let (value, error) = gk21(&mut f, w[0], w[1]);
        heap.push(Piece { a: w[0], b: w[1], value, error });
    }
    let limit = cfg.max_intervals.max(breaks.len());
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        for p in heap.iter() {
            total = total + p.value;
            err += p.error;
        }
        if !total.magnitude().is_finite() {
            let worst = heap.peek().map(|p| 0.5 * (p.a + p.b)).unwrap_or(f64::NAN);
            return Err(QuadError::NonFinite(worst));
        }
        let target = cfg.epsabs.max(cfg.epsrel * total.magnitude());
        if err <= target {
            return Ok(QuadResult { value: total, error: err, intervals: heap.len() });
        }
        if heap.len() >= limit {
            return Err(QuadError::MaxSubdivisions { value: total.magnitude(), error: err });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Err(QuadError::MaxSubdivisions { value: total.magnitude(), error: err });
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

/// Non-adaptive composite 21-point Kronrod rule on `panels` equal panels.
pub fn fixed_panels<T: QuadValue, F: FnMut(f64) -> T>(mut f: F, a: f64, b: f64, panels: usize) -> T {
    let width = (b - a) / panels as f64;
    let mut total = T::zero();
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        total = total + gk21(&mut f, lo, hi).0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(7) - 3.0 * x * x, 0.0, 2.0, QuadConfig::default()).unwrap();
        assert!((r.value - (32.0 - 8.0)).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, QuadConfig::new(1e-10, 1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn complex_integrand() {
        // ∫₀^π e^{ix} dx = 2i
        let r = integrate(|x: f64| Complex64::new(0.0, x).exp(), 0.0, std::f64::consts::PI, QuadConfig::default())
            .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn subdivision_limit_is_reported() {
        let cfg = QuadConfig { epsabs: 1e-14, epsrel: 1e-14, max_intervals: 4 };
        let r = integrate(|x: f64| (1.0 / (x + 1e-6)).sin(), 0.0, 1.0, cfg);
        assert!(matches!(r, Err(QuadError::MaxSubdivisions { .. })));
    }

    #[test]
    fn fixed_panels_oscillatory() {
        let v = fixed_panels(|x: f64| (10.0 * x).sin(), 0.0, 10.0, 40);
        assert!((v - (1.0 - 100f64.cos()) / 10.0).abs() < 1e-13);
    }
}
