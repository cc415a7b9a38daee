//! Fractional operators on uniformly sampled signals.
//!
//! The Riemann–Liouville integral is discretized by product-trapezoidal
//! quadrature: the kernel `(t - τ)^{α-1}` is integrated exactly against the
//! piecewise-linear interpolant of the samples. The rule is exact for linear
//! signals and second order for smooth ones. The Caputo derivative and the
//! generalized Cesàro profile are both built on top of it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{self, binomial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FracError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid fractional order {0}")]
    InvalidOrder(f64),
    #[error("signal has {got} samples but the grid has {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("grid too coarse: {n} samples, need at least {needed}")]
    GridTooCoarse { n: usize, needed: usize },
    #[error("operation needs a grid starting at t = 0 (starts at {0})")]
    NonzeroStart(f64),
}

/// Uniform grid `t_k = t0 + k h`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub h: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, h: f64, n: usize) -> Result<Self, FracError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(FracError::InvalidGrid(format!("step must be positive, got {h}")));
        }
        if n < 2 {
            return Err(FracError::InvalidGrid(format!("need at least 2 samples, got {n}")));
        }
        if !(t0 >= 0.0 && t0.is_finite()) {
            return Err(FracError::InvalidGrid(format!("start must be non-negative, got {t0}")));
        }
        Ok(TimeGrid { t0, h, n })
    }

    /// Grid on `[t0, t_end]` with step `h`; `(t_end - t0)/h` is rounded to
    /// the nearest integer.
    pub fn span(t0: f64, t_end: f64, h: f64) -> Result<Self, FracError> {
        let steps = ((t_end - t0) / h).round();
        if !(steps >= 1.0) {
            return Err(FracError::InvalidGrid(format!("empty span [{t0}, {t_end}]")));
        }
        Self::new(t0, h, steps as usize + 1)
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.n - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.t(k))
    }
}

/// Samples of a (possibly vector-valued) signal on a [`TimeGrid`], stored
/// row-major: sample `k` occupies `values[k*dim .. (k+1)*dim]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    grid: TimeGrid,
    dim: usize,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(grid: TimeGrid, dim: usize, values: Vec<f64>) -> Result<Self, FracError> {
        if dim == 0 {
            return Err(FracError::InvalidGrid("dimension must be at least 1".into()));
        }
        if values.len() != grid.n * dim {
            return Err(FracError::LengthMismatch { got: values.len() / dim, want: grid.n });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FracError::NonFinite(i / dim));
        }
        Ok(SampledSignal { grid, dim, values })
    }

    pub fn scalar(grid: TimeGrid, values: Vec<f64>) -> Result<Self, FracError> {
        Self::new(grid, 1, values)
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self, FracError> {
        Self::scalar(grid, grid.times().map(f).collect())
    }

    pub fn from_vec_fn(grid: TimeGrid, dim: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self, FracError> {
        let mut values = Vec::with_capacity(grid.n * dim);
        for t in grid.times() {
            let v = f(t);
            if v.len() != dim {
                return Err(FracError::InvalidGrid(format!("sample has dimension {}, expected {dim}", v.len())));
            }
            values.extend(v);
        }
        Self::new(grid, dim, values)
    }

    /// Assemble a signal from per-component sample vectors.
    pub fn from_components(grid: TimeGrid, comps: &[Vec<f64>]) -> Result<Self, FracError> {
        let dim = comps.len();
        let mut values = vec![0.0; grid.n * dim];
        for (j, c) in comps.iter().enumerate() {
            if c.len() != grid.n {
                return Err(FracError::LengthMismatch { got: c.len(), want: grid.n });
            }
            for (k, v) in c.iter().enumerate() {
                values[k * dim + j] = *v;
            }
        }
        Self::new(grid, dim, values)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.n
    }

    pub fn is_empty(&self) -> bool {
        self.grid.n == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sample(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    pub fn component(&self, j: usize) -> Vec<f64> {
        self.values.iter().skip(j).step_by(self.dim).copied().collect()
    }

    pub fn components(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|j| self.component(j)).collect()
    }

    /// Largest absolute sample over all components.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Linear combination `a·self + b·other` on the same grid.
    pub fn combine(&self, a: f64, other: &SampledSignal, b: f64) -> Result<SampledSignal, FracError> {
        if self.grid != other.grid || self.dim != other.dim {
            return Err(FracError::LengthMismatch { got: other.len(), want: self.len() });
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        SampledSignal::new(self.grid, self.dim, values)
    }

    fn map_components(&self, mut op: impl FnMut(&[f64]) -> Vec<f64>) -> Result<SampledSignal, FracError> {
        let comps: Vec<Vec<f64>> = self.components().iter().map(|c| op(c)).collect();
        SampledSignal::from_components(self.grid, &comps)
    }
}

/// Fractional order with `m = ⌈α⌉`, the integer order of the classical
/// derivative the Caputo operator differentiates by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOrder {
    alpha: f64,
    m: u32,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(FracError::InvalidOrder(alpha));
        }
        Ok(FracOrder { alpha, m: alpha.ceil() as u32 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == self.m as f64
    }
}

/// Product-trapezoid weights for `I^α` on `n` uniform nodes.
///
/// `I^α f(t_k) ≈ h^α / Γ(α+2) · (start[k] f_0 + Σ_{j=1}^{k} conv[k-j] f_j)`.
#[derive(Debug)]
pub(crate) struct TrapezoidWeights {
    pub(crate) conv: Vec<f64>,
    pub(crate) start: Vec<f64>,
    pub(crate) scale_no_h: f64,
}

/// Second difference `(m+1)^p − 2m^p + (m−1)^p`.
fn second_difference(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    if m < 8 {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // m^p · 2 Σ_k C(p, 2k) m^{-2k}, no cancellation
    let x2 = 1.0 / (mf * mf);
    let mut sum = 0.0;
    let mut coeff = p * (p - 1.0) / 2.0;
    let mut xp = x2;
    for k in 1..80u64 {
        let term = coeff * xp;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || coeff == 0.0 {
            break;
        }
        let j = 2 * k as u64;
        coeff *= (p - j as f64) * (p - j as f64 - 1.0) / ((j as f64 + 1.0) * (j as f64 + 2.0));
        xp *= x2;
    }
    2.0 * mf.powf(p) * sum
}

/// Start-node weight `(k−1)^{α+1} − (k−1−α) k^α`.
fn start_weight(alpha: f64, k: usize) -> f64 {
    let kf = k as f64;
    let p = alpha + 1.0;
    if k < 8 {
        return (kf - 1.0).powf(p) - (kf - 1.0 - alpha) * kf.powf(alpha);
    }
    // k^p Σ_{j≥2} C(p, j) (−1/k)^j
    let y = -1.0 / kf;
    let mut sum = 0.0;
    let mut coeff = binomial(p, 2);
    let mut yp = y * y;
    for j in 2..120u64 {
        let term = coeff * yp;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || coeff == 0.0 {
            break;
        }
        coeff *= (p - j as f64) / (j as f64 + 1.0);
        yp *= y;
    }
    kf.powf(p) * sum
}

/// First difference `m^α − (m−1)^α`, the product-rectangle weight.
pub(crate) fn first_difference(alpha: f64, m: usize) -> f64 {
    let mf = m as f64;
    if m < 2 {
        return mf.powf(alpha) - (mf - 1.0).max(0.0).powf(alpha);
    }
    -mf.powf(alpha) * (alpha * (-1.0 / mf).ln_1p()).exp_m1()
}

impl TrapezoidWeights {
    fn build(alpha: f64, n: usize) -> Self {
        let p = alpha + 1.0;
        let mut conv = Vec::with_capacity(n);
        conv.push(1.0);
        conv.extend((1..n).map(|m| second_difference(p, m)));
        let mut start = Vec::with_capacity(n);
        start.push(0.0);
        start.extend((1..n).map(|k| start_weight(alpha, k)));
        let scale_no_h = 1.0 / specfun::gamma(alpha + 2.0).expect("alpha + 2 > 0");
        TrapezoidWeights { conv, start, scale_no_h }
    }
}

const CACHE_CAPACITY: usize = 32;

type WeightCache = Mutex<HashMap<(u64, usize), Arc<TrapezoidWeights>>>;

fn weight_cache() -> &'static WeightCache {
    static CACHE: OnceLock<WeightCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Weights for `(alpha, n)`, shared across calls and threads.
pub(crate) fn trapezoid_weights(alpha: f64, n: usize) -> Arc<TrapezoidWeights> {
    let key = (alpha.to_bits(), n);
    if let Some(w) = weight_cache().lock().expect("weight cache poisoned").get(&key) {
        return Arc::clone(w);
    }
    let built = Arc::new(TrapezoidWeights::build(alpha, n));
    let mut cache = weight_cache().lock().expect("weight cache poisoned");
    if cache.len() >= CACHE_CAPACITY {
        cache.clear();
    }
    Arc::clone(cache.entry(key).or_insert(built))
}

/// `I^α` applied to one scalar component.
pub(crate) fn rl_integral_slice(values: &[f64], h: f64, alpha: f64) -> Vec<f64> {
    let n = values.len();
    let w = trapezoid_weights(alpha, n);
    let scale = h.powf(alpha) * w.scale_no_h;
    let mut out = vec![0.0; n];
    for k in 1..n {
        let hist: f64 = values[1..=k].iter().zip(w.conv[..k].iter().rev()).map(|(f, c)| f * c).sum();
        out[k] = scale * (w.start[k] * values[0] + hist);
    }
    out
}

/// Riemann–Liouville integral `₀I_t^α f` at every grid node, with the lower
/// terminal at the first grid node. `result[0] = 0`.
pub fn rl_integral(f: &SampledSignal, order: FracOrder) -> Result<SampledSignal, FracError> {
    let alpha = order.alpha();
    if !(alpha > 0.0) {
        return Err(FracError::InvalidOrder(alpha));
    }
    let h = f.grid().h;
    f.map_components(|c| rl_integral_slice(c, h, alpha))
}

/// `I^α` with the convention `I^0 = identity`.
pub fn fractional_integral(f: &SampledSignal, order: FracOrder) -> Result<SampledSignal, FracError> {
    if order.alpha() == 0.0 {
        Ok(f.clone())
    } else {
        rl_integral(f, order)
    }
}

// stencils are written in differences so that constants give exact zeros
fn first_derivative(x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        d[k] = ((x[k + 1] - x[k]) + (x[k] - x[k - 1])) / (2.0 * h);
    }
    d[0] = (3.0 * (x[1] - x[0]) - (x[2] - x[1])) / (2.0 * h);
    d[n - 1] = (3.0 * (x[n - 1] - x[n - 2]) - (x[n - 2] - x[n - 3])) / (2.0 * h);
    d
}

fn second_derivative(x: &[f64], h: f64) -> Vec<f64> {
    let n = x.len();
    let h2 = h * h;
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        d[k] = ((x[k + 1] - x[k]) - (x[k] - x[k - 1])) / h2;
    }
    d[0] = (2.0 * (x[0] - x[1]) - 3.0 * (x[1] - x[2]) + (x[2] - x[3])) / h2;
    d[n - 1] = (2.0 * (x[n - 1] - x[n - 2]) - 3.0 * (x[n - 2] - x[n - 3]) + (x[n - 3] - x[n - 4])) / h2;
    d
}

/// m-th derivative by second-order finite differences.
pub(crate) fn nth_derivative(x: &[f64], h: f64, m: u32) -> Vec<f64> {
    let mut d = x.to_vec();
    for _ in 0..m / 2 {
        d = second_derivative(&d, h);
    }
    if m % 2 == 1 {
        d = first_derivative(&d, h);
    }
    d
}

/// Classical m-th derivative of a sampled signal (second-order stencils).
pub fn derivative(x: &SampledSignal, m: u32) -> Result<SampledSignal, FracError> {
    let needed = 2 * m as usize + 2;
    if x.len() < needed {
        return Err(FracError::GridTooCoarse { n: x.len(), needed });
    }
    let h = x.grid().h;
    x.map_components(|c| nth_derivative(c, h, m))
}

/// Caputo derivative `I^{m−α} D^m x`; for integer `α` the plain derivative.
///
/// Assumes `x` is smooth enough for the finite-difference derivative to be
/// meaningful on this grid.
pub fn caputo_derivative(x: &SampledSignal, order: FracOrder) -> Result<SampledSignal, FracError> {
    if !(order.alpha() > 0.0) {
        return Err(FracError::InvalidOrder(order.alpha()));
    }
    let dm = derivative(x, order.m())?;
    if order.is_integer() {
        return Ok(dm);
    }
    rl_integral(&dm, FracOrder::new(order.m() as f64 - order.alpha())?)
}

/// Generalized Cesàro profile `g_α(t) = Γ(α+1) I^{α+1} f(t) / t^{α+1}`.
///
/// `g_α(0)` is taken as `f(0)/(α+1)`, its limit as `t → 0⁺` for
/// continuous `f`.
pub fn cesaro_profile(f: &SampledSignal, alpha: f64) -> Result<SampledSignal, FracError> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(FracError::InvalidOrder(alpha));
    }
    let grid = *f.grid();
    if grid.t0 != 0.0 {
        return Err(FracError::NonzeroStart(grid.t0));
    }
    let order = alpha + 1.0;
    let g_alpha1 = specfun::gamma(alpha + 1.0).expect("alpha + 1 > 0");
    f.map_components(|c| {
        let integral = rl_integral_slice(c, grid.h, order);
        let mut out = Vec::with_capacity(c.len());
        out.push(c[0] / order);
        for (k, v) in integral.iter().enumerate().skip(1) {
            out.push(g_alpha1 * v / grid.t(k).powf(order));
        }
        out
    })
}

/// Max-norm of `I^α(I^β f) − I^{α+β} f` over the grid.
pub fn semigroup_defect(f: &SampledSignal, alpha: f64, beta: f64) -> Result<f64, FracError> {
    let a = FracOrder::new(alpha)?;
    let b = FracOrder::new(beta)?;
    if !(alpha > 0.0) {
        return Err(FracError::InvalidOrder(alpha));
    }
    if !(beta > 0.0) {
        return Err(FracError::InvalidOrder(beta));
    }
    let nested = rl_integral(&rl_integral(f, b)?, a)?;
    let direct = rl_integral(f, FracOrder::new(alpha + beta)?)?;
    Ok(nested
        .values()
        .iter()
        .zip(direct.values())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}
