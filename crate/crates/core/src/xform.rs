//! Laplace transforms: numeric evaluation of `F(s) = ∫₀^∞ e^{-st} f(t) dt`,
//! a catalog of analytic test functions with closed-form transforms, the
//! kernel-integral form of the transform of the generalized Cesàro profile,
//! and a finite moment-vanishing test.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fraccalc::{FracError, SampledSignal};
use crate::quad::{self, QuadConfig, QuadError};
use crate::specfun::{self, binomial, CompensatedSum, SpecError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum XformError {
    #[error("Re(s) = {re_s} must exceed the exponential order {c}")]
    NotConvergent { re_s: f64, c: f64 },
    #[error("frequency must lie in the open right half plane, got {0}")]
    InvalidFrequency(Complex64),
    #[error("truncation horizon exceeded the cap {0} before the tail became negligible")]
    TruncationCap(f64),
    #[error("transform does not decay along the ray: |F(s/v)|/v grows as v -> 0")]
    TailDecay,
    #[error("catalog entry {name}: {reason}")]
    Catalog { name: String, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// A frequency in the open right half plane; all `s → 0` limits approach
/// through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexFreq(Complex64);

impl ComplexFreq {
    pub fn new(s: Complex64) -> Result<Self, XformError> {
        if s.re > 0.0 && s.re.is_finite() && s.im.is_finite() {
            Ok(ComplexFreq(s))
        } else {
            Err(XformError::InvalidFrequency(s))
        }
    }

    pub fn real(s: f64) -> Result<Self, XformError> {
        Self::new(Complex64::new(s, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type TransformFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Named analytic test signal.
#[derive(Clone)]
pub struct CatalogFunction {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    time_eval: TimeFn,
    derivative: Option<TimeFn>,
    transform_eval: Option<TransformFn>,
    /// Exponential-order bound: `|f(t)| ≤ M t^k e^{ct}`.
    pub exp_order_c: f64,
    pub period: Option<f64>,
    pub known_sf_limit: Option<f64>,
    /// Angular frequency of any oscillation, used to size quadrature panels.
    pub omega: Option<f64>,
}

impl fmt::Debug for CatalogFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogFunction")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("exp_order_c", &self.exp_order_c)
            .field("period", &self.period)
            .field("known_sf_limit", &self.known_sf_limit)
            .field("has_transform", &self.transform_eval.is_some())
            .finish()
    }
}

/// Serializable description of a catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub exp_order_c: f64,
    pub period: Option<f64>,
    pub known_sf_limit: Option<f64>,
    pub has_transform: bool,
}

impl CatalogFunction {
    pub fn new(name: impl Into<String>, time_eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CatalogFunction {
            name: name.into(),
            params: BTreeMap::new(),
            time_eval: Arc::new(time_eval),
            derivative: None,
            transform_eval: None,
            exp_order_c: 0.0,
            period: None,
            known_sf_limit: None,
            omega: None,
        }
    }

    pub fn with_transform(mut self, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.transform_eval = Some(Arc::new(f));
        self
    }

    pub fn with_derivative(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(f));
        self
    }

    pub fn with_exp_order(mut self, c: f64) -> Self {
        self.exp_order_c = c;
        self
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }

    pub fn with_limit(mut self, limit: f64) -> Self {
        self.known_sf_limit = Some(limit);
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = Some(omega);
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.time_eval)(t)
    }

    pub fn time_fn(&self) -> TimeFn {
        Arc::clone(&self.time_eval)
    }

    pub fn transform(&self) -> Option<TransformFn> {
        self.transform_eval.clone()
    }

    pub fn has_transform(&self) -> bool {
        self.transform_eval.is_some()
    }

    /// Derivative, analytic when supplied, otherwise a fourth-order central
    /// difference.
    pub fn derivative_at(&self, t: f64) -> f64 {
        if let Some(d) = &self.derivative {
            return d(t);
        }
        let h = 1e-3 * (1.0 + t.abs()).min(10.0);
        if t < 2.0 * h {
            // one-sided, fourth order
            let f = |k: f64| self.eval(t + k * h);
            return (-25.0 * f(0.0) + 48.0 * f(1.0) - 36.0 * f(2.0) + 16.0 * f(3.0) - 3.0 * f(4.0)) / (12.0 * h);
        }
        (self.eval(t - 2.0 * h) - 8.0 * self.eval(t - h) + 8.0 * self.eval(t + h) - self.eval(t + 2.0 * h)) / (12.0 * h)
    }

    /// The derivative as a catalog function (no closed-form transform).
    pub fn derivative_function(&self) -> CatalogFunction {
        let me = self.clone();
        let mut d = CatalogFunction::new(format!("d/dt {}", self.name), move |t| me.derivative_at(t))
            .with_exp_order(self.exp_order_c);
        d.omega = self.omega;
        d.period = self.period;
        d
    }

    pub fn record(&self) -> CatalogRecord {
        CatalogRecord {
            name: self.name.clone(),
            params: self.params.clone(),
            exp_order_c: self.exp_order_c,
            period: self.period,
            known_sf_limit: self.known_sf_limit,
            has_transform: self.has_transform(),
        }
    }

    /// Registration checks: closed-form transform against numeric Laplace at
    /// five probes, and periodicity at 100 pseudo-random times.
    pub fn validate(&self) -> Result<(), XformError> {
        let fail = |reason: String| XformError::Catalog { name: self.name.clone(), reason };
        if let Some(tf) = &self.transform_eval {
            let base = self.exp_order_c.max(0.0);
            let probes = [
                Complex64::new(base + 0.5, 0.0),
                Complex64::new(base + 1.0, 0.0),
                Complex64::new(base + 2.0, 0.0),
                Complex64::new(base + 1.0, 1.0),
                Complex64::new(base + 3.0, -0.5),
            ];
            for s in probes {
                let numeric = laplace_numeric(self, ComplexFreq::new(s)?)?;
                let closed = tf(s);
                let rel = (numeric - closed).norm() / closed.norm().max(1e-300);
                if !(rel <= 1e-6) {
                    return Err(fail(format!("transform mismatch at s = {s}: closed {closed}, numeric {numeric}")));
                }
            }
        }
        if let Some(t_period) = self.period {
            if !(t_period > 0.0) {
                return Err(fail(format!("period must be positive, got {t_period}")));
            }
            let mut rng = StdRng::seed_from_u64(0x5eed_f17);
            for _ in 0..100 {
                let t: f64 = rng.gen_range(0.0..50.0);
                let gap = (self.eval(t + t_period) - self.eval(t)).abs();
                if gap > 1e-10 {
                    return Err(fail(format!("not {t_period}-periodic at t = {t} (gap {gap:e})")));
                }
            }
        }
        Ok(())
    }
}

/// `f ≡ c`. Constants are periodic with any period; 1 is recorded.
pub fn catalog_constant(c: f64) -> CatalogFunction {
    CatalogFunction::new(if c == 1.0 { "const1".to_string() } else { format!("const({c})") }, move |_| c)
        .with_param("c", c)
        .with_derivative(|_| 0.0)
        .with_transform(move |s| Complex64::new(c, 0.0) / s)
        .with_period(1.0)
        .with_limit(c)
}

/// `f(t) = t^q sin(ωt)` with
/// `F(s) = Γ(q+1) [(s+iω)^{q+1} − (s−iω)^{q+1}] / (2i (s²+ω²)^{q+1})`,
/// principal branches throughout (cut on the negative real axis, so `F` is
/// analytic in the open right half plane).
pub fn catalog_tq_sin(q: f64, omega: f64) -> Result<CatalogFunction, XformError> {
    if !(q >= 0.0 && q.is_finite()) {
        return Err(XformError::InvalidParameter(format!("q must be >= 0, got {q}")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(XformError::InvalidParameter(format!("omega must be > 0, got {omega}")));
    }
    let gq = specfun::gamma(q + 1.0)?;
    let p = q + 1.0;
    let f = move |t: f64| if t <= 0.0 { 0.0 } else { t.powf(q) * (omega * t).sin() };
    let df = move |t: f64| {
        if t <= 0.0 {
            return if q == 0.0 { omega } else if q == 1.0 { 0.0 } else { 0.0 };
        }
        q * t.powf(q - 1.0) * (omega * t).sin() + omega * t.powf(q) * (omega * t).cos()
    };
    let transform = move |s: Complex64| {
        let iw = Complex64::new(0.0, omega);
        let num = (s + iw).powf(p) - (s - iw).powf(p);
        let den = Complex64::new(0.0, 2.0) * (s * s + omega * omega).powf(p);
        num * gq / den
    };
    let mut entry = CatalogFunction::new("tq_sin", f)
        .with_param("q", q)
        .with_param("omega", omega)
        .with_derivative(df)
        .with_transform(transform)
        .with_exp_order(0.0)
        .with_limit(0.0)
        .with_omega(omega);
    if q == 0.0 {
        entry = entry.with_period(2.0 * PI / omega);
    }
    Ok(entry)
}

/// Registry of validated catalog entries.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogFunction>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, f: CatalogFunction) -> Result<(), XformError> {
        f.validate()?;
        self.entries.insert(f.name.clone(), f);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&CatalogFunction> {
        self.entries.get(name)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn records(&self) -> Vec<CatalogRecord> {
        self.entries.values().map(CatalogFunction::record).collect()
    }

    /// The built-in entries used by the CLI and the verification suite.
    pub fn standard() -> Result<Self, XformError> {
        let mut cat = Catalog::new();
        cat.register(catalog_constant(1.0))?;
        cat.register(
            CatalogFunction::new("exp_decay", |t| (-t).exp())
                .with_derivative(|t| -(-t).exp())
                .with_transform(|s| 1.0 / (s + 1.0))
                .with_exp_order(-1.0)
                .with_limit(0.0),
        )?;
        cat.register(
            CatalogFunction::new("two_plus_cos3t", |t| 2.0 + (3.0 * t).cos())
                .with_derivative(|t| -3.0 * (3.0 * t).sin())
                .with_transform(|s| 2.0 / s + s / (s * s + 9.0))
                .with_period(2.0 * PI / 3.0)
                .with_omega(3.0)
                .with_limit(2.0),
        )?;
        cat.register(
            CatalogFunction::new("sin", f64::sin)
                .with_derivative(f64::cos)
                .with_transform(|s| 1.0 / (s * s + 1.0))
                .with_period(2.0 * PI)
                .with_omega(1.0)
                .with_limit(0.0),
        )?;
        cat.register(
            CatalogFunction::new("cos", f64::cos)
                .with_derivative(|t| -t.sin())
                .with_transform(|s| s / (s * s + 1.0))
                .with_period(2.0 * PI)
                .with_omega(1.0)
                .with_limit(0.0),
        )?;
        cat.register(catalog_tq_sin(2.0, 1.0)?)?;
        cat.register(
            CatalogFunction::new("ramp", |t| t)
                .with_derivative(|_| 1.0)
                .with_transform(|s| 1.0 / (s * s)),
        )?;
        cat.register(
            CatalogFunction::new("exp_growth", f64::exp)
                .with_derivative(f64::exp)
                .with_transform(|s| 1.0 / (s - 1.0))
                .with_exp_order(1.0),
        )?;
        Ok(cat)
    }
}

/// Hard cap on the numeric-Laplace truncation horizon.
pub const LAPLACE_T_MAX: f64 = 1e6;
const LAPLACE_TAIL_RTOL: f64 = 1e-12;

/// Panel width for the Laplace integrand `e^{-st} f(t)`.
fn laplace_panel_width(f: &CatalogFunction, s: Complex64) -> f64 {
    let osc = f.omega.unwrap_or(0.0) + s.im.abs();
    let mut w = 1.0 / s.re;
    if osc > 0.0 {
        w = w.min(PI / osc);
    }
    if f.exp_order_c != 0.0 {
        w = w.min(1.0 / f.exp_order_c.abs());
    }
    w / 8.0
}

/// Numeric Laplace transform of a catalog function, truncated adaptively.
///
/// The integral is accumulated block by block; it stops once the integrand
/// envelope at the block end, integrated over an exponential tail, falls
/// below `1e-12` of the accumulated absolute integral.
pub fn laplace_numeric(f: &CatalogFunction, s: ComplexFreq) -> Result<Complex64, XformError> {
    let s = s.value();
    let sigma = s.re - f.exp_order_c;
    if !(sigma > 0.0) {
        return Err(XformError::NotConvergent { re_s: s.re, c: f.exp_order_c });
    }
    let w = laplace_panel_width(f, s);
    let integrand = |t: f64| (-s * t).exp() * f.eval(t);
    let panels_per_block = 64usize;
    let block = w * panels_per_block as f64;

    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    let mut start = 0.0;
    let mut prev_envelope = f64::INFINITY;
    loop {
        let breaks: Vec<f64> = (0..=panels_per_block).map(|i| start + i as f64 * w).collect();
        // magnitude scale of this block sets the absolute tolerance
        let mut scale = 0.0f64;
        let mut envelope = 0.0f64;
        for i in 0..panels_per_block {
            for frac in [0.0, 0.37, 0.71] {
                let v = integrand(breaks[i] + frac * w).norm();
                scale += v * w / 3.0;
                if i + 1 == panels_per_block {
                    envelope = envelope.max(v);
                }
            }
        }
        envelope = envelope.max(integrand(start + block).norm());
        let cfg = QuadConfig { epsabs: 1e-14 * scale.max(1e-300), epsrel: 1e-12, max_intervals: 4000 };
        let piece = quad::integrate_with_breaks(integrand, &breaks, cfg)?;
        total += piece.value;
        abs_total += scale;
        start += block;

        // remaining tail ≲ envelope / (σ/2), allowing polynomial growth
        let tail = envelope * 2.0 / sigma;
        if envelope <= prev_envelope && tail <= LAPLACE_TAIL_RTOL * abs_total {
            return Ok(total);
        }
        if abs_total == 0.0 && envelope == 0.0 && start * sigma > 50.0 {
            return Ok(total);
        }
        prev_envelope = envelope;
        if start > LAPLACE_T_MAX {
            return Err(XformError::TruncationCap(LAPLACE_T_MAX));
        }
    }
}

/// `(1 − e^{-z})/z`.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..20 {
            term *= -z / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        (1.0 - (-z).exp()) / z
    }
}

/// `(1 − e^{-z}(1+z))/z²`.
fn phi2(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // Σ (−1)^k (k+1) z^k / (k+2)!
        let mut sum = Complex64::new(0.0, 0.0);
        let mut zk = Complex64::new(1.0, 0.0);
        let mut fact = 2.0;
        for k in 0..20 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += zk * (sign * (k as f64 + 1.0) / fact);
            zk *= z;
            fact *= k as f64 + 3.0;
        }
        sum
    } else {
        (1.0 - (-z).exp() * (1.0 + z)) / (z * z)
    }
}

/// Laplace transform of the piecewise-linear interpolant of each component
/// of `f`, truncated at the end of the grid (the signal is taken as zero
/// beyond it). Exact for piecewise-linear signals.
pub fn laplace_sampled(f: &SampledSignal, s: ComplexFreq) -> Vec<Complex64> {
    let s = s.value();
    let grid = *f.grid();
    let h = grid.h;
    let z = s * h;
    let a = phi1(z) * h;
    let b = phi2(z) * (h * h);
    let dim = f.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..grid.n - 1 {
        let decay = (-s * grid.t(k)).exp();
        let lo = f.sample(k);
        let hi = f.sample(k + 1);
        for j in 0..dim {
            out[j] += decay * (a * lo[j] + b * ((hi[j] - lo[j]) / h));
        }
    }
    out
}

/// Scalar convenience form of [`laplace_sampled`] (first component).
pub fn laplace_sampled_scalar(f: &SampledSignal, s: ComplexFreq) -> Complex64 {
    laplace_sampled(f, s)[0]
}

/// Laplace transform of a catalog function: closed form when available,
/// numeric otherwise.
pub fn transform_value(f: &CatalogFunction, s: ComplexFreq) -> Result<Complex64, XformError> {
    match &f.transform_eval {
        Some(tf) => Ok(tf(s.value())),
        None => laplace_numeric(f, s),
    }
}

fn check_ray_decay(transform: &dyn Fn(Complex64) -> Complex64, s: Complex64) -> Result<(), XformError> {
    let r1 = transform(s / 1e-6).norm() / 1e-6;
    let r2 = transform(s / 1e-9).norm() / 1e-9;
    if !r1.is_finite() || !r2.is_finite() || r2 > 10.0 * r1 + 1e-300 {
        return Err(XformError::TailDecay);
    }
    Ok(())
}

fn ray_breaks(s: Complex64) -> Vec<f64> {
    // F(s/v) varies where |s|/v is O(1); seed panels across decades below v = 1
    let mut breaks = vec![0.0];
    let mut v = 1e-12f64;
    while v < 1.0 {
        breaks.push(v);
        v *= 10.0;
    }
    let knee = s.norm().min(0.5);
    for k in [0.25, 0.5, 2.0, 4.0] {
        let b = knee * k;
        if b > 1e-12 && b < 1.0 {
            breaks.push(b);
        }
    }
    breaks.push(1.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks
}

/// `∫₁^∞ F(su)/u · (1 − 1/u)^α du`, evaluated as `∫₀¹ F(s/v) (1−v)^α / v dv`.
///
/// This equals the Laplace transform at `s` of the generalized Cesàro
/// profile `Γ(α+1) I^{α+1} f / t^{α+1}`.
pub fn kernel_integral(
    transform: &dyn Fn(Complex64) -> Complex64,
    alpha: f64,
    s: ComplexFreq,
) -> Result<Complex64, XformError> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(XformError::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    let s = s.value();
    check_ray_decay(transform, s)?;
    let integrand = |v: f64| transform(s / v) * ((1.0 - v).powf(alpha) / v);
    let cfg = QuadConfig { epsabs: 1e-13, epsrel: 1e-11, max_intervals: 4000 };
    Ok(quad::integrate_with_breaks(integrand, &ray_breaks(s), cfg)?.value)
}

/// `∫₁^∞ F(su) / u^{j+1} du = ∫₀¹ F(s/v) v^{j−1} dv`.
pub fn inverse_power_moment(
    transform: &dyn Fn(Complex64) -> Complex64,
    j: u32,
    s: ComplexFreq,
) -> Result<Complex64, XformError> {
    let s = s.value();
    check_ray_decay(transform, s)?;
    let integrand = |v: f64| transform(s / v) * v.powi(j as i32 - 1);
    let cfg = QuadConfig { epsabs: 1e-13, epsrel: 1e-11, max_intervals: 4000 };
    Ok(quad::integrate_with_breaks(integrand, &ray_breaks(s), cfg)?.value)
}

/// Integer-order expansion `(1 − 1/u)^α = Σ_j C(α,j)(−1)^j u^{−j}` applied
/// term by term to the kernel integral.
pub fn kernel_integral_binomial(
    transform: &dyn Fn(Complex64) -> Complex64,
    alpha: u32,
    s: ComplexFreq,
) -> Result<Complex64, XformError> {
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..=alpha {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += inverse_power_moment(transform, j, s)? * (sign * binomial(alpha as f64, j as u64));
    }
    Ok(total)
}

/// Partial sums `Σ_{n=0}^{N} (−α)_n / (n! (n+1))` at each checkpoint `N`,
/// with the Pochhammer factor carried in log space. The full series equals
/// `1/(α+1)`.
pub fn binomial_series_partial_sums(alpha: f64, checkpoints: &[u64]) -> Vec<(u64, f64)> {
    let n_max = checkpoints.iter().copied().max().unwrap_or(0);
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = CompensatedSum::default();
    let mut next = checkpoints.iter().copied().collect::<Vec<_>>();
    next.sort_unstable();
    let mut idx = 0;
    for n in 0..=n_max {
        let (sign, ln_p) = specfun::ln_pochhammer(-alpha, n);
        if sign != 0.0 {
            let ln_fact = specfun::ln_gamma(n as f64 + 1.0).expect("positive argument");
            acc.add(sign * (ln_p - ln_fact - (n as f64 + 1.0).ln()).exp());
        }
        while idx < next.len() && next[idx] == n {
            out.push((n, acc.value()));
            idx += 1;
        }
    }
    out
}

/// Result of the finite moment-vanishing test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTest {
    /// `true` when every computed moment is within tolerance. This is
    /// evidence of vanishing, not proof: only finitely many moments on a
    /// finite horizon are checked.
    pub vanishing: bool,
    /// `moments[n][j]` is `L{f_j}(s0 + n l)`.
    pub moments: Vec<Vec<f64>>,
    pub scale: f64,
}

/// Checks `F(s0 + n l) ≈ 0` for `n = 0..=n_max` on the sampled signal
/// (zero beyond the grid). Moments are compared against `tol · max(1, ‖f‖∞)`.
pub fn moment_vanishing_test(
    f: &SampledSignal,
    s0: f64,
    l: f64,
    n_max: usize,
    tol: f64,
) -> Result<MomentTest, XformError> {
    if !(s0 > 0.0 && l > 0.0 && tol > 0.0) {
        return Err(XformError::InvalidParameter(format!("need s0, l, tol > 0 (got {s0}, {l}, {tol})")));
    }
    let scale = f.max_abs().max(1.0);
    let mut moments = Vec::with_capacity(n_max + 1);
    let mut vanishing = true;
    for n in 0..=n_max {
        let s = ComplexFreq::real(s0 + n as f64 * l)?;
        let m: Vec<f64> = laplace_sampled(f, s).iter().map(|c| c.re).collect();
        if m.iter().any(|v| v.abs() > tol * scale) {
            vanishing = false;
        }
        moments.push(m);
    }
    Ok(MomentTest { vanishing, moments, scale })
}
