//! Final-value estimators: the classical `lim sF(s)`, the Cesàro mean, the
//! order-α generalized Cesàro limit, the derivative form for periodic
//! signals, and a cross-validation driver that compares frequency-side and
//! time-side answers.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::extrap::{extrapolate_to_zero, extrapolate_with, Basis};
use crate::fraccalc::{self, FracError, SampledSignal};
use crate::quad::{self, QuadConfig, QuadError};
use crate::report::{num, nums, ReportRecord, Status};
use crate::xform::{self, CatalogFunction, ComplexFreq, XformError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FvtError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("s·F(s) diverges as s -> 0: {0}")]
    Divergent(String),
    #[error("{0} has no period")]
    MissingPeriod(String),
    #[error("probe t = {t} lies outside the sampled range [0, {t_end}]")]
    ProbeOutOfRange { t: f64, t_end: f64 },
    #[error(transparent)]
    Xform(#[from] XformError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Frac(#[from] FracError),
}

pub const DEFAULT_TOL: f64 = 1e-3;
pub const DEFAULT_S_SEQ: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
/// Deeper schedule for cross-validation: the kernel-integral side converges
/// like `s ln s`, which needs small `s` to be in its asymptotic regime.
pub const CROSS_S_SEQ: [f64; 4] = [0.01, 0.005, 0.0025, 0.00125];
pub const DEFAULT_T_PROBES: [f64; 4] = [50.0, 100.0, 200.0, 400.0];
/// Longer horizon for periodic signals, whose Cesàro error decays like 1/t.
pub const PERIODIC_T_PROBES: [f64; 4] = [1250.0, 2500.0, 5000.0, 10000.0];

const S_DEGREE: usize = 3;
const T_DEGREE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClassicalSf,
    CesaroMean,
    GeneralizedAlpha,
    DerivativeForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub value: f64,
    pub method: Method,
    pub alpha: f64,
    pub trace: Vec<(f64, f64)>,
    pub converged: bool,
    pub tol_used: f64,
}

impl LimitEstimate {
    fn from_extrapolation(method: Method, alpha: f64, xs: &[f64], ys: &[f64], degree: usize, tol: f64) -> Self {
        let ex = extrapolate_to_zero(xs, ys, degree);
        let converged = ex.converged(tol);
        LimitEstimate { value: ex.value, method, alpha, converged, trace: ex.trace, tol_used: tol }
    }
}

fn check_s_seq(s_seq: &[f64]) -> Result<(), FvtError> {
    if s_seq.len() < 3 {
        return Err(FvtError::InvalidSchedule(format!("need at least 3 values of s, got {}", s_seq.len())));
    }
    if s_seq.iter().any(|s| !(*s > 0.0 && s.is_finite())) || s_seq.windows(2).any(|w| w[1] >= w[0]) {
        return Err(FvtError::InvalidSchedule("s values must be positive and strictly decreasing".into()));
    }
    Ok(())
}

fn check_t_probes(t_probes: &[f64]) -> Result<(), FvtError> {
    if t_probes.len() < 3 {
        return Err(FvtError::InvalidSchedule(format!("need at least 3 probes, got {}", t_probes.len())));
    }
    if t_probes.iter().any(|t| !(*t > 0.0 && t.is_finite())) || t_probes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FvtError::InvalidSchedule("probes must be positive and strictly increasing".into()));
    }
    Ok(())
}

/// Maximum-modulus scan of `|sF(s)|` over `[a, b] × [−b, b]`: an interior
/// value well above everything seen on the boundary means `F` is not
/// analytic inside, i.e. it has a pole in the open right half plane.
fn rhp_pole_suspected(transform: &dyn Fn(Complex64) -> Complex64, a: f64, b: f64) -> bool {
    let g = |re: f64, im: f64| {
        let s = Complex64::new(re, im);
        (s * transform(s)).norm()
    };
    let per_side = 400;
    let mut boundary = 0.0f64;
    for i in 0..=per_side {
        let u = i as f64 / per_side as f64;
        let re = a + u * (b - a);
        let im = -b + 2.0 * u * b;
        for v in [g(re, -b), g(re, b), g(a, im), g(b, im)] {
            if v.is_finite() {
                boundary = boundary.max(v);
            }
        }
    }
    let cells = 40;
    let margin = (b - a) / cells as f64;
    for i in 0..=cells {
        let re = a + margin + i as f64 * (b - a - 2.0 * margin) / cells as f64;
        for j in 0..=cells {
            let im = -b + margin + j as f64 * (2.0 * b - 2.0 * margin) / cells as f64;
            let v = g(re, im);
            if !v.is_finite() || v > 2.0 * boundary {
                return true;
            }
        }
    }
    false
}

/// `lim_{s→0} sF(s)` along the positive real axis, extrapolated as a cubic
/// in `s`. Fails with [`FvtError::Divergent`] when `|sF|` grows like a
/// power of `1/s` or a right-half-plane pole is detected.
pub fn classical_fvt(
    transform: &dyn Fn(Complex64) -> Complex64,
    s_seq: &[f64],
    tol: f64,
) -> Result<LimitEstimate, FvtError> {
    classical_fvt_with(transform, s_seq, tol, true)
}

/// As [`classical_fvt`], with the pole scan optional (it costs about 20k
/// transform evaluations).
pub fn classical_fvt_with(
    transform: &dyn Fn(Complex64) -> Complex64,
    s_seq: &[f64],
    tol: f64,
    pole_scan: bool,
) -> Result<LimitEstimate, FvtError> {
    check_s_seq(s_seq)?;
    let values: Vec<f64> = s_seq.iter().map(|&s| s * transform(Complex64::new(s, 0.0)).re).collect();
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(FvtError::Divergent(format!("s·F(s) is not finite at s = {}", s_seq[bad])));
    }
    let n = values.len();
    let growth = |k: usize| {
        let (lo, hi) = (values[k].abs(), values[k + 1].abs());
        if hi <= 1e-12 {
            0.0
        } else {
            (hi / lo).ln() / (s_seq[k] / s_seq[k + 1]).ln()
        }
    };
    if growth(n - 3) > 0.5 && growth(n - 2) > 0.5 {
        return Err(FvtError::Divergent(format!("|sF| grows like s^-{:.2}", growth(n - 2))));
    }
    if pole_scan {
        let b = 4.0 * s_seq[0].max(1.0);
        if rhp_pole_suspected(transform, s_seq[n - 1], b) {
            return Err(FvtError::Divergent("F appears to have a pole in the open right half plane".into()));
        }
    }
    Ok(LimitEstimate::from_extrapolation(Method::ClassicalSf, 0.0, s_seq, &values, S_DEGREE, tol))
}

/// `g_α(t) = Γ(α+1) I^{α+1} f(t) / t^{α+1} = ∫₀¹ (1−u)^α f(tu) du`.
pub fn profile_value(f: &CatalogFunction, alpha: f64, t: f64) -> Result<f64, FvtError> {
    if t == 0.0 {
        return Ok(f.eval(0.0));
    }
    let integrand = |u: f64| (1.0 - u).powf(alpha) * f.eval(t * u);
    let mut breaks = vec![0.0, 0.25, 0.5, 0.75, 1.0];
    for c in [1.0, 10.0, 100.0] {
        breaks.push(c / t);
    }
    if let Some(w) = f.omega {
        // two panels per half-oscillation
        let panels = (2.0 * w * t / PI).ceil().max(1.0) as usize;
        breaks.extend((1..panels).map(|i| i as f64 / panels as f64));
    }
    breaks.retain(|u| (0.0..=1.0).contains(u));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let scale = breaks
        .windows(2)
        .map(|w| integrand(0.5 * (w[0] + w[1])).abs() * (w[1] - w[0]))
        .sum::<f64>();
    let cfg = QuadConfig { epsabs: 1e-12 * scale.max(1e-300), epsrel: 1e-12, max_intervals: 8 * breaks.len() + 4000 };
    Ok(quad::integrate_with_breaks(integrand, &breaks, cfg)?.value)
}

/// Time-side limit of `g_α`, extrapolated as a quadratic in `1/t`. The value
/// is the α-normalized limit, which the theorem predicts to be
/// `lim sF(s) / (α+1)`.
pub fn generalized_fvt(
    f: &CatalogFunction,
    alpha: f64,
    t_probes: &[f64],
    tol: f64,
) -> Result<LimitEstimate, FvtError> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(FvtError::InvalidSchedule(format!("alpha must be >= 0, got {alpha}")));
    }
    check_t_probes(t_probes)?;
    let xs: Vec<f64> = t_probes.iter().map(|t| 1.0 / t).collect();
    let ys = t_probes.iter().map(|&t| profile_value(f, alpha, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(LimitEstimate::from_extrapolation(Method::GeneralizedAlpha, alpha, &xs, &ys, T_DEGREE, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CesaroResult {
    pub estimate: LimitEstimate,
    /// `(1/T)∫₀^T f` when the signal is periodic.
    pub period_mean: Option<f64>,
    pub discrepancy: Option<f64>,
}

pub fn period_mean(f: &CatalogFunction) -> Result<f64, FvtError> {
    let t_period = f.period.ok_or_else(|| FvtError::MissingPeriod(f.name.clone()))?;
    let panels = 64;
    let breaks: Vec<f64> = (0..=panels).map(|i| t_period * i as f64 / panels as f64).collect();
    let r = quad::integrate_with_breaks(|t| f.eval(t), &breaks, QuadConfig::new(1e-14, 1e-13))?;
    Ok(r.value / t_period)
}

/// Running mean `(1/t)∫₀^t f`, extrapolated in `1/t`, plus the one-period
/// mean for periodic entries.
pub fn cesaro_fvt(f: &CatalogFunction, t_probes: &[f64], tol: f64) -> Result<CesaroResult, FvtError> {
    let mut estimate = generalized_fvt(f, 0.0, t_probes, tol)?;
    estimate.method = Method::CesaroMean;
    let period_mean = match f.period {
        Some(_) => Some(period_mean(f)?),
        None => None,
    };
    let discrepancy = period_mean.map(|m| (m - estimate.value).abs());
    Ok(CesaroResult { estimate, period_mean, discrepancy })
}

/// Cesàro mean of the first component of a sampled signal (grid starting at
/// 0), with `g_0` linearly interpolated at the probes.
pub fn cesaro_fvt_sampled(f: &SampledSignal, t_probes: &[f64], tol: f64) -> Result<LimitEstimate, FvtError> {
    check_t_probes(t_probes)?;
    let profile = fraccalc::cesaro_profile(f, 0.0)?;
    let grid = *profile.grid();
    let g = profile.component(0);
    let ys = t_probes
        .iter()
        .map(|&t| {
            let x = (t - grid.t0) / grid.h;
            if x < 0.0 || x > (grid.n - 1) as f64 {
                return Err(FvtError::ProbeOutOfRange { t, t_end: grid.t_end() });
            }
            let k = (x.floor() as usize).min(grid.n - 2);
            let w = x - k as f64;
            Ok(g[k] * (1.0 - w) + g[k + 1] * w)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let xs: Vec<f64> = t_probes.iter().map(|t| 1.0 / t).collect();
    Ok(LimitEstimate::from_extrapolation(Method::CesaroMean, 0.0, &xs, &ys, T_DEGREE, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeFvt {
    /// Extrapolated `lim_{s→0} L{f'}(s)`.
    pub estimate: LimitEstimate,
    pub period_mean: f64,
    pub f0: f64,
    /// `(1/T)∫₀^T f − f(0⁺)`.
    pub predicted: f64,
    pub gap: f64,
}

/// Limit of `L{f'}(s)` for a periodic `f`, compared with the mean over one
/// period minus the initial value.
pub fn derivative_fvt(f: &CatalogFunction, s_seq: &[f64], tol: f64) -> Result<DerivativeFvt, FvtError> {
    if f.period.is_none() {
        return Err(FvtError::MissingPeriod(f.name.clone()));
    }
    check_s_seq(s_seq)?;
    let df = f.derivative_function();
    let values = s_seq
        .iter()
        .map(|&s| Ok(xform::laplace_numeric(&df, ComplexFreq::real(s)?)?.re))
        .collect::<Result<Vec<_>, FvtError>>()?;
    let estimate = LimitEstimate::from_extrapolation(Method::DerivativeForm, 0.0, s_seq, &values, S_DEGREE, tol);
    let mean = period_mean(f)?;
    let f0 = f.eval(0.0);
    let predicted = mean - f0;
    let gap = (estimate.value - predicted).abs();
    Ok(DerivativeFvt { estimate, period_mean: mean, f0, predicted, gap })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidateOptions {
    pub tol: f64,
    pub s_seq: Vec<f64>,
    /// Defaults to [`PERIODIC_T_PROBES`] for periodic entries and
    /// [`DEFAULT_T_PROBES`] otherwise.
    pub t_probes: Option<Vec<f64>>,
}

impl Default for CrossValidateOptions {
    fn default() -> Self {
        CrossValidateOptions { tol: 1e-2, s_seq: CROSS_S_SEQ.to_vec(), t_probes: None }
    }
}

/// Compares the classical limit `L`, the generalized Cesàro limit `G_α` and
/// the kernel-integral value `K_α = s·∫₁^∞ F(su)/u (1−1/u)^α du` (extrapolated
/// along the s schedule). Passes when `|L/(α+1) − G_α|` and
/// `|L/(α+1) − K_α|` are within tolerance; inconclusive when either limit
/// fails to converge.
pub fn cross_validate(f: &CatalogFunction, alpha: f64, opts: &CrossValidateOptions) -> ReportRecord {
    let started = Instant::now();
    let tol = opts.tol;
    let t_probes = opts.t_probes.clone().unwrap_or_else(|| {
        if f.period.is_some() { PERIODIC_T_PROBES.to_vec() } else { DEFAULT_T_PROBES.to_vec() }
    });
    let mut rec = ReportRecord::new(format!("fvt/{}/alpha={alpha}", f.name));
    rec.input("function", f.name.clone())
        .input("params", json!(f.params))
        .input("alpha", num(alpha))
        .input("s_seq", nums(&opts.s_seq))
        .input("t_probes", nums(&t_probes));

    let closed = f.transform();
    let numeric = f.clone();
    let transform = move |s: Complex64| match &closed {
        Some(tf) => tf(s),
        None => ComplexFreq::new(s)
            .and_then(|s| xform::laplace_numeric(&numeric, s))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
    };

    let mut conclusive = true;
    let classical = classical_fvt_with(&transform, &opts.s_seq, tol, f.has_transform());
    let predicted = match &classical {
        Ok(est) => {
            rec.output_f64("L", est.value).output("L_converged", est.converged);
            conclusive &= est.converged;
            est.value / (alpha + 1.0)
        }
        Err(e) => {
            rec.output("L_error", e.to_string());
            conclusive = false;
            f64::NAN
        }
    };
    rec.output_f64("predicted", predicted);

    match generalized_fvt(f, alpha, &t_probes, tol) {
        Ok(g) => {
            rec.output_f64("G", g.value)
                .output("G_converged", g.converged)
                .output("G_trace", nums(&g.trace.iter().map(|p| p.1).collect::<Vec<_>>()));
            conclusive &= g.converged;
            rec.gap("G", (predicted - g.value).abs(), tol);
        }
        Err(e) => {
            rec.output("G_error", e.to_string());
            conclusive = false;
        }
    }

    if f.has_transform() {
        let ks = opts
            .s_seq
            .iter()
            .map(|&s| Ok(s * xform::kernel_integral(&transform, alpha, ComplexFreq::real(s)?)?.re))
            .collect::<Result<Vec<_>, XformError>>();
        match ks {
            Ok(ks) => {
                let ex = extrapolate_with(&opts.s_seq, &ks, S_DEGREE + 1, Basis::LogPowers);
                rec.output_f64("K", ex.value).output("K_raw", nums(&ks));
                rec.gap("K", (predicted - ex.value).abs(), tol);
            }
            Err(e) => {
                rec.output("K_error", e.to_string());
                conclusive = false;
            }
        }
    }

    rec.status = if !conclusive {
        Status::Inconclusive
    } else if rec.gaps_within_tolerance() {
        Status::Pass
    } else {
        Status::Fail
    };
    rec.wall_time_ms = started.elapsed().as_millis() as u64;
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::TimeGrid;
    use crate::xform::{catalog_constant, catalog_tq_sin, Catalog};

    fn cat() -> Catalog {
        Catalog::standard().unwrap()
    }

    #[test]
    fn classical_examples() {
        let s = DEFAULT_S_SEQ;
        let e = classical_fvt(&|s| 1.0 / (s + 1.0), &s, DEFAULT_TOL).unwrap();
        assert!(e.value.abs() < 2e-6 && e.converged);
        let e = classical_fvt(&|s| 1.0 / s, &s, DEFAULT_TOL).unwrap();
        assert!((e.value - 1.0).abs() < 1e-14);
        let r = classical_fvt(&|s| 1.0 / (s * s), &[0.1, 0.05, 0.025], DEFAULT_TOL);
        assert!(matches!(r, Err(FvtError::Divergent(_))));
    }

    #[test]
    fn classical_flags_right_half_plane_pole() {
        let r = classical_fvt(&|s| 1.0 / (s - 1.0), &DEFAULT_S_SEQ, DEFAULT_TOL);
        assert!(matches!(r, Err(FvtError::Divergent(_))), "{r:?}");
        // poles on the imaginary axis are allowed
        assert!(classical_fvt(&|s| 1.0 / (s * s + 1.0), &DEFAULT_S_SEQ, DEFAULT_TOL).is_ok());
        let two_cos = cat().get("two_plus_cos3t").unwrap().transform().unwrap();
        assert!(classical_fvt(&*two_cos, &DEFAULT_S_SEQ, DEFAULT_TOL).is_ok());
    }

    #[test]
    fn classical_recovers_residue() {
        // s·F is a quadratic: reproduced exactly by the cubic fit
        let e = classical_fvt(&|s| (2.0 + 3.0 * s - s * s) / s, &DEFAULT_S_SEQ, 1e-8).unwrap();
        assert!((e.value - 2.0).abs() <= 1e-8);
        // generic rational F: error is the cubic remainder Π s_i/(1+s_i)
        let e = classical_fvt(&|s| 1.0 / (s * (s + 1.0)), &DEFAULT_S_SEQ, 1e-8).unwrap();
        let bound: f64 = DEFAULT_S_SEQ.iter().map(|s| s / (1.0 + s)).product();
        assert!((e.value - 1.0).abs() <= bound * 1.001, "{}", e.value);
    }

    #[test]
    fn schedules_are_validated() {
        assert!(classical_fvt(&|s| 1.0 / s, &[0.1, 0.05], 1e-3).is_err());
        assert!(classical_fvt(&|s| 1.0 / s, &[0.1, 0.2, 0.05], 1e-3).is_err());
        let one = catalog_constant(1.0);
        assert!(generalized_fvt(&one, 0.5, &[10.0, 5.0, 20.0], 1e-3).is_err());
    }

    #[test]
    fn cesaro_examples() {
        let c = cat();
        let r = cesaro_fvt(c.get("two_plus_cos3t").unwrap(), &PERIODIC_T_PROBES, DEFAULT_TOL).unwrap();
        assert!((r.estimate.value - 2.0).abs() < 1e-3);
        assert!((r.period_mean.unwrap() - 2.0).abs() < 1e-12);
        assert!(r.discrepancy.unwrap() < 1e-3);
        let r = cesaro_fvt(c.get("sin").unwrap(), &PERIODIC_T_PROBES, DEFAULT_TOL).unwrap();
        assert!(r.estimate.value.abs() < 1e-3);
        let r = cesaro_fvt(c.get("tq_sin").unwrap(), &[1250.0, 2500.0, 5000.0, 10000.0], DEFAULT_TOL).unwrap();
        assert!(!r.estimate.converged);
    }

    #[test]
    fn cesaro_profile_of_t2_sin_matches_antiderivative() {
        let f = cat().get("tq_sin").unwrap().clone();
        for t in [10.0f64, 77.0, 400.0] {
            let exact = (2.0 * t * t.sin() - (t * t - 2.0) * t.cos() - 2.0) / t;
            assert!((profile_value(&f, 0.0, t).unwrap() - exact).abs() < 1e-8 * t * t);
        }
    }

    #[test]
    fn generalized_examples() {
        let one = catalog_constant(1.0);
        let e = generalized_fvt(&one, 2.0, &DEFAULT_T_PROBES, DEFAULT_TOL).unwrap();
        assert!((e.value - 1.0 / 3.0).abs() < 1e-12 && e.converged);

        let tq = catalog_tq_sin(2.0, 1.0).unwrap();
        let e = generalized_fvt(&tq, 2.0, &DEFAULT_T_PROBES, 1e-2).unwrap();
        assert!(e.value.abs() <= 2e-2);
        assert!((profile_value(&tq, 2.0, 400.0).unwrap() + 0.0075620908).abs() < 1e-8);
        assert!((profile_value(&tq, 2.0, 100.0).unwrap() + 0.0021426794).abs() < 1e-8);

        let e = generalized_fvt(&tq, 1.0, &DEFAULT_T_PROBES, DEFAULT_TOL).unwrap();
        assert!(!e.converged);
    }

    #[test]
    fn normalization_for_constants() {
        let five = catalog_constant(5.0);
        for alpha in [0.0, 0.5, 1.0, 2.0, 3.5] {
            let e = generalized_fvt(&five, alpha, &DEFAULT_T_PROBES, DEFAULT_TOL).unwrap();
            assert!((e.value * (alpha + 1.0) - 5.0).abs() < 1e-10, "alpha {alpha}: {}", e.value);
        }
    }

    #[test]
    fn derivative_examples() {
        let c = cat();
        let r = derivative_fvt(c.get("cos").unwrap(), &DEFAULT_S_SEQ, DEFAULT_TOL).unwrap();
        assert!((r.estimate.value + 1.0).abs() < 1e-3 && r.gap < 1e-3);
        let r = derivative_fvt(&catalog_constant(5.0), &DEFAULT_S_SEQ, DEFAULT_TOL).unwrap();
        assert!(r.estimate.value.abs() < 1e-12);
        let r = derivative_fvt(c.get("two_plus_cos3t").unwrap(), &DEFAULT_S_SEQ, DEFAULT_TOL).unwrap();
        assert!((r.estimate.value + 1.0).abs() < 1e-3 && (r.predicted + 1.0).abs() < 1e-12);
        assert!(matches!(
            derivative_fvt(c.get("exp_decay").unwrap(), &DEFAULT_S_SEQ, DEFAULT_TOL),
            Err(FvtError::MissingPeriod(_))
        ));
    }

    #[test]
    fn sampled_cesaro() {
        let g = TimeGrid::span(0.0, 2000.0, 0.05).unwrap();
        let f = SampledSignal::from_fn(g, |t| 2.0 + (3.0 * t).cos()).unwrap();
        let e = cesaro_fvt_sampled(&f, &[250.0, 500.0, 1000.0, 2000.0], DEFAULT_TOL).unwrap();
        assert!((e.value - 2.0).abs() < 1e-3);
        assert!(cesaro_fvt_sampled(&f, &[250.0, 500.0, 3000.0], DEFAULT_TOL).is_err());
    }

    #[test]
    fn cross_validate_examples() {
        let c = cat();
        let opts = CrossValidateOptions::default();
        let r = cross_validate(c.get("const1").unwrap(), 0.5, &opts);
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!((r.get_f64("G").unwrap() - 2.0 / 3.0).abs() < 1e-10);
        let r = cross_validate(c.get("two_plus_cos3t").unwrap(), 0.0, &opts);
        assert_eq!(r.status, Status::Pass, "{r:?}");
        let r = cross_validate(c.get("tq_sin").unwrap(), 2.0, &opts);
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!(r.get_f64("G").unwrap().abs() <= 2e-2);
        let r = cross_validate(c.get("ramp").unwrap(), 1.0, &opts);
        assert_eq!(r.status, Status::Inconclusive);
    }

    #[test]
    fn theorem_identity_over_catalog() {
        let c = cat();
        let opts = CrossValidateOptions::default();
        for name in ["const1", "exp_decay", "two_plus_cos3t", "sin", "cos", "tq_sin"] {
            for alpha in [0.0, 0.5, 1.0, 2.0, 3.5] {
                let r = cross_validate(c.get(name).unwrap(), alpha, &opts);
                assert_ne!(r.status, Status::Fail, "{name} alpha {alpha}: {r:?}");
            }
        }
    }
}
