//! Caputo fractional initial-value problems `ᶜD^α x = f(x)`, `x(0) = x₀`,
//! `0 < α < 1`: a fractional Adams–Bashforth–Moulton (PECE) solver, a
//! classical RK4 reference for `α = 1`, periodicity residual scans and the
//! certificate integral `∫₀^T (T−τ)^{1−α} x'(τ) dτ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extrap::{extrapolate_with, Basis};
use crate::fraccalc::{self, first_difference, trapezoid_weights, FracError, FracOrder, SampledSignal, TimeGrid};
use crate::quad::{self, QuadConfig, QuadError};
use crate::report::{num, nums, ReportRecord, Status};
use crate::specfun::{self, SpecError};
use crate::xform::{laplace_sampled, ComplexFreq, XformError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FodeError {
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidOrder(f64),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("unknown rhs {name:?}; available: {available}")]
    UnknownRhs { name: String, available: String },
    #[error("state norm {norm:e} exceeded 1e12 at t = {t}")]
    BlowUp { t: f64, norm: f64 },
    #[error("{steps} steps exceed the practical cap of {MAX_STEPS} (history sum is O(n^2))")]
    StepCap { steps: usize },
    #[error("restarting a Caputo solve is not supported: the memory term spans the whole history")]
    RestartUnsupported,
    #[error("window: {0}")]
    Window(String),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Xform(#[from] XformError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

pub const MAX_STEPS: usize = 200_000;
const BLOW_UP_NORM: f64 = 1e12;

pub type RhsFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Autonomous right-hand side `f(x)` with its registry name.
#[derive(Clone)]
pub struct Rhs {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    /// Required state dimension, if fixed.
    pub dim: Option<usize>,
    f: RhsFn,
}

impl fmt::Debug for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rhs").field("name", &self.name).field("params", &self.params).field("dim", &self.dim).finish()
    }
}

impl Rhs {
    pub fn new(name: impl Into<String>, dim: Option<usize>, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Rhs { name: name.into(), params: BTreeMap::new(), dim, f: Arc::new(f) }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }

    /// Max-row-sum norm of a forward-difference Jacobian at `x`.
    pub fn lipschitz_estimate(&self, x: &[f64]) -> f64 {
        let f0 = self.eval(x);
        let d = x.len();
        let mut rows = vec![0.0; f0.len()];
        for j in 0..d {
            let step = 1e-6 * (1.0 + x[j].abs());
            let mut xp = x.to_vec();
            xp[j] += step;
            let fp = self.eval(&xp);
            for (i, r) in rows.iter_mut().enumerate() {
                *r += ((fp[i] - f0[i]) / step).abs();
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }
}

pub const RHS_NAMES: [&str; 4] = ["linear_decay", "rotation", "logistic", "zero"];

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Named right-hand sides: `linear_decay` (`−λx`), `rotation`
/// (`(x, y) ↦ (−ωy, ωx)`), `logistic` (`r x (1 − x/K)`) and `zero`.
pub fn rhs_registry(name: &str, params: &BTreeMap<String, f64>) -> Result<Rhs, FodeError> {
    let mut rhs = match name {
        "linear_decay" => {
            let lambda = param(params, "lambda", 1.0);
            Rhs::new(name, None, move |x| x.iter().map(|v| -lambda * v).collect())
        }
        "rotation" => {
            let omega = param(params, "omega", 1.0);
            Rhs::new(name, Some(2), move |x| vec![-omega * x[1], omega * x[0]])
        }
        "logistic" => {
            let r = param(params, "r", 1.0);
            let k = param(params, "k", 1.0);
            Rhs::new(name, None, move |x| x.iter().map(|v| r * v * (1.0 - v / k)).collect())
        }
        "zero" => Rhs::new(name, None, |x| vec![0.0; x.len()]),
        _ => {
            return Err(FodeError::UnknownRhs { name: name.to_string(), available: RHS_NAMES.join(", ") });
        }
    };
    rhs.params = params.clone();
    Ok(rhs)
}

/// A Caputo initial-value problem on `[0, horizon]` with step `h`.
#[derive(Debug, Clone)]
pub struct FodeProblem {
    alpha: f64,
    rhs: Rhs,
    x0: Vec<f64>,
    horizon: f64,
    h: f64,
    steps: usize,
}

impl FodeProblem {
    pub fn new(alpha: f64, rhs: Rhs, x0: Vec<f64>, horizon: f64, h: f64) -> Result<Self, FodeError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(FodeError::InvalidOrder(alpha));
        }
        let steps = check_schedule(&rhs, &x0, horizon, h)?;
        Ok(FodeProblem { alpha, rhs, x0, horizon, h, steps })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn rhs(&self) -> &Rhs {
        &self.rhs
    }
    pub fn x0(&self) -> &[f64] {
        &self.x0
    }
    pub fn horizon(&self) -> f64 {
        self.horizon
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
}

fn check_schedule(rhs: &Rhs, x0: &[f64], horizon: f64, h: f64) -> Result<usize, FodeError> {
    if x0.is_empty() || x0.iter().any(|v| !v.is_finite()) {
        return Err(FodeError::InvalidProblem("x0 must be a non-empty finite vector".into()));
    }
    if let Some(d) = rhs.dim {
        if d != x0.len() {
            return Err(FodeError::InvalidProblem(format!("{} needs dimension {d}, x0 has {}", rhs.name, x0.len())));
        }
    }
    if rhs.eval(x0).len() != x0.len() {
        return Err(FodeError::InvalidProblem("rhs output dimension differs from the state dimension".into()));
    }
    if !(h > 0.0 && horizon > 0.0 && h.is_finite() && horizon.is_finite()) {
        return Err(FodeError::InvalidProblem(format!("horizon and h must be positive (got {horizon}, {h})")));
    }
    let ratio = horizon / h;
    let steps = ratio.round();
    if steps < 1.0 || (ratio - steps).abs() > 1e-9 * steps {
        return Err(FodeError::InvalidProblem(format!("horizon/h = {ratio} is not a positive integer")));
    }
    let steps = steps as usize;
    if steps > MAX_STEPS {
        return Err(FodeError::StepCap { steps });
    }
    Ok(steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    AbmPece,
    Rk4Reference,
    Sampled,
}

/// A numerical solution (or a sampled signal treated as one).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: SampledSignal,
    pub rhs_evals: usize,
    pub scheme: Scheme,
    /// Set when `h^α · L > 0.5` for the Lipschitz estimate at `x₀`.
    pub contraction_warning: bool,
}

impl Trajectory {
    pub fn from_signal(states: SampledSignal) -> Self {
        Trajectory { states, rhs_evals: 0, scheme: Scheme::Sampled, contraction_warning: false }
    }

    pub fn grid(&self) -> &TimeGrid {
        self.states.grid()
    }

    pub fn dim(&self) -> usize {
        self.states.dim()
    }

    /// Linear interpolation of the state at `t`.
    pub fn state_at(&self, t: f64) -> Vec<f64> {
        let g = self.grid();
        let x = ((t - g.t0) / g.h).clamp(0.0, (g.n - 1) as f64);
        let k = (x.floor() as usize).min(g.n - 2);
        let w = x - k as f64;
        let (a, b) = (self.states.sample(k), self.states.sample(k + 1));
        a.iter().zip(b).map(|(p, q)| p + w * (q - p)).collect()
    }
}

fn check_finite(state: &[f64], t: f64) -> Result<(), FodeError> {
    let norm = state.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(norm <= BLOW_UP_NORM) {
        return Err(FodeError::BlowUp { t, norm });
    }
    Ok(())
}

/// Fractional Adams–Bashforth–Moulton PECE with one corrector pass:
/// product-rectangle predictor, product-trapezoid corrector.
pub fn solve(p: &FodeProblem) -> Result<Trajectory, FodeError> {
    let (alpha, h, n, d) = (p.alpha, p.h, p.steps, p.x0.len());
    let grid = TimeGrid::new(0.0, h, n + 1)?;
    let ha = h.powf(alpha);
    let pred_scale = ha / specfun::gamma(alpha + 1.0)?;
    let tw = trapezoid_weights(alpha, n + 1);
    let corr_scale = ha * tw.scale_no_h;
    let rect: Vec<f64> = (0..=n).map(|m| if m == 0 { 0.0 } else { first_difference(alpha, m) }).collect();

    let lip = p.rhs.lipschitz_estimate(&p.x0);
    let contraction_warning = ha * lip > 0.5;
    if contraction_warning {
        log::warn!("h^alpha * L = {:.3} > 0.5; the corrector may not contract", ha * lip);
    }

    let mut x = Vec::with_capacity((n + 1) * d);
    let mut fx = Vec::with_capacity((n + 1) * d);
    x.extend_from_slice(&p.x0);
    fx.extend(p.rhs.eval(&p.x0));
    let mut evals = 1;
    let mut pred = vec![0.0; d];
    let mut corr = vec![0.0; d];
    for k in 1..=n {
        pred.copy_from_slice(&p.x0);
        corr.copy_from_slice(&p.x0);
        for i in 0..d {
            let mut rsum = 0.0;
            let mut tsum = tw.start[k] * fx[i];
            for j in 0..k {
                let f = fx[j * d + i];
                rsum += rect[k - j] * f;
                if j > 0 {
                    tsum += tw.conv[k - j] * f;
                }
            }
            pred[i] += pred_scale * rsum;
            corr[i] += corr_scale * tsum;
        }
        check_finite(&pred, grid.t(k))?;
        let fp = p.rhs.eval(&pred);
        for i in 0..d {
            corr[i] += corr_scale * tw.conv[0] * fp[i];
        }
        check_finite(&corr, grid.t(k))?;
        let fc = p.rhs.eval(&corr);
        evals += 2;
        x.extend_from_slice(&corr);
        fx.extend(fc);
    }
    Ok(Trajectory {
        states: SampledSignal::new(grid, d, x)?,
        rhs_evals: evals,
        scheme: Scheme::AbmPece,
        contraction_warning,
    })
}

/// Continuing a solve from its last state would drop the memory term, so it
/// is refused; solve again over the longer horizon instead.
pub fn restart(_traj: &Trajectory, _extra_horizon: f64) -> Result<Trajectory, FodeError> {
    Err(FodeError::RestartUnsupported)
}

/// Classical RK4 for `x' = f(x)`, the `α = 1` reference.
pub fn solve_classical_rk4(rhs: &Rhs, x0: &[f64], horizon: f64, h: f64) -> Result<Trajectory, FodeError> {
    let n = check_schedule(rhs, x0, horizon, h)?;
    let d = x0.len();
    let grid = TimeGrid::new(0.0, h, n + 1)?;
    let mut x = Vec::with_capacity((n + 1) * d);
    x.extend_from_slice(x0);
    let mut cur = x0.to_vec();
    let axpy = |a: &[f64], s: f64, b: &[f64]| a.iter().zip(b).map(|(p, q)| p + s * q).collect::<Vec<_>>();
    for k in 1..=n {
        let k1 = rhs.eval(&cur);
        let k2 = rhs.eval(&axpy(&cur, 0.5 * h, &k1));
        let k3 = rhs.eval(&axpy(&cur, 0.5 * h, &k2));
        let k4 = rhs.eval(&axpy(&cur, h, &k3));
        for i in 0..d {
            cur[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        check_finite(&cur, grid.t(k))?;
        x.extend_from_slice(&cur);
    }
    Ok(Trajectory {
        states: SampledSignal::new(grid, d, x)?,
        rhs_evals: 4 * n,
        scheme: Scheme::Rk4Reference,
        contraction_warning: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityScan {
    /// `(T, residual(T))` over the candidate grid.
    pub curve: Vec<(f64, f64)>,
    /// Minimizer after golden-section refinement around the best candidate.
    pub best_period: f64,
    pub min_residual: f64,
    /// `max ‖x − x̄‖∞` over the window.
    pub nonconstancy: f64,
    pub t_skip: f64,
    pub window: f64,
}

/// Default transient discard: 20% of the horizon.
pub fn default_t_skip(traj: &Trajectory) -> f64 {
    0.2 * traj.grid().t_end()
}

fn window_nodes(traj: &Trajectory, t_skip: f64, window: f64) -> (usize, usize) {
    let g = traj.grid();
    let first = ((t_skip - g.t0) / g.h - 1e-9).ceil().max(0.0) as usize;
    let last = (((t_skip + window - g.t0) / g.h + 1e-9).floor() as usize).min(g.n - 1);
    (first, last)
}

/// `max_{t ∈ [t_skip, t_skip + window]} ‖x(t+T) − x(t)‖∞` over grid nodes
/// `t`, with `x(t+T)` linearly interpolated.
pub fn residual_at(traj: &Trajectory, period: f64, t_skip: f64, window: f64) -> f64 {
    let (first, last) = window_nodes(traj, t_skip, window);
    let g = traj.grid();
    let mut worst = 0.0f64;
    for k in first..=last {
        let shifted = traj.state_at(g.t(k) + period);
        for (a, b) in traj.states.sample(k).iter().zip(&shifted) {
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

/// Scans candidate periods. Requires `t_skip + window + max T ≤ horizon`
/// (`t_skip` defaults to 20% of the horizon).
pub fn periodicity_residual(
    traj: &Trajectory,
    t_candidates: &[f64],
    window: f64,
    t_skip: Option<f64>,
) -> Result<PeriodicityScan, FodeError> {
    if t_candidates.is_empty() || t_candidates.iter().any(|t| !(*t > 0.0)) {
        return Err(FodeError::Window("period candidates must be positive and non-empty".into()));
    }
    if !(window > 0.0) {
        return Err(FodeError::Window(format!("window must be positive, got {window}")));
    }
    let t_skip = t_skip.unwrap_or_else(|| default_t_skip(traj));
    let t_max = t_candidates.iter().copied().fold(0.0, f64::max);
    let horizon = traj.grid().t_end();
    if t_skip + window + t_max > horizon * (1.0 + 1e-12) {
        return Err(FodeError::Window(format!(
            "t_skip + window + max T = {} exceeds the horizon {horizon}",
            t_skip + window + t_max
        )));
    }
    let curve: Vec<(f64, f64)> = t_candidates.iter().map(|&t| (t, residual_at(traj, t, t_skip, window))).collect();
    let (ib, &(mut best_period, mut min_residual)) =
        curve.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).expect("non-empty");

    // golden-section refinement on the bracket around the best candidate
    let lo_t = t_candidates.iter().copied().fold(f64::INFINITY, f64::min);
    let mut a = if ib > 0 { curve[ib - 1].0 } else { lo_t.max(best_period - 1e-3) };
    let mut b = if ib + 1 < curve.len() { curve[ib + 1].0 } else { t_max.min(best_period + 1e-3) };
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let r = |t: f64| residual_at(traj, t, t_skip, window);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut dd = a + phi * (b - a);
    let (mut fc, mut fd) = (r(c), r(dd));
    for _ in 0..60 {
        if (b - a) < 1e-10 * (1.0 + best_period) {
            break;
        }
        if fc < fd {
            b = dd;
            dd = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = r(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + phi * (b - a);
            fd = r(dd);
        }
    }
    for (t, v) in [(c, fc), (dd, fd)] {
        if v < min_residual {
            best_period = t;
            min_residual = v;
        }
    }

    let (first, last) = window_nodes(traj, t_skip, window);
    let dim = traj.dim();
    let count = (last - first + 1) as f64;
    let mut mean = vec![0.0; dim];
    for k in first..=last {
        for (m, v) in mean.iter_mut().zip(traj.states.sample(k)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= count);
    let mut nonconstancy = 0.0f64;
    for k in first..=last {
        for (m, v) in mean.iter().zip(traj.states.sample(k)) {
            nonconstancy = nonconstancy.max((v - m).abs());
        }
    }
    Ok(PeriodicityScan { curve, best_period, min_residual, nonconstancy, t_skip, window })
}

/// `∫₀^T (T−τ)^{1−α} x'(τ) dτ` per component, with its Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub components: Vec<f64>,
    pub norm: f64,
}

impl Certificate {
    fn from_components(components: Vec<f64>) -> Self {
        let norm = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        Certificate { components, norm }
    }
}

/// Certificate integral of a sampled trajectory, as `Γ(2−α) I^{2−α}[x'](T)`
/// with `x'` from second-order differences and the product-trapezoid rule.
/// When `T` is not a grid node the trajectory is resampled onto `[0, T]`.
pub fn certificate_integral(traj: &Trajectory, period: f64, alpha: f64) -> Result<Certificate, FodeError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FodeError::InvalidOrder(alpha));
    }
    let g = *traj.grid();
    if !(period > 0.0) || period > g.t_end() * (1.0 + 1e-12) {
        return Err(FodeError::Window(format!("period {period} outside (0, {}]", g.t_end())));
    }
    let ratio = (period - g.t0) / g.h;
    let on_grid = (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0);
    let section = if on_grid {
        let n = ratio.round() as usize + 1;
        let grid = TimeGrid::new(g.t0, g.h, n)?;
        SampledSignal::new(grid, traj.dim(), traj.states.values()[..n * traj.dim()].to_vec())?
    } else {
        let n = ratio.ceil() as usize + 1;
        let grid = TimeGrid::new(g.t0, (period - g.t0) / (n - 1) as f64, n)?;
        SampledSignal::from_vec_fn(grid, traj.dim(), |t| traj.state_at(t))?
    };
    let dx = fraccalc::derivative(&section, 1)?;
    let integral = fraccalc::rl_integral(&dx, FracOrder::new(2.0 - alpha)?)?;
    let gamma = specfun::gamma(2.0 - alpha)?;
    let last = integral.len() - 1;
    Ok(Certificate::from_components(integral.sample(last).iter().map(|v| gamma * v).collect()))
}

/// Certificate integral of an analytic scalar signal given its derivative,
/// by adaptive quadrature.
pub fn certificate_integral_fn(
    derivative: impl Fn(f64) -> f64,
    period: f64,
    alpha: f64,
) -> Result<f64, FodeError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FodeError::InvalidOrder(alpha));
    }
    let panels = 64;
    let breaks: Vec<f64> = (0..=panels).map(|i| period * i as f64 / panels as f64).collect();
    let r = quad::integrate_with_breaks(
        |tau: f64| (period - tau).powf(1.0 - alpha) * derivative(tau),
        &breaks,
        QuadConfig::new(1e-14, 1e-13),
    )?;
    Ok(r.value)
}

pub const FREQ_S_SEQ: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Checks the transform identity `L{ᶜD^α x}(s) = s^{α−1} L{x'}(s)` on a
/// trajectory: compares `A(s) = s^α L{x'}(s)` with `B(s) = s L{ᶜD^α x}(s)`
/// along `s_seq` (first component), extrapolates both with the model
/// `c + s^α (a₀ + a₁ s + …)`, and
/// reports them against `(1/T)∫₀^T ᶜD^α x`. Transforms are truncated at the
/// horizon, so `min(s) · horizon ≥ 25` is required for a conclusive record.
pub fn frequency_side_check(traj: &Trajectory, alpha: f64, period: f64, s_seq: &[f64], tol: f64) -> ReportRecord {
    let started = Instant::now();
    let mut rec = ReportRecord::new(format!("fode/frequency_side/alpha={alpha}"));
    rec.input("alpha", num(alpha)).input("period", num(period)).input("s_seq", nums(s_seq));
    let horizon = traj.grid().t_end();
    rec.input("horizon", num(horizon));

    let outcome = (|| -> Result<(), FodeError> {
        let order = FracOrder::new(alpha)?;
        let dx = fraccalc::derivative(&traj.states, 1)?;
        let caputo = fraccalc::caputo_derivative(&traj.states, order)?;
        let g = *traj.grid();
        let n_period = (((period - g.t0) / g.h).round() as usize).min(g.n - 1);
        let c0 = caputo.component(0);
        let mean = if n_period == 0 {
            f64::NAN
        } else {
            let area: f64 = c0[..=n_period].windows(2).map(|w| 0.5 * (w[0] + w[1]) * g.h).sum();
            area / g.t(n_period)
        };
        rec.output_f64("caputo_period_mean", mean);

        let mut a_vals = Vec::new();
        let mut b_vals = Vec::new();
        let mut worst_gap = 0.0f64;
        for &s in s_seq {
            let freq = ComplexFreq::real(s)?;
            let a = s.powf(alpha) * laplace_sampled(&dx, freq)[0].re;
            let b = s * laplace_sampled(&caputo, freq)[0].re;
            worst_gap = worst_gap.max((a - b).abs());
            a_vals.push(a);
            b_vals.push(b);
        }
        rec.output("A", nums(&a_vals)).output("B", nums(&b_vals));
        let scale = traj.states.max_abs().max(1.0);
        rec.gap("identity", worst_gap, tol * scale);
        if s_seq.len() >= 2 {
            let a_lim = extrapolate_with(s_seq, &a_vals, 4, Basis::Fractional(alpha));
            let b_lim = extrapolate_with(s_seq, &b_vals, 4, Basis::Fractional(alpha));
            rec.output_f64("A_limit", a_lim.value).output_f64("B_limit", b_lim.value);
        }
        Ok(())
    })();

    let s_min = s_seq.iter().copied().fold(f64::INFINITY, f64::min);
    rec.status = match outcome {
        Err(e) => {
            rec.output("error", e.to_string());
            Status::Inconclusive
        }
        Ok(()) if !(s_min * horizon >= 25.0) => {
            rec.output("note", "horizon too short for the smallest s; transforms are truncated");
            Status::Inconclusive
        }
        Ok(()) if rec.gaps_within_tolerance() => Status::Pass,
        Ok(()) => Status::Fail,
    };
    rec.wall_time_ms = started.elapsed().as_millis() as u64;
    rec
}

/// Residual floor below which a nonconstant trajectory is treated as
/// periodic by [`periodicity_report`].
pub const RESIDUAL_FLOOR: f64 = 0.05;

/// Periodicity scan of a fractional trajectory as a report record.
///
/// Passes when the best residual stays at or above `floor` (no periodic
/// orbit), fails when a nonconstant trajectory comes back within `floor`,
/// and is inconclusive when the window itself varies by less than `floor`.
pub fn periodicity_report(
    problem: &FodeProblem,
    traj: &Trajectory,
    t_candidates: &[f64],
    window: f64,
    t_skip: Option<f64>,
    floor: f64,
) -> Result<(ReportRecord, PeriodicityScan), FodeError> {
    let started = Instant::now();
    let scan = periodicity_residual(traj, t_candidates, window, t_skip)?;
    let mut rec = ReportRecord::new(format!("fode/{}/alpha={}", problem.rhs().name, problem.alpha()));
    rec.input("rhs", problem.rhs().name.clone())
        .input("params", serde_json::json!(problem.rhs().params))
        .input("alpha", num(problem.alpha()))
        .input("x0", nums(problem.x0()))
        .input("horizon", num(problem.horizon()))
        .input("h", num(problem.h()))
        .input("window", num(window))
        .input("t_skip", num(scan.t_skip))
        .input("n_candidates", t_candidates.len());
    rec.output_f64("min_residual", scan.min_residual)
        .output_f64("best_period", scan.best_period)
        .output_f64("nonconstancy", scan.nonconstancy)
        .output("contraction_warning", traj.contraction_warning);
    let end = traj.states.sample(traj.states.len() - 1).to_vec();
    rec.output("final_state", nums(&end));
    if scan.best_period <= traj.grid().t_end() {
        let cert = certificate_integral(traj, scan.best_period, problem.alpha())?;
        rec.output("certificate", nums(&cert.components)).output_f64("certificate_norm", cert.norm);
    }
    rec.tolerances.insert("residual_floor".into(), floor);
    rec.status = if !(scan.nonconstancy > floor) {
        Status::Inconclusive
    } else if scan.min_residual >= floor {
        Status::Pass
    } else {
        Status::Fail
    };
    rec.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok((rec, scan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rhs(name: &str) -> Rhs {
        rhs_registry(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn problem_invariants() {
        let r = rhs("linear_decay");
        assert_eq!(FodeProblem::new(1.0, r.clone(), vec![1.0], 1.0, 0.1).unwrap_err(), FodeError::InvalidOrder(1.0));
        assert!(FodeProblem::new(0.0, r.clone(), vec![1.0], 1.0, 0.1).is_err());
        assert!(FodeProblem::new(0.5, r.clone(), vec![1.0], 1.0, 0.3).is_err());
        assert!(FodeProblem::new(0.5, rhs("rotation"), vec![1.0], 1.0, 0.1).is_err());
        assert!(matches!(
            FodeProblem::new(0.5, r, vec![1.0], 1e3, 1e-3),
            Err(FodeError::StepCap { steps: 1_000_000 })
        ));
        assert!(matches!(rhs_registry("nosuch", &BTreeMap::new()), Err(FodeError::UnknownRhs { .. })));
    }

    #[test]
    fn near_one_matches_exponential() {
        let p = FodeProblem::new(0.999, rhs("linear_decay"), vec![1.0], 1.0, 1e-3).unwrap();
        let tr = solve(&p).unwrap();
        let last = tr.states.sample(tr.states.len() - 1)[0];
        assert!((last - (-1.0f64).exp()).abs() < 2e-3, "{last}");
    }

    #[test]
    fn zero_rhs_keeps_initial_state() {
        let p = FodeProblem::new(0.3, rhs("zero"), vec![2.0, -1.0], 5.0, 0.01).unwrap();
        let tr = solve(&p).unwrap();
        for k in 0..tr.states.len() {
            assert_eq!(tr.states.sample(k), &[2.0, -1.0]);
        }
    }

    #[test]
    fn blow_up_is_reported() {
        let grow = Rhs::new("square", None, |x: &[f64]| x.iter().map(|v| v * v).collect());
        let p = FodeProblem::new(0.9, grow, vec![1.0], 20.0, 0.01).unwrap();
        assert!(matches!(solve(&p), Err(FodeError::BlowUp { .. })));
    }

    #[test]
    fn restart_is_refused() {
        let p = FodeProblem::new(0.5, rhs("linear_decay"), vec![1.0], 1.0, 0.01).unwrap();
        let tr = solve(&p).unwrap();
        assert_eq!(restart(&tr, 1.0).unwrap_err(), FodeError::RestartUnsupported);
    }

    #[test]
    fn rk4_rotation_is_periodic() {
        let tr = solve_classical_rk4(&rhs("rotation"), &[1.0, 0.0], 40.0, 0.01).unwrap();
        let scan = periodicity_residual(&tr, &[6.0, 6.2, 6.4], 5.0, None).unwrap();
        assert!((scan.best_period - 2.0 * PI).abs() < 1e-3, "{}", scan.best_period);
        assert!(scan.min_residual < 1e-4);
    }

    #[test]
    fn residual_of_analytic_cosine() {
        let g = TimeGrid::span(0.0, 12.0, 5e-5).unwrap();
        let tr = Trajectory::from_signal(SampledSignal::from_fn(g, f64::cos).unwrap());
        assert!(residual_at(&tr, 2.0 * PI, 2.0, 3.0) <= 1e-9);
        let flat = Trajectory::from_signal(SampledSignal::from_fn(g, |_| 4.0).unwrap());
        let scan = periodicity_residual(&flat, &[1.0, 2.0, 3.0], 3.0, None).unwrap();
        assert_eq!(scan.min_residual, 0.0);
        assert_eq!(scan.nonconstancy, 0.0);
    }

    #[test]
    fn window_must_fit() {
        let g = TimeGrid::span(0.0, 10.0, 0.01).unwrap();
        let tr = Trajectory::from_signal(SampledSignal::from_fn(g, f64::sin).unwrap());
        assert!(matches!(periodicity_residual(&tr, &[7.0], 2.0, None), Err(FodeError::Window(_))));
    }

    #[test]
    fn certificate_examples() {
        let g = TimeGrid::span(0.0, 7.0, 1e-3).unwrap();
        let cos = Trajectory::from_signal(SampledSignal::from_fn(g, f64::cos).unwrap());
        let c = certificate_integral(&cos, 2.0 * PI, 0.5).unwrap();
        assert!((c.components[0] + 1.894693378204330).abs() < 1e-4, "{c:?}");
        let analytic = certificate_integral_fn(|t| -t.sin(), 2.0 * PI, 0.5).unwrap();
        assert!((analytic + 1.894693378204330).abs() < 1e-10);
        let near_one = certificate_integral_fn(|t| -t.sin(), 2.0 * PI, 0.999).unwrap();
        assert!(near_one.abs() <= 1e-2);
        let flat = Trajectory::from_signal(SampledSignal::from_fn(g, |_| 3.0).unwrap());
        assert!(certificate_integral(&flat, 2.0 * PI, 0.5).unwrap().norm <= 1e-12);
    }

    #[test]
    fn certificate_values_for_cosine() {
        for (alpha, want) in [(0.3, -3.2257487306), (0.7, -0.9443967723)] {
            let c = certificate_integral_fn(|t| -t.sin(), 2.0 * PI, alpha).unwrap();
            assert!((c - want).abs() < 1e-9, "alpha {alpha}: {c}");
        }
    }

    #[test]
    fn frequency_identity_for_cosine() {
        let g = TimeGrid::span(0.0, 1000.0, 0.025).unwrap();
        let tr = Trajectory::from_signal(SampledSignal::from_fn(g, f64::cos).unwrap());
        let rec = frequency_side_check(&tr, 0.5, 2.0 * PI, &FREQ_S_SEQ, 1e-3);
        assert_eq!(rec.status, Status::Pass, "{rec:?}");
        assert!(rec.get_f64("A_limit").unwrap().abs() < 1e-3, "{rec:?}");

        let flat = Trajectory::from_signal(SampledSignal::from_fn(g, |_| 2.0).unwrap());
        let rec = frequency_side_check(&flat, 0.5, 2.0 * PI, &FREQ_S_SEQ, 1e-3);
        assert_eq!(rec.get_f64("A_limit"), Some(0.0));
        assert_eq!(rec.get_f64("B_limit"), Some(0.0));
        assert_eq!(rec.get_f64("caputo_period_mean"), Some(0.0));
    }
}
