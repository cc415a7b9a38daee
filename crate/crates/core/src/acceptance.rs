//! The acceptance suite: quantitative checks of the whole toolkit, grouped by
//! the module they exercise. Upper-bound tolerances are multiplied by
//! `tol_scale`; floors, orders, ratios and runtime budgets are not.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::finval::{self, CrossValidateOptions};
use crate::fodesim::{self, FodeProblem, Trajectory};
use crate::fraccalc::{self, SampledSignal, TimeGrid};
use crate::report::{ReportRecord, Status};
use crate::specfun;
use crate::xform::{self, catalog_tq_sin, Catalog, ComplexFreq};

/// Certificate integral `∫₀^{2π} (2π−τ)^{1/2} (−sin τ) dτ`.
pub const COSINE_CERTIFICATE: f64 = -1.894_693_378_204_330;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Specfun,
    Fraccalc,
    Xform,
    Fvt,
    Fode,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::Specfun, Group::Fraccalc, Group::Xform, Group::Fvt, Group::Fode];

    pub fn name(self) -> &'static str {
        match self {
            Group::Specfun => "specfun",
            Group::Fraccalc => "fraccalc",
            Group::Xform => "xform",
            Group::Fvt => "fvt",
            Group::Fode => "fode",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown group {s:?}; expected one of specfun, fraccalc, xform, fvt, fode"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One quantitative comparison inside a criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let mark = if self.passed { "" } else { " FAILED" };
        write!(f, "{}={:.4e} {op} {:.3e}{mark}", self.name, self.value, self.limit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: u32,
    pub group: Group,
    pub title: String,
    pub checks: Vec<Check>,
    /// Values reported for context only.
    pub info: BTreeMap<String, f64>,
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// One line: id, verdict, title and every check.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut parts: Vec<String> = self.checks.iter().map(|c| c.to_string()).collect();
        if let Some(e) = &self.error {
            parts.push(format!("error: {e}"));
        }
        format!(
            "[{verdict}] {}. {} ({}, {:.1}s): {}",
            self.id,
            self.title,
            self.group,
            self.elapsed_ms as f64 / 1e3,
            parts.join("; ")
        )
    }

    pub fn to_record(&self) -> ReportRecord {
        let mut rec = ReportRecord::new(format!("verify/{}", self.id));
        rec.input("group", self.group.name()).input("title", self.title.clone());
        for c in &self.checks {
            rec.output_f64(&c.name, c.value);
            rec.tolerances.insert(c.name.clone(), c.limit);
        }
        for (k, v) in &self.info {
            rec.output_f64(k, *v);
        }
        if let Some(e) = &self.error {
            rec.output("error", e.clone());
        }
        rec.status = if self.passed() { Status::Pass } else { Status::Fail };
        rec.wall_time_ms = self.elapsed_ms;
        rec
    }
}

struct Ctx {
    tol_scale: f64,
    checks: Vec<Check>,
    info: BTreeMap<String, f64>,
}

impl Ctx {
    fn push(&mut self, name: &str, value: f64, bound: Bound, limit: f64) {
        let passed = match bound {
            Bound::AtMost => value <= limit,
            Bound::AtLeast => value >= limit,
        };
        self.checks.push(Check { name: name.into(), value, bound, limit, passed });
    }

    /// `value ≤ tol · tol_scale`.
    fn tol(&mut self, name: &str, value: f64, tol: f64) {
        self.push(name, value, Bound::AtMost, tol * self.tol_scale);
    }

    fn at_most(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, Bound::AtMost, limit);
    }

    fn at_least(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, Bound::AtLeast, limit);
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.push(name, if ok { 1.0 } else { 0.0 }, Bound::AtLeast, 1.0);
    }

    fn info(&mut self, name: &str, value: f64) {
        self.info.insert(name.into(), value);
    }
}

type Body = fn(&mut Ctx) -> Result<(), Box<dyn std::error::Error>>;

pub struct Criterion {
    pub id: u32,
    pub group: Group,
    pub title: &'static str,
    body: Body,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, group: Group::Xform, title: "t^2 sin t: decay of sF and of the order-2 profile", body: c1_tq_sin },
        Criterion { id: 2, group: Group::Fvt, title: "kernel identity and limits L/(alpha+1)", body: c2_kernel_identity },
        Criterion { id: 3, group: Group::Fvt, title: "periodic Cesaro mean and derivative-form limit", body: c3_periodic },
        Criterion { id: 4, group: Group::Fraccalc, title: "semigroup defect for sin, orders 0.3 and 0.7", body: c4_semigroup },
        Criterion { id: 5, group: Group::Fode, title: "ABM solver against Mittag-Leffler", body: c5_solver },
        Criterion { id: 6, group: Group::Fode, title: "rotation: classical orbit vs fractional residual", body: c6_rotation },
        Criterion { id: 7, group: Group::Fode, title: "certificate integral of cos and of a constant", body: c7_certificate },
        Criterion { id: 8, group: Group::Xform, title: "Pochhammer series for alpha = 0.5", body: c8_series },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub tol_scale: f64,
    /// Run only these groups; empty means all.
    pub only: Vec<Group>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { tol_scale: 1.0, only: Vec::new() }
    }
}

pub fn run_criterion(c: &Criterion, tol_scale: f64) -> Outcome {
    let started = Instant::now();
    let mut ctx = Ctx { tol_scale, checks: Vec::new(), info: BTreeMap::new() };
    let error = (c.body)(&mut ctx).err().map(|e| e.to_string());
    Outcome {
        id: c.id,
        group: c.group,
        title: c.title.to_string(),
        checks: ctx.checks,
        info: ctx.info,
        error,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Runs the selected criteria in order, calling `on_done` after each.
pub fn run_suite(opts: &SuiteOptions, mut on_done: impl FnMut(&Outcome)) -> Vec<Outcome> {
    criteria()
        .iter()
        .filter(|c| opts.only.is_empty() || opts.only.contains(&c.group))
        .map(|c| {
            let o = run_criterion(c, opts.tol_scale);
            on_done(&o);
            o
        })
        .collect()
}

fn elapsed_s(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

fn c1_tq_sin(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let started = Instant::now();
    let f = catalog_tq_sin(2.0, 1.0)?;
    let s = 1e-3;
    let sf = s * xform::transform_value(&f, ComplexFreq::real(s)?)?.norm();
    ctx.tol("abs_sF_at_1e-3", sf, 1e-2);
    let g: Vec<f64> = [100.0, 200.0, 400.0]
        .iter()
        .map(|&t| finval::profile_value(&f, 2.0, t))
        .collect::<Result<_, _>>()?;
    ctx.info("g_100", g[0]);
    ctx.info("g_200", g[1]);
    ctx.info("g_400", g[2]);
    // |g| must shrink from each probe to the next
    ctx.at_least("abs_g_100_minus_abs_g_200", g[0].abs() - g[1].abs(), 0.0);
    ctx.at_least("abs_g_200_minus_abs_g_400", g[1].abs() - g[2].abs(), 0.0);
    ctx.tol("abs_g_400", g[2].abs(), 2e-2);
    ctx.at_most("runtime_s", elapsed_s(started), 30.0);
    Ok(())
}

fn c2_kernel_identity(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let started = Instant::now();
    let cat = Catalog::standard()?;
    let s = 1e-2;
    let freq = ComplexFreq::real(s)?;
    let grid = TimeGrid::span(0.0, 1500.0, 0.05)?;
    let mut worst_identity = 0.0f64;
    let mut worst_g = 0.0f64;
    let mut worst_k = 0.0f64;
    for name in ["const1", "exp_decay", "two_plus_cos3t"] {
        let f = cat.get(name).ok_or("catalog entry missing")?;
        let tf = f.transform().ok_or("closed-form transform missing")?;
        let samples = SampledSignal::from_fn(grid, |t| f.eval(t))?;
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let k = s * xform::kernel_integral(&|z: Complex64| tf(z), alpha, freq)?.re;
            let profile = fraccalc::cesaro_profile(&samples, alpha)?;
            let time_side = s * xform::laplace_sampled_scalar(&profile, freq).re;
            worst_identity = worst_identity.max((k - time_side).abs());

            let rec = finval::cross_validate(f, alpha, &CrossValidateOptions::default());
            let gap = |key: &str| rec.get_f64(&format!("gap_{key}")).unwrap_or(f64::INFINITY);
            worst_g = worst_g.max(gap("G"));
            worst_k = worst_k.max(gap("K"));
        }
    }
    ctx.tol("max_identity_gap", worst_identity, 1e-3);
    ctx.tol("max_time_limit_gap", worst_g, 1e-2);
    ctx.tol("max_kernel_limit_gap", worst_k, 1e-2);
    ctx.at_most("runtime_s", elapsed_s(started), 120.0);
    Ok(())
}

fn c3_periodic(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let cat = Catalog::standard()?;
    let f = cat.get("two_plus_cos3t").ok_or("catalog entry missing")?;
    let ces = finval::cesaro_fvt(f, &finval::PERIODIC_T_PROBES, finval::DEFAULT_TOL)?;
    ctx.info("cesaro_mean", ces.estimate.value);
    ctx.tol("cesaro_gap", (ces.estimate.value - 2.0).abs(), 1e-3);
    let tf = f.transform().ok_or("closed-form transform missing")?;
    let cls = finval::classical_fvt(&|z: Complex64| tf(z), &finval::DEFAULT_S_SEQ, finval::DEFAULT_TOL)?;
    ctx.info("classical_limit", cls.value);
    ctx.tol("classical_gap", (cls.value - 2.0).abs(), 1e-3);
    let cos = cat.get("cos").ok_or("catalog entry missing")?;
    let d = finval::derivative_fvt(cos, &finval::DEFAULT_S_SEQ, finval::DEFAULT_TOL)?;
    ctx.info("derivative_limit", d.estimate.value);
    ctx.tol("derivative_gap", (d.estimate.value + 1.0).abs(), 1e-3);
    Ok(())
}

fn c4_semigroup(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let defect = |h: f64| -> Result<f64, Box<dyn std::error::Error>> {
        let g = TimeGrid::span(0.0, 10.0, h)?;
        Ok(fraccalc::semigroup_defect(&SampledSignal::from_fn(g, f64::sin)?, 0.3, 0.7)?)
    };
    let coarse = defect(1e-3)?;
    let fine = defect(5e-4)?;
    ctx.tol("defect_h_1e-3", coarse, 1e-3);
    ctx.at_least("halving_ratio", coarse / fine, 3.0);
    Ok(())
}

fn c5_solver(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let rhs = fodesim::rhs_registry("linear_decay", &BTreeMap::new())?;
    let mut max_errs = Vec::new();
    let mut end_errs = Vec::new();
    let hs = [4e-3, 2e-3, 1e-3];
    for &h in &hs {
        let p = FodeProblem::new(0.5, rhs.clone(), vec![1.0], 5.0, h)?;
        let tr = fodesim::solve(&p)?;
        let mut worst = 0.0f64;
        let mut last = 0.0;
        for k in 0..tr.states.len() {
            let t = tr.grid().t(k);
            let exact = specfun::mittag_leffler_real(0.5, -t.sqrt(), 1e-15)?;
            last = (tr.states.sample(k)[0] - exact).abs();
            worst = worst.max(last);
        }
        max_errs.push(worst);
        end_errs.push(last);
    }
    let order = |e: &[f64]| {
        let n = hs.len() as f64;
        let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
        let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        sxy / sxx
    };
    ctx.tol("max_error_h_1e-3", max_errs[2], 1e-3);
    ctx.at_least("max_norm_order", order(&max_errs), 1.3);
    ctx.info("endpoint_order", order(&end_errs));
    ctx.info("max_error_h_4e-3", max_errs[0]);
    ctx.info("max_error_h_2e-3", max_errs[1]);
    Ok(())
}

/// Horizon, window and step used for the rotation contrast.
pub const ROTATION_HORIZON: f64 = 30.0;
pub const ROTATION_WINDOW: f64 = 4.0;
pub const ROTATION_STEP: f64 = 0.01;

/// `n` evenly spaced candidates on `[lo, hi]`.
pub fn candidates(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn c6_rotation(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let started = Instant::now();
    let rhs = fodesim::rhs_registry("rotation", &BTreeMap::new())?;
    let cands = candidates(1.0, 20.0, 60);
    let x0 = [1.0, 0.0];
    let rk4 = fodesim::solve_classical_rk4(&rhs, &x0, ROTATION_HORIZON, ROTATION_STEP)?;
    let classical = fodesim::periodicity_residual(&rk4, &cands, ROTATION_WINDOW, None)?;
    let at_two_pi = fodesim::residual_at(&rk4, 2.0 * PI, classical.t_skip, ROTATION_WINDOW);
    let p = FodeProblem::new(0.8, rhs, x0.to_vec(), ROTATION_HORIZON, ROTATION_STEP)?;
    let frac_traj: Trajectory = fodesim::solve(&p)?;
    let frac = fodesim::periodicity_residual(&frac_traj, &cands, ROTATION_WINDOW, None)?;
    ctx.tol("classical_min_residual", classical.min_residual, 1e-3);
    ctx.tol("classical_residual_at_2pi", at_two_pi, 1e-3);
    ctx.at_least("fractional_min_residual", frac.min_residual, 0.05);
    ctx.at_least("contrast_ratio", frac.min_residual / classical.min_residual.max(at_two_pi), 10.0);
    ctx.info("classical_best_period", classical.best_period);
    ctx.info("fractional_best_period", frac.best_period);
    ctx.at_most("runtime_s", elapsed_s(started), 180.0);
    Ok(())
}

fn c7_certificate(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let g = TimeGrid::span(0.0, 7.0, 1e-3)?;
    let cos = Trajectory::from_signal(SampledSignal::from_fn(g, f64::cos)?);
    let c = fodesim::certificate_integral(&cos, 2.0 * PI, 0.5)?;
    ctx.info("cosine_certificate", c.components[0]);
    ctx.tol("cosine_gap", (c.components[0] - COSINE_CERTIFICATE).abs(), 1e-4);
    let flat = Trajectory::from_signal(SampledSignal::from_fn(g, |_| 1.0)?);
    let c = fodesim::certificate_integral(&flat, 2.0 * PI, 0.5)?;
    ctx.tol("constant_norm", c.norm, 1e-12);
    Ok(())
}

fn c8_series(ctx: &mut Ctx) -> Result<(), Box<dyn std::error::Error>> {
    let checkpoints: Vec<u64> = (0..=6).map(|k| 10u64.pow(k)).collect();
    let sums = xform::binomial_series_partial_sums(0.5, &checkpoints);
    let errs: Vec<f64> = sums.iter().map(|(_, v)| (v - 2.0 / 3.0).abs()).collect();
    let finite = sums.iter().all(|(_, v)| v.is_finite());
    ctx.flag("finite_partial_sums", finite);
    ctx.flag("monotone_error", errs.windows(2).all(|w| w[1] <= w[0]));
    ctx.tol("error_at_1e6", *errs.last().ok_or("no checkpoints")?, 1e-3);
    for ((n, _), e) in sums.iter().zip(&errs) {
        ctx.info(&format!("error_at_{n}"), *e);
    }
    Ok(())
}

/// `ReportRecord` rows for a finished suite run.
pub fn records(outcomes: &[Outcome]) -> Vec<ReportRecord> {
    outcomes.iter().map(Outcome::to_record).collect()
}
