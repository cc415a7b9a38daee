//! Python bindings: special functions, fractional operators on sampled
//! signals, the transform catalog, final-value estimators, the FODE solver
//! and the acceptance suite.

use std::collections::BTreeMap;

use fracfvt_core::acceptance::{self, Group, SuiteOptions};
use fracfvt_core::finval::{self, CrossValidateOptions};
use fracfvt_core::fodesim::{self, FodeProblem as CoreProblem, Trajectory as CoreTrajectory};
use fracfvt_core::fraccalc::{self, FracOrder, SampledSignal, TimeGrid};
use fracfvt_core::specfun;
use fracfvt_core::xform::{self, catalog_tq_sin, Catalog, CatalogFunction as CoreFunction, ComplexFreq};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py_json<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn signal(values: Vec<f64>, h: f64) -> PyResult<SampledSignal> {
    let grid = TimeGrid::new(0.0, h, values.len()).map_err(err)?;
    SampledSignal::scalar(grid, values).map_err(err)
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    specfun::gamma(x).map_err(err)
}

#[pyfunction]
fn beta(a: f64, b: f64) -> PyResult<f64> {
    specfun::beta(a, b).map_err(err)
}

#[pyfunction]
fn pochhammer(x: f64, n: u64) -> f64 {
    specfun::pochhammer(x, n)
}

#[pyfunction]
fn gamma_ratio_decay(alpha: f64, n: u64) -> f64 {
    specfun::gamma_ratio_decay(alpha, n)
}

#[pyfunction]
#[pyo3(signature = (alpha, z, tol = 1e-15))]
fn mittag_leffler(alpha: f64, z: Complex64, tol: f64) -> PyResult<Complex64> {
    let p = specfun::MLParams::new(alpha, z, tol).map_err(err)?;
    specfun::mittag_leffler(&p).map_err(err)
}

/// Riemann–Liouville integral of samples on `t_k = k h`.
#[pyfunction]
fn rl_integral(values: Vec<f64>, h: f64, alpha: f64) -> PyResult<Vec<f64>> {
    let order = FracOrder::new(alpha).map_err(err)?;
    Ok(fraccalc::rl_integral(&signal(values, h)?, order).map_err(err)?.values().to_vec())
}

#[pyfunction]
fn caputo_derivative(values: Vec<f64>, h: f64, alpha: f64) -> PyResult<Vec<f64>> {
    let order = FracOrder::new(alpha).map_err(err)?;
    Ok(fraccalc::caputo_derivative(&signal(values, h)?, order).map_err(err)?.values().to_vec())
}

#[pyfunction]
fn cesaro_profile(values: Vec<f64>, h: f64, alpha: f64) -> PyResult<Vec<f64>> {
    Ok(fraccalc::cesaro_profile(&signal(values, h)?, alpha).map_err(err)?.values().to_vec())
}

#[pyfunction]
fn semigroup_defect(values: Vec<f64>, h: f64, alpha: f64, beta: f64) -> PyResult<f64> {
    fraccalc::semigroup_defect(&signal(values, h)?, alpha, beta).map_err(err)
}

/// A catalog function with its closed-form transform, when known.
#[pyclass(name = "CatalogFunction", frozen)]
struct PyCatalogFunction {
    inner: CoreFunction,
}

#[pymethods]
impl PyCatalogFunction {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn exp_order_c(&self) -> f64 {
        self.inner.exp_order_c
    }

    #[getter]
    fn period(&self) -> Option<f64> {
        self.inner.period
    }

    #[getter]
    fn known_limit(&self) -> Option<f64> {
        self.inner.known_sf_limit
    }

    fn __call__(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }

    /// `F(s)`: closed form when available, numeric Laplace otherwise.
    fn transform(&self, s: Complex64) -> PyResult<Complex64> {
        xform::transform_value(&self.inner, ComplexFreq::new(s).map_err(err)?).map_err(err)
    }

    fn laplace_numeric(&self, s: Complex64) -> PyResult<Complex64> {
        xform::laplace_numeric(&self.inner, ComplexFreq::new(s).map_err(err)?).map_err(err)
    }

    /// `∫₁^∞ F(su)/u (1 − 1/u)^α du`.
    fn kernel_integral(&self, alpha: f64, s: Complex64) -> PyResult<Complex64> {
        let tf = self.inner.transform().ok_or_else(|| err("no closed-form transform"))?;
        xform::kernel_integral(&|z| tf(z), alpha, ComplexFreq::new(s).map_err(err)?).map_err(err)
    }

    /// The generalized Cesàro profile `g_α(t)` by quadrature.
    fn profile(&self, alpha: f64, t: f64) -> PyResult<f64> {
        finval::profile_value(&self.inner, alpha, t).map_err(err)
    }

    /// Cross-validation record (classical, Cesàro and kernel limits).
    #[pyo3(signature = (alpha, tol = 1e-2))]
    fn cross_validate<'py>(&self, py: Python<'py>, alpha: f64, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let opts = CrossValidateOptions { tol, ..Default::default() };
        to_py_json(py, &finval::cross_validate(&self.inner, alpha, &opts))
    }

    fn __repr__(&self) -> String {
        format!("CatalogFunction({:?})", self.inner.name)
    }
}

#[pyfunction]
fn catalog_names() -> PyResult<Vec<String>> {
    Ok(Catalog::standard().map_err(err)?.names())
}

/// A standard catalog entry by name.
#[pyfunction]
fn catalog(name: &str) -> PyResult<PyCatalogFunction> {
    let cat = Catalog::standard().map_err(err)?;
    let inner = cat
        .get(name)
        .cloned()
        .ok_or_else(|| err(format!("unknown function {name:?}; valid names: {}", cat.names().join(", "))))?;
    Ok(PyCatalogFunction { inner })
}

#[pyfunction]
fn tq_sin(q: f64, omega: f64) -> PyResult<PyCatalogFunction> {
    Ok(PyCatalogFunction { inner: catalog_tq_sin(q, omega).map_err(err)? })
}

#[pyfunction]
fn constant(c: f64) -> PyCatalogFunction {
    PyCatalogFunction { inner: xform::catalog_constant(c) }
}

/// `lim sF(s)` from a schedule of positive real `s` values.
#[pyfunction]
#[pyo3(signature = (transform, s_seq = None, tol = 1e-3))]
fn classical_fvt(transform: &PyCatalogFunction, s_seq: Option<Vec<f64>>, tol: f64) -> PyResult<f64> {
    let f = transform.inner.clone();
    let eval = move |s: Complex64| {
        ComplexFreq::new(s)
            .and_then(|s| xform::transform_value(&f, s))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let s_seq = s_seq.unwrap_or_else(|| finval::DEFAULT_S_SEQ.to_vec());
    Ok(finval::classical_fvt(&eval, &s_seq, tol).map_err(err)?.value)
}

#[pyclass(name = "Trajectory", frozen)]
struct PyTrajectory {
    inner: CoreTrajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.grid().times().collect()
    }

    /// States as a list of per-step vectors.
    #[getter]
    fn states(&self) -> Vec<Vec<f64>> {
        (0..self.inner.states.len()).map(|k| self.inner.states.sample(k).to_vec()).collect()
    }

    fn state_at(&self, t: f64) -> Vec<f64> {
        self.inner.state_at(t)
    }

    /// Scan of `max ‖x(t+T) − x(t)‖` over candidate periods.
    #[pyo3(signature = (candidates, window, t_skip = None))]
    fn periodicity_residual<'py>(
        &self,
        py: Python<'py>,
        candidates: Vec<f64>,
        window: f64,
        t_skip: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let scan = fodesim::periodicity_residual(&self.inner, &candidates, window, t_skip).map_err(err)?;
        to_py_json(py, &scan)
    }

    /// `∫₀^T (T−τ)^{1−α} x'(τ) dτ` per component.
    fn certificate(&self, period: f64, alpha: f64) -> PyResult<Vec<f64>> {
        Ok(fodesim::certificate_integral(&self.inner, period, alpha).map_err(err)?.components)
    }
}

#[pyclass(name = "FodeProblem", frozen)]
struct PyFodeProblem {
    inner: CoreProblem,
}

#[pymethods]
impl PyFodeProblem {
    #[new]
    #[pyo3(signature = (rhs, alpha, x0, horizon, h, params = None))]
    fn new(
        rhs: &str,
        alpha: f64,
        x0: Vec<f64>,
        horizon: f64,
        h: f64,
        params: Option<BTreeMap<String, f64>>,
    ) -> PyResult<Self> {
        let rhs = fodesim::rhs_registry(rhs, &params.unwrap_or_default()).map_err(err)?;
        Ok(PyFodeProblem { inner: CoreProblem::new(alpha, rhs, x0, horizon, h).map_err(err)? })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    fn solve(&self, py: Python<'_>) -> PyResult<PyTrajectory> {
        let p = self.inner.clone();
        let inner = py.detach(move || fodesim::solve(&p)).map_err(err)?;
        Ok(PyTrajectory { inner })
    }

    /// Classical (`α = 1`) RK4 reference on the same grid.
    fn solve_classical(&self) -> PyResult<PyTrajectory> {
        let p = &self.inner;
        let inner = fodesim::solve_classical_rk4(p.rhs(), p.x0(), p.horizon(), p.h()).map_err(err)?;
        Ok(PyTrajectory { inner })
    }
}

/// Runs the acceptance suite; returns one dict per criterion.
#[pyfunction]
#[pyo3(signature = (only = None, tol_scale = 1.0))]
fn verify<'py>(py: Python<'py>, only: Option<Vec<String>>, tol_scale: f64) -> PyResult<Bound<'py, PyAny>> {
    let only = only
        .unwrap_or_default()
        .iter()
        .map(|g| g.parse::<Group>().map_err(err))
        .collect::<PyResult<Vec<_>>>()?;
    let opts = SuiteOptions { tol_scale, only };
    let outcomes = py.detach(move || acceptance::run_suite(&opts, |_| {}));
    to_py_json(py, &acceptance::records(&outcomes))
}

#[pymodule]
fn fracfvt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_ratio_decay, m)?)?;
    m.add_function(wrap_pyfunction!(mittag_leffler, m)?)?;
    m.add_function(wrap_pyfunction!(rl_integral, m)?)?;
    m.add_function(wrap_pyfunction!(caputo_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro_profile, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_defect, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(tq_sin, m)?)?;
    m.add_function(wrap_pyfunction!(constant, m)?)?;
    m.add_function(wrap_pyfunction!(classical_fvt, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<PyCatalogFunction>()?;
    m.add_class::<PyFodeProblem>()?;
    m.add_class::<PyTrajectory>()?;
    Ok(())
}
