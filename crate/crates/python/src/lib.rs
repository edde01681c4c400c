//! Python bindings: special functions, free Green functions, hydrogen wave
//! functions and the Coulomb Green function.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use poisson_green::coulomb::{self, CoulombParams as CoreParams, GreenMethod, QuadratureOptions};
use poisson_green::hydrogen::{self, BoundStateIndex, MomentumPoint};
use poisson_green::{harmonics, kernels, polynomials, Complex64, Error};

fn to_py(err: Error) -> PyErr {
    if err.is_numerical() {
        PyRuntimeError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

/// Truncated expansion with its tail bound.
#[pyclass(frozen, get_all, skip_from_py_object, module = "pygreen")]
#[derive(Clone)]
struct ExpansionResult {
    value: f64,
    order: usize,
    tail_bound: f64,
}

#[pymethods]
impl ExpansionResult {
    fn __repr__(&self) -> String {
        format!("ExpansionResult(value={:e}, order={}, tail_bound={:e})", self.value, self.order, self.tail_bound)
    }
}

impl From<kernels::ExpansionResult> for ExpansionResult {
    fn from(e: kernels::ExpansionResult) -> Self {
        ExpansionResult { value: e.value, order: e.order, tail_bound: e.tail_bound }
    }
}

/// Value of the Coulomb Green function with the method that produced it.
#[pyclass(frozen, get_all, skip_from_py_object, module = "pygreen")]
#[derive(Clone)]
struct GreenEvalReport {
    value: f64,
    method: String,
    terms_or_nodes: usize,
    est_error: f64,
}

#[pymethods]
impl GreenEvalReport {
    fn __repr__(&self) -> String {
        format!(
            "GreenEvalReport(value={:e}, method='{}', terms_or_nodes={}, est_error={:e})",
            self.value, self.method, self.terms_or_nodes, self.est_error
        )
    }
}

impl From<coulomb::GreenEvalReport> for GreenEvalReport {
    fn from(r: coulomb::GreenEvalReport) -> Self {
        GreenEvalReport { value: r.value, method: r.method.name().to_string(), terms_or_nodes: r.terms_or_nodes, est_error: r.est_error }
    }
}

/// Energy parameters: build from `energy` or from `nu`.
#[pyclass(frozen, skip_from_py_object, module = "pygreen")]
#[derive(Clone)]
struct CoulombParams {
    inner: CoreParams,
}

#[pymethods]
impl CoulombParams {
    #[new]
    #[pyo3(signature = (energy=None, *, nu=None, z=1, mass=1.0))]
    fn new(energy: Option<f64>, nu: Option<f64>, z: u32, mass: f64) -> PyResult<Self> {
        let inner = match (energy, nu) {
            (Some(e), None) => CoreParams::new(e, z, mass),
            (None, Some(n)) => CoreParams::from_nu(n, z, mass),
            _ => return Err(PyValueError::new_err("give exactly one of energy or nu")),
        }
        .map_err(to_py)?;
        Ok(CoulombParams { inner })
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy()
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu()
    }

    #[getter]
    fn x(&self) -> f64 {
        self.inner.x()
    }

    #[getter]
    fn z(&self) -> u32 {
        self.inner.z()
    }

    fn __repr__(&self) -> String {
        format!("CoulombParams(energy={}, nu={}, z={})", self.inner.energy(), self.inner.nu(), self.inner.z())
    }
}

#[pyfunction]
fn legendre_p(l: usize, x: f64) -> PyResult<f64> {
    polynomials::legendre_p(l, x).map_err(to_py)
}

#[pyfunction]
fn assoc_legendre_p(l: usize, m: usize, x: f64) -> PyResult<f64> {
    polynomials::assoc_legendre_p(l, m, x).map_err(to_py)
}

#[pyfunction]
fn gegenbauer_q(n: usize, x: f64) -> PyResult<f64> {
    polynomials::gegenbauer_q(n, x).map_err(to_py)
}

#[pyfunction]
fn assoc_gegenbauer_q(n: usize, l: usize, x: f64) -> PyResult<f64> {
    polynomials::assoc_gegenbauer_q(n, l, x).map_err(to_py)
}

#[pyfunction]
fn ylm(l: usize, m: i32, theta: f64, phi: f64) -> PyResult<Complex64> {
    harmonics::ylm(l, m, theta, phi).map_err(to_py)
}

#[pyfunction]
fn ynlm(n: usize, l: usize, m: i32, chi: f64, theta: f64, phi: f64) -> PyResult<Complex64> {
    harmonics::ynlm(n, l, m, chi, theta, phi).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (p, q, length=1.0))]
fn g2_closed(p: [f64; 2], q: [f64; 2], length: f64) -> PyResult<f64> {
    kernels::g2_closed(p, q, kernels::Scale2D::new(length).map_err(to_py)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (p, q, order, length=1.0))]
fn g2_expansion(p: [f64; 2], q: [f64; 2], order: usize, length: f64) -> PyResult<ExpansionResult> {
    let scale = kernels::Scale2D::new(length).map_err(to_py)?;
    kernels::g2_expansion(p, q, scale, order).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn g3_closed(p: [f64; 3], q: [f64; 3]) -> PyResult<f64> {
    kernels::g3_closed(p, q).map_err(to_py)
}

#[pyfunction]
fn g3_expansion(p: [f64; 3], q: [f64; 3], order: usize) -> PyResult<ExpansionResult> {
    kernels::g3_expansion(p, q, order).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn g4_closed(p: [f64; 4], q: [f64; 4]) -> PyResult<f64> {
    kernels::g4_closed(p, q).map_err(to_py)
}

#[pyfunction]
fn g4_expansion(p: [f64; 4], q: [f64; 4], order: usize) -> PyResult<ExpansionResult> {
    kernels::g4_expansion(p, q, order).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (center, eps, nodes=16))]
fn flux_check_2d(center: [f64; 2], eps: f64, nodes: usize) -> PyResult<f64> {
    kernels::flux_check_2d(center, eps, nodes).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, l, m, p, z=1))]
fn psi_momentum(n: u32, l: u32, m: i32, p: [f64; 3], z: u32) -> PyResult<Complex64> {
    let idx = BoundStateIndex::new(n, l, m).map_err(to_py)?;
    let point = MomentumPoint::new(p).map_err(to_py)?;
    hydrogen::psi_momentum(idx, &point, z).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, l, m, p, z=1))]
fn psi_via_ynlm(n: u32, l: u32, m: i32, p: [f64; 3], z: u32) -> PyResult<Complex64> {
    let idx = BoundStateIndex::new(n, l, m).map_err(to_py)?;
    let point = MomentumPoint::new(p).map_err(to_py)?;
    hydrogen::psi_via_ynlm(idx, &point, z).map_err(to_py)
}

#[pyfunction]
fn schwinger_bracket(rho: f64, p: [f64; 3], q: [f64; 3], x: f64) -> PyResult<f64> {
    coulomb::schwinger_bracket(rho, &p, &q, x).map_err(to_py)
}

/// `G(p, q)` with `method` either `"series"` or `"quadrature"`.
#[pyfunction]
#[pyo3(signature = (p, q, params, method="series", terms=coulomb::DEFAULT_SERIES_TERMS))]
fn coulomb_g(p: [f64; 3], q: [f64; 3], params: &CoulombParams, method: &str, terms: usize) -> PyResult<GreenEvalReport> {
    let report = match method {
        "series" => coulomb::coulomb_g_series(&p, &q, &params.inner, terms),
        "quadrature" => coulomb::coulomb_g_quadrature(&p, &q, &params.inner, QuadratureOptions::default()),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    report.map(Into::into).map_err(to_py)
}

/// `(lhs, rhs)`: extrapolated residue of `G` at `E_n` and the bound-state
/// projector at `(p, q)`.
#[pyfunction]
#[pyo3(signature = (n, p, q, z=1))]
fn residue_check(n: u32, p: [f64; 3], q: [f64; 3], z: u32) -> PyResult<(f64, f64)> {
    let r = coulomb::residue_check(n, &p, &q, z).map_err(to_py)?;
    Ok((r.lhs, r.rhs))
}

#[pymodule]
fn pygreen(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ExpansionResult>()?;
    m.add_class::<GreenEvalReport>()?;
    m.add_class::<CoulombParams>()?;
    m.add_function(wrap_pyfunction!(legendre_p, m)?)?;
    m.add_function(wrap_pyfunction!(assoc_legendre_p, m)?)?;
    m.add_function(wrap_pyfunction!(gegenbauer_q, m)?)?;
    m.add_function(wrap_pyfunction!(assoc_gegenbauer_q, m)?)?;
    m.add_function(wrap_pyfunction!(ylm, m)?)?;
    m.add_function(wrap_pyfunction!(ynlm, m)?)?;
    m.add_function(wrap_pyfunction!(g2_closed, m)?)?;
    m.add_function(wrap_pyfunction!(g2_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(g3_closed, m)?)?;
    m.add_function(wrap_pyfunction!(g3_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(g4_closed, m)?)?;
    m.add_function(wrap_pyfunction!(g4_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(flux_check_2d, m)?)?;
    m.add_function(wrap_pyfunction!(psi_momentum, m)?)?;
    m.add_function(wrap_pyfunction!(psi_via_ynlm, m)?)?;
    m.add_function(wrap_pyfunction!(schwinger_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(coulomb_g, m)?)?;
    m.add_function(wrap_pyfunction!(residue_check, m)?)?;
    m.add("GREEN_METHODS", (GreenMethod::RhoSeries.name(), GreenMethod::SubtractedQuadrature.name()))?;
    Ok(())
}
