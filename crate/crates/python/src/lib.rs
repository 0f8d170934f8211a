//! Python bindings. Matrices cross the boundary as lists of row lists and
//! reports as dicts; every library error surfaces as `ValueError`.

use nalgebra::DMatrix;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use steerlab::monogamy::{self, MonogamyDirection};
use steerlab::qss::{self, KeyQuadrature};
use steerlab::states::{self, OpticalNetworkParams, PureThreeModeParams, Quadrature};
use steerlab::steering;
use steerlab::{ModePartition, SteerError};

fn err(e: SteerError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py_json<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

fn params(a: f64, b: f64, c: f64) -> PyResult<PureThreeModeParams> {
    PureThreeModeParams::new(a, b, c).map_err(err)
}

/// Validated covariance matrix, vacuum-normalized (vacuum = identity),
/// quadratures ordered x1, p1, x2, p2, …
#[pyclass(name = "CovarianceMatrix", module = "steerlab", frozen)]
pub struct PyCovarianceMatrix {
    inner: steerlab::CovarianceMatrix,
}

#[pymethods]
impl PyCovarianceMatrix {
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        let dim = matrix.len();
        if matrix.iter().any(|r| r.len() != dim) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| matrix[i][j]);
        steerlab::CovarianceMatrix::new(m)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        steerlab::CovarianceMatrix::from_json(text)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.n_modes()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<f64>> {
        rows(self.inner.matrix())
    }

    fn symplectic_eigenvalues(&self) -> PyResult<Vec<f64>> {
        self.inner.symplectic_eigenvalues().map_err(err)
    }

    fn log_det(&self) -> PyResult<f64> {
        self.inner.log_det().map_err(err)
    }

    fn is_pure(&self) -> bool {
        self.inner.is_pure()
    }

    fn partial_trace(&self, kept: Vec<usize>) -> PyResult<Self> {
        steerlab::symplectic::partial_trace(&self.inner, &kept)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    fn schur_complement(&self, removed: Vec<usize>) -> PyResult<Vec<Vec<f64>>> {
        steerlab::symplectic::schur_complement(&self.inner, &removed)
            .map(|m| rows(&m))
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("CovarianceMatrix(n_modes={})", self.inner.n_modes())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

fn wrap(inner: steerlab::CovarianceMatrix) -> PyCovarianceMatrix {
    PyCovarianceMatrix { inner }
}

#[pyfunction]
fn vacuum(n_modes: usize) -> PyResult<PyCovarianceMatrix> {
    if n_modes == 0 {
        return Err(PyValueError::new_err("vacuum needs at least one mode"));
    }
    Ok(wrap(steerlab::CovarianceMatrix::vacuum(n_modes)))
}

#[pyfunction]
fn two_mode_squeezed(r: f64) -> PyResult<PyCovarianceMatrix> {
    states::two_mode_squeezed(r).map(wrap).map_err(err)
}

/// `squeezed` is "x" or "p", the quadrature whose variance is reduced.
#[pyfunction]
#[pyo3(signature = (r, squeezed = "p"))]
fn squeezed_vacuum(r: f64, squeezed: &str) -> PyResult<PyCovarianceMatrix> {
    let q = match squeezed {
        "x" | "X" => Quadrature::X,
        "p" | "P" => Quadrature::P,
        other => {
            return Err(PyValueError::new_err(format!(
                "quadrature must be x or p, got {other:?}"
            )))
        }
    };
    states::squeezed_vacuum(r, q).map(wrap).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (r, reflectivity, reflectivity_prime = 0.5))]
fn ghz_network(r: f64, reflectivity: f64, reflectivity_prime: f64) -> PyResult<PyCovarianceMatrix> {
    let p = OpticalNetworkParams::new(r, reflectivity, reflectivity_prime).map_err(err)?;
    states::ghz_network(&p).map(wrap).map_err(err)
}

#[pyfunction]
fn standard_form_pure(a: f64, b: f64, c: f64) -> PyResult<PyCovarianceMatrix> {
    states::standard_form_pure(&params(a, b, c)?)
        .map(wrap)
        .map_err(err)
}

#[pyfunction]
fn local_invariants(state: &PyCovarianceMatrix) -> PyResult<(f64, f64, f64)> {
    let [a, b, c] = states::local_invariants(&state.inner).map_err(err)?;
    Ok((a, b, c))
}

#[pyfunction]
fn squeezing_db(r: f64) -> f64 {
    states::squeezing_db(r)
}

#[pyfunction]
fn gaussian_steering(
    state: &PyCovarianceMatrix,
    steering: Vec<usize>,
    steered: Vec<usize>,
) -> PyResult<f64> {
    steering::gaussian_steering(&state.inner, &steering, &steered)
        .map(|g| g.value)
        .map_err(err)
}

/// Monogamy residual of single-mode party `focus`; `direction` is
/// "steered-by-rest" or "steers-rest".
#[pyfunction]
#[pyo3(signature = (state, focus, direction = "steered-by-rest"))]
fn monogamy_residual<'py>(
    py: Python<'py>,
    state: &PyCovarianceMatrix,
    focus: usize,
    direction: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let dir = match direction {
        "steered-by-rest" => MonogamyDirection::SteeredByRest,
        "steers-rest" => MonogamyDirection::SteersRest,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown direction {other:?}"
            )))
        }
    };
    let parts = ModePartition::single_modes(state.inner.n_modes());
    let rep = monogamy::monogamy_residual(&state.inner, &parts, focus, dir).map_err(err)?;
    to_py_json(py, &rep)
}

#[pyfunction]
fn rgs(state: &PyCovarianceMatrix) -> PyResult<f64> {
    monogamy::rgs(&state.inner).map(|v| v.value).map_err(err)
}

#[pyfunction]
fn rgs_closed_form(a: f64, b: f64, c: f64) -> PyResult<f64> {
    Ok(monogamy::rgs_closed_form(&params(a, b, c)?))
}

/// Full key-rate report as a dict; `key_quadrature` is "p", "x" or "best".
#[pyfunction]
#[pyo3(signature = (state, key_quadrature = "p"))]
fn key_rate_report<'py>(
    py: Python<'py>,
    state: &PyCovarianceMatrix,
    key_quadrature: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let key: KeyQuadrature = key_quadrature.parse().map_err(err)?;
    let rep = qss::key_rate_report(&state.inner, key).map_err(err)?;
    to_py_json(py, &rep)
}

#[pyfunction]
fn threshold_squeezing_ghz<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let t = qss::threshold_squeezing_ghz().map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("r", t.r)?;
    d.set_item("db", t.db)?;
    Ok(d)
}

#[pymodule(name = "steerlab")]
fn steerlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCovarianceMatrix>()?;
    m.add_function(wrap_pyfunction!(vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(two_mode_squeezed, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_vacuum, m)?)?;
    m.add_function(wrap_pyfunction!(ghz_network, m)?)?;
    m.add_function(wrap_pyfunction!(standard_form_pure, m)?)?;
    m.add_function(wrap_pyfunction!(local_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(squeezing_db, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_steering, m)?)?;
    m.add_function(wrap_pyfunction!(monogamy_residual, m)?)?;
    m.add_function(wrap_pyfunction!(rgs, m)?)?;
    m.add_function(wrap_pyfunction!(rgs_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(key_rate_report, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_squeezing_ghz, m)?)?;
    m.add(
        "KEY_POSITIVITY_RGS_THRESHOLD",
        qss::KEY_POSITIVITY_RGS_THRESHOLD,
    )?;
    m.add("SCHEMA", steerlab::SCHEMA)?;
    Ok(())
}
