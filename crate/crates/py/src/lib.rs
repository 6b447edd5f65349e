//! Python bindings: a `Curve` class wrapping `ExpPolyCurve` plus free
//! functions for level sets, coefficient recovery, and the verification suite.
//!
//! Coefficients cross the boundary as nested lists of (re, im) tuples in
//! ascending powers, mirroring the CLI's JSON spec format.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use toruslab::error::Error;
use toruslab::level_sets;
use toruslab::recovery;
use toruslab::verify;
use toruslab::{asymptotics, fs, ExpPolyCurve, Polynomial};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::ConstantCurve => PyValueError::new_err(e.to_string()),
        Error::Numerical { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

fn build_poly(coeffs: &[(f64, f64)]) -> PyResult<Polynomial> {
    Polynomial::from_pairs(coeffs).map_err(to_py_err)
}

fn build_curve(polynomials: Vec<Vec<(f64, f64)>>) -> PyResult<ExpPolyCurve> {
    let mut exponents = Vec::with_capacity(polynomials.len());
    for coeffs in &polynomials {
        if coeffs.is_empty() {
            return Err(PyValueError::new_err("each polynomial needs coefficients"));
        }
        exponents.push(build_poly(coeffs)?);
    }
    ExpPolyCurve::new(exponents).map_err(to_py_err)
}

/// An entire holomorphic curve [1 : e^{g_1} : ... : e^{g_n}] given by its
/// exponent polynomials (ascending (re, im) coefficient tuples).
#[pyclass]
struct Curve {
    inner: ExpPolyCurve,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(polynomials: Vec<Vec<(f64, f64)>>) -> PyResult<Self> {
        Ok(Curve {
            inner: build_curve(polynomials)?,
        })
    }

    /// Number of exponential components n.
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// The integer m with m + 1 = max deg g_i (m = -1 for constant curves).
    #[getter]
    fn m(&self) -> i64 {
        self.inner.growth_degree()
    }

    #[getter]
    fn is_constant(&self) -> bool {
        self.inner.is_constant()
    }

    /// Fubini-Study derivative density |df|^2 at z = re + i im.
    fn fs_density(&self, re: f64, im: f64) -> PyResult<f64> {
        fs::fs_density(&self.inner, Complex64::new(re, im)).map_err(to_py_err)
    }

    /// log |df|^2 at z (finite wherever the density merely underflows).
    fn log_fs_density(&self, re: f64, im: f64) -> f64 {
        fs::log_fs_density(&self.inner, Complex64::new(re, im))
    }

    /// max_{|z|=r} |df|.
    #[pyo3(signature = (r, n_angles=4096))]
    fn circle_max_norm(&self, r: f64, n_angles: usize) -> PyResult<f64> {
        asymptotics::circle_max_norm(&self.inner, r, n_angles).map_err(to_py_err)
    }

    /// Growth-exponent estimate (converges to m); returns the fitted slope.
    #[pyo3(signature = (r_min=1.0, r_max=1e6, points_per_decade=13))]
    fn growth_exponent(&self, r_min: f64, r_max: f64, points_per_decade: usize) -> PyResult<f64> {
        asymptotics::growth_exponent(&self.inner, r_min, r_max, points_per_decade)
            .map(|est| est.slope)
            .map_err(to_py_err)
    }

    /// Shimizu-Ahlfors characteristic T(r, f) by Jensen's formula.
    #[pyo3(signature = (r, n_angles=256))]
    fn characteristic(&self, r: f64, n_angles: usize) -> PyResult<f64> {
        asymptotics::characteristic_jensen(&self.inner, r, n_angles).map_err(to_py_err)
    }

    /// Order estimate (converges to m + 1); returns the fitted slope.
    #[pyo3(signature = (r_max=1e4))]
    fn order_estimate(&self, r_max: f64) -> PyResult<f64> {
        asymptotics::order_estimate(&self.inner, r_max)
            .map(|est| est.slope)
            .map_err(to_py_err)
    }

    /// End-to-end degree/growth consistency check; returns
    /// (pass, m, m_hat, component_degrees).
    #[pyo3(signature = (r_max=1e5))]
    fn theorem1(&self, r_max: f64) -> PyResult<(bool, i64, i64, Vec<usize>)> {
        let rep = recovery::theorem1_verify(&self.inner, r_max).map_err(to_py_err)?;
        Ok((rep.pass, rep.m, rep.m_hat, rep.component_degrees))
    }

    fn __repr__(&self) -> String {
        format!("Curve(n={}, m={})", self.inner.n(), self.inner.growth_degree())
    }
}

/// Lebesgue measure of { theta : |Re g(r e^{i theta})| <= r^delta }.
#[pyfunction]
#[pyo3(signature = (coeffs, r, delta=1.0))]
fn level_set_measure(coeffs: Vec<(f64, f64)>, r: f64, delta: f64) -> PyResult<f64> {
    let g = build_poly(&coeffs)?;
    level_sets::level_set_measure(&g, r, delta, 4096).map_err(to_py_err)
}

/// Recover polynomial coefficients from two-circle samples of Re g.
/// Returns (coefficients as (re, im) tuples, detected_degree).
#[pyfunction]
#[pyo3(signature = (coeffs, r1=2.0, r2=5.0, k_max=16, tol=1e-8))]
fn recover_coefficients(
    coeffs: Vec<(f64, f64)>,
    r1: f64,
    r2: f64,
    k_max: usize,
    tol: f64,
) -> PyResult<(Vec<(f64, f64)>, usize)> {
    let g = build_poly(&coeffs)?;
    let s1 = recovery::poly_circle_samples(&g, r1, 4096).map_err(to_py_err)?;
    let s2 = recovery::poly_circle_samples(&g, r2, 4096).map_err(to_py_err)?;
    let rec = recovery::recover_polynomial(&s1, &s2, k_max, tol).map_err(to_py_err)?;
    Ok((rec.coefficients.clone(), rec.degree))
}

/// Run the verification suite; returns a list of
/// (id, name, passed, detail) tuples.
#[pyfunction]
#[pyo3(signature = (seed=verify::DEFAULT_SEED, quick=true, only=None))]
fn run_verification(
    seed: u64,
    quick: bool,
    only: Option<Vec<u32>>,
) -> Vec<(u32, String, bool, String)> {
    let cfg = verify::VerifyConfig {
        seed,
        quick,
        corrupt_bound: false,
        only,
    };
    verify::run_verification(&cfg)
        .into_iter()
        .map(|c| (c.id, c.name.to_string(), c.passed, c.detail))
        .collect()
}

#[pymodule]
fn toruslab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_function(wrap_pyfunction!(level_set_measure, m)?)?;
    m.add_function(wrap_pyfunction!(recover_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
