//! Python bindings. Structured results come back as plain dicts decoded
//! from the same JSON the command-line tool prints.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use isoperiodic_core::classify;
use isoperiodic_core::g2flow::{self, Field, FlowState, Guards, QuadratureConfig};
use isoperiodic_core::hurwitz::{self, MonodromyDatum, PushDirection};
use isoperiodic_core::io;
use isoperiodic_core::periods::PeriodCharacter;
use isoperiodic_core::scalar::parse_quadreal;
use isoperiodic_core::symplattice::{self, SpMatrix, Sublattice};
use isoperiodic_core::QuadReal;

create_exception!(isoperiodic, IsoperiodicError, PyValueError);

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    IsoperiodicError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn quad(s: &str) -> PyResult<QuadReal> {
    parse_quadreal(s).map_err(err)
}

/// A period character on `H_1` of a genus-`g` surface.
#[pyclass(name = "Period", module = "isoperiodic", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPeriod {
    inner: PeriodCharacter,
}

#[pymethods]
impl PyPeriod {
    /// `values` is a list of `2g` pairs `(re, im)` of strings such as
    /// `"1/2 + 3*sqrt(2)"` or integers, in the order `a_1, b_1, ...`.
    #[new]
    #[pyo3(signature = (g, values, d = None))]
    fn new(py: Python<'_>, g: usize, values: Bound<'_, PyAny>, d: Option<u64>) -> PyResult<Self> {
        let mut obj = serde_json::Map::new();
        obj.insert("g".into(), g.into());
        if let Some(d) = d {
            obj.insert("D".into(), d.into());
        }
        let values: String = py.import("json")?.call_method1("dumps", (values,))?.extract()?;
        obj.insert("values".into(), serde_json::from_str(&values).map_err(err)?);
        Self::from_json(&serde_json::Value::Object(obj).to_string())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPeriod { inner: io::parse_period(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        io::period_to_json(&self.inner).to_string()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    /// Radicand of the coefficient field, `1` for the rationals.
    #[getter]
    fn field(&self) -> u64 {
        self.inner.field().radicand().unwrap_or(1)
    }

    fn values(&self) -> Vec<(String, String)> {
        self.inner.values().iter().map(|z| (z.re.to_string(), z.im.to_string())).collect()
    }

    fn evaluate(&self, v: Vec<i64>) -> PyResult<(String, String)> {
        let z = self.inner.evaluate(&v).map_err(err)?;
        Ok((z.re.to_string(), z.im.to_string()))
    }

    fn volume(&self) -> String {
        self.inner.volume().to_string()
    }

    fn volume_float(&self) -> f64 {
        self.inner.volume().to_f64()
    }

    fn is_haupt<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.is_haupt().map_err(err)?)
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify::classify_orbit_closure(&self.inner).map_err(err)?)
    }

    fn line_rank<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.line_rank().map_err(err)?)
    }

    fn is_pinchable(&self, a: Vec<i64>) -> PyResult<bool> {
        classify::is_pinchable(&self.inner, &a).map_err(err)
    }

    fn pinchable_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify::pinchable_report(&self.inner).map_err(err)?)
    }

    fn boundary_membership(&self, gens: Vec<Vec<i64>>) -> PyResult<bool> {
        let v = Sublattice::new(self.inner.genus(), gens).map_err(err)?;
        classify::boundary_membership(&self.inner, &v).map_err(err)
    }

    fn boundary_scan<'py>(&self, py: Python<'py>, bound: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify::boundary_scan(&self.inner, bound).map_err(err)?)
    }

    #[pyo3(signature = (a, eps1, eps2, budget = classify::DEFAULT_BUDGET))]
    fn find_admissible_rank2<'py>(
        &self,
        py: Python<'py>,
        a: Vec<i64>,
        eps1: &str,
        eps2: &str,
        budget: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (e1, e2) = (quad(eps1)?, quad(eps2)?);
        let w = classify::find_admissible_rank2(&self.inner, &a, &e1, &e2, budget).map_err(err)?;
        let out = to_py(py, &w)?;
        out.set_item("verified", w.verify(&self.inner, &a, &e1, &e2))?;
        Ok(out)
    }

    #[pyo3(signature = (bound = classify::DEFAULT_BOUND, budget = classify::DEFAULT_BUDGET))]
    fn admissible_split<'py>(&self, py: Python<'py>, bound: i64, budget: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify::admissible_split(&self.inner, bound, budget).map_err(err)?)
    }

    /// `p o gamma` for a symplectic integer matrix given by rows.
    fn apply_sp(&self, gamma: Vec<Vec<i64>>) -> PyResult<Self> {
        let m = SpMatrix::new(gamma).map_err(err)?;
        Ok(PyPeriod { inner: self.inner.apply_sp(&m).map_err(err)? })
    }

    fn orbit_walk(&self, steps: usize, seed: u64) -> PyResult<Vec<(f64, f64, f64, f64)>> {
        let w = classify::orbit_walk(&self.inner, steps, seed).map_err(err)?;
        Ok(w.rows.iter().map(|r| (r.re1, r.im1, r.re2, r.im2)).collect())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Period({})", self.to_json())
    }
}

/// Monodromy `(sigma_h, sigma_v, tau_1, ..., tau_n)` of a torus cover, with
/// 1-based permutations and transpositions.
#[pyclass(name = "Monodromy", module = "isoperiodic", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMonodromy {
    inner: MonodromyDatum,
}

#[pymethods]
impl PyMonodromy {
    #[new]
    fn new(d: usize, sigma_h: Vec<usize>, sigma_v: Vec<usize>, taus: Vec<(usize, usize)>) -> PyResult<Self> {
        let text = serde_json::json!({"d": d, "sigma_h": sigma_h, "sigma_v": sigma_v, "taus": taus}).to_string();
        Self::from_json(&text)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMonodromy { inner: io::parse_monodromy(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn genus(&self) -> PyResult<usize> {
        hurwitz::cover_genus(&self.inner).map_err(err)
    }

    fn hurwitz_move(&self, i: usize) -> PyResult<Self> {
        Ok(PyMonodromy { inner: self.inner.hurwitz_move(i).map_err(err)? })
    }

    fn hurwitz_move_inv(&self, i: usize) -> PyResult<Self> {
        Ok(PyMonodromy { inner: self.inner.hurwitz_move_inv(i).map_err(err)? })
    }

    /// `direction` is `"A"` or `"B"`.
    fn point_push(&self, i: usize, direction: &str) -> PyResult<Self> {
        let dir = match direction {
            "A" | "a" => PushDirection::A,
            "B" | "b" => PushDirection::B,
            other => return Err(err(format!("unknown direction {other:?}"))),
        };
        Ok(PyMonodromy { inner: self.inner.point_push(i, dir).map_err(err)? })
    }

    fn is_valid(&self) -> bool {
        self.inner.validate().is_ok()
    }

    /// Period pair `(alpha, beta)` in a symplectic basis of the cover.
    fn cover_period<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let cc = hurwitz::build_cover(&self.inner).map_err(err)?;
        to_py(py, &hurwitz::cover_period(&cc).map_err(err)?)
    }

    fn signature<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let cp = hurwitz::cover_period(&hurwitz::build_cover(&self.inner).map_err(err)?).map_err(err)?;
        to_py(py, &hurwitz::pair_signature(&cp.alpha, &cp.beta).map_err(err)?)
    }

    /// The character `alpha + i beta` of the cover.
    fn period(&self) -> PyResult<PyPeriod> {
        let cp = hurwitz::cover_period(&hurwitz::build_cover(&self.inner).map_err(err)?).map_err(err)?;
        let pairs: Vec<(i64, i64)> = cp.alpha.iter().zip(&cp.beta).map(|(&x, &y)| (x, y)).collect();
        Ok(PyPeriod { inner: PeriodCharacter::from_ints(cp.genus, &pairs).map_err(err)? })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> PyResult<String> {
        Ok(format!("Monodromy({})", self.to_json()?))
    }
}

#[pyfunction]
#[pyo3(signature = (d, g, torus_moves = false))]
fn enumerate_orbits<'py>(py: Python<'py>, d: usize, g: usize, torus_moves: bool) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &hurwitz::enumerate_orbits(d, g, torus_moves).map_err(err)?)
}

#[pyfunction]
fn omega(x: Vec<i64>, y: Vec<i64>) -> PyResult<i64> {
    symplattice::omega(&x, &y).map_err(err)
}

#[pyfunction]
fn symplectic_complete(a: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
    symplattice::symplectic_complete(&a).map_err(err)
}

#[pyfunction]
fn primitive_chain(w1: Vec<i64>, w4: Vec<i64>) -> PyResult<(Vec<i64>, Vec<i64>)> {
    symplattice::primitive_chain(&w1, &w4).map_err(err)
}

#[pyfunction]
fn transvection(a: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
    Ok(symplattice::transvection(&a).map_err(err)?.entries().to_vec())
}

/// Integrates the genus-2 flow from `state` (a dict with keys `x`, `a`,
/// `b` holding complex numbers; the demo state when omitted) and reports
/// the period drift.
#[pyfunction]
#[pyo3(signature = (t = 0.05, h = 1e-3, every = 10, mutant = false, state = None))]
fn g2flow_drift<'py>(
    py: Python<'py>,
    t: f64,
    h: f64,
    every: usize,
    mutant: bool,
    state: Option<Bound<'py, PyDict>>,
) -> PyResult<Bound<'py, PyAny>> {
    let s0 = match state {
        None => FlowState::demo(),
        Some(d) => {
            let get = |k: &str| -> PyResult<num_complex::Complex64> {
                let v = d.get_item(k)?.ok_or_else(|| err(format!("missing key {k:?}")))?;
                let c: num_complex::Complex64 = v.extract()?;
                Ok(c)
            };
            let xs: Vec<num_complex::Complex64> =
                d.get_item("x")?.ok_or_else(|| err("missing key \"x\""))?.extract()?;
            let x: [num_complex::Complex64; 3] = xs.try_into().map_err(|_| err("x must have three entries"))?;
            FlowState { x, a: get("a")?, b: get("b")? }
        }
    };
    let field = if mutant { Field::FlippedA } else { Field::Isoperiodic };
    let rep = g2flow::drift_report(field, &s0, t, h, every, &Guards::default(), &QuadratureConfig::default()).map_err(err)?;
    to_py(py, &rep)
}

#[pymodule]
#[pyo3(name = "isoperiodic")]
fn isoperiodic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPeriod>()?;
    m.add_class::<PyMonodromy>()?;
    m.add_function(wrap_pyfunction!(enumerate_orbits, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(symplectic_complete, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_chain, m)?)?;
    m.add_function(wrap_pyfunction!(transvection, m)?)?;
    m.add_function(wrap_pyfunction!(g2flow_drift, m)?)?;
    m.add("IsoperiodicError", m.py().get_type::<IsoperiodicError>())?;
    Ok(())
}
