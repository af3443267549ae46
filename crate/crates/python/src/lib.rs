//! Python module `pylegendrian`.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use legendrian::curves::{self, CurveSpec};
use legendrian::distribution;
use legendrian::energy::{self, EnergyReport};
use legendrian::heisenberg::{self, HPoint};
use legendrian::minimize::{self, MinimizeOptions};
use legendrian::mobius::{Word, WordBounds};
use legendrian::{Complex64, Error};

fn err(e: Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (_, Some(f)) => f.into_pyobject(py)?.into_any(),
            _ => py.None().into_bound(py),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn dict<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn point(p: (f64, f64, f64)) -> PyResult<HPoint> {
    HPoint::try_new(p.0, p.1, p.2).map_err(err)
}

/// A sampled Legendrian knot.
#[pyclass(name = "Knot", module = "pylegendrian", frozen)]
struct PyKnot {
    inner: curves::LegendrianKnot,
}

impl PyKnot {
    fn report(&self, method: &str) -> PyResult<EnergyReport> {
        let k = &self.inner;
        match method {
            "subtraction" => energy::energy_subtraction(k).map_err(err),
            "cosine" => energy::energy_cosine(k).map_err(err),
            "hadamard" => energy::energy_hadamard(k, &energy::default_eps_ladder(k).map_err(err)?).map_err(err),
            other => Err(PyValueError::new_err(format!("unknown energy method {other:?}"))),
        }
    }

    fn split_radius(&self, eps0: Option<f64>) -> PyResult<f64> {
        match eps0 {
            Some(e) => Ok(e),
            None => Ok(0.5 * self.inner.chord_window().map_err(err)?.t_max),
        }
    }
}

#[pymethods]
impl PyKnot {
    /// Builds a knot from a JSON curve spec.
    #[staticmethod]
    #[pyo3(signature = (spec, samples = 1024))]
    fn from_spec(spec: &str, samples: usize) -> PyResult<Self> {
        let spec = CurveSpec::from_json(spec).map_err(err)?;
        Ok(PyKnot { inner: spec.build(samples).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (samples = 1024))]
    fn gerono(samples: usize) -> PyResult<Self> {
        Ok(PyKnot { inner: curves::gerono_knot(samples).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (p0, direction, samples = 1024))]
    fn finite_r_circle(p0: (f64, f64, f64), direction: (f64, f64), samples: usize) -> PyResult<Self> {
        let k = curves::finite_r_circle(point(p0)?, direction.0, direction.1, samples).map_err(err)?;
        Ok(PyKnot { inner: k })
    }

    #[staticmethod]
    #[pyo3(signature = (sigma, samples = 2048))]
    fn pinch(sigma: f64, samples: usize) -> PyResult<Self> {
        Ok(PyKnot { inner: curves::pinch_knot(sigma, samples).map_err(err)? })
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.length()
    }

    #[getter]
    fn closed(&self) -> bool {
        self.inner.is_closed()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Knot({}, samples={}, length={:.6})", self.inner.provenance(), self.inner.len(), self.inner.length())
    }

    /// Sample points as `(x, y, u)` tuples.
    fn points(&self) -> Vec<(f64, f64, f64)> {
        self.inner.samples().iter().map(|s| (s.point.x, s.point.y, s.point.u)).collect()
    }

    fn embeddedness_margin(&self) -> f64 {
        self.inner.embeddedness_margin()
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    /// Energy by `method` in {"subtraction", "cosine", "hadamard", "beta"}.
    #[pyo3(signature = (method = "subtraction", eps0 = None))]
    fn energy(&self, method: &str, eps0: Option<f64>) -> PyResult<f64> {
        if method == "beta" {
            let z = Complex64::new(-2.0, 0.0);
            return Ok(energy::beta_continued(&self.inner, z, self.split_radius(eps0)?).map_err(err)?.value.re);
        }
        Ok(self.report(method)?.value)
    }

    #[pyo3(signature = (method = "subtraction"))]
    fn energy_report<'py>(&self, py: Python<'py>, method: &str) -> PyResult<Bound<'py, PyAny>> {
        dict(py, &self.report(method)?)
    }

    /// `B_K(ζ)`; the direct sum for `Re ζ > -1` unless `eps0` is given.
    #[pyo3(signature = (zeta, eps0 = None))]
    fn beta(&self, zeta: Complex64, eps0: Option<f64>) -> PyResult<Complex64> {
        let profile = if eps0.is_none() && zeta.re > -1.0 {
            energy::beta_direct(&self.inner, zeta)
        } else {
            energy::beta_continued(&self.inner, zeta, self.split_radius(eps0)?)
        };
        Ok(profile.map_err(err)?.value)
    }

    fn potential(&self, s: f64) -> PyResult<f64> {
        energy::potential(&self.inner, s).map_err(err)
    }

    fn theta(&self, s: f64, s2: f64) -> PyResult<f64> {
        energy::theta_at(&self.inner, s, s2).map_err(err)
    }

    fn psi(&self, t: f64) -> PyResult<f64> {
        distribution::psi(&self.inner, t).map_err(err)
    }

    #[pyo3(signature = (t_max = None, n_points = 24))]
    fn psi_fit<'py>(&self, py: Python<'py>, t_max: Option<f64>, n_points: usize) -> PyResult<Bound<'py, PyAny>> {
        let t = match t_max {
            Some(t) => t,
            None => self.inner.chord_window().map_err(err)?.t_max,
        };
        dict(py, &distribution::psi_fit(&self.inner, t, n_points).map_err(err)?)
    }

    fn residues<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        dict(py, &distribution::residues(&self.inner).map_err(err)?)
    }

    fn moments<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        dict(py, &distribution::curvature_moments(&self.inner))
    }

    /// Energy against the energies of `trials` random Moebius images.
    #[pyo3(signature = (seed = 0, trials = 10, word_length = 4))]
    fn invariance<'py>(&self, py: Python<'py>, seed: u64, trials: usize, word_length: usize) -> PyResult<Bound<'py, PyAny>> {
        let (rows, summary) = energy::invariance_trials(&self.inner, seed, trials, word_length).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("rows", dict(py, &rows)?)?;
        out.set_item("summary", dict(py, &summary)?)?;
        Ok(out.into_any())
    }

    /// Image under a random word of `length` generators drawn from `seed`.
    #[pyo3(signature = (seed, length = 4))]
    fn mobius_image(&self, seed: u64, length: usize) -> PyResult<PyKnot> {
        let m = Word::random(seed, length, WordBounds::default()).and_then(|w| w.matrix()).map_err(err)?;
        Ok(PyKnot { inner: curves::mobius_image(&self.inner, &m).map_err(err)?.knot })
    }
}

#[pyfunction]
fn koranyi_dist(p: (f64, f64, f64), q: (f64, f64, f64)) -> PyResult<f64> {
    Ok(heisenberg::koranyi_dist(point(p)?, point(q)?))
}

#[pyfunction]
fn omega(p: (f64, f64, f64), v: Complex64, q: (f64, f64, f64), v2: Complex64) -> PyResult<Complex64> {
    energy::omega(point(p)?, v, point(q)?, v2).map_err(err)
}

#[pyfunction]
fn cross_ratio(
    p1: (f64, f64, f64),
    p2: (f64, f64, f64),
    p3: (f64, f64, f64),
    p4: (f64, f64, f64),
) -> PyResult<Complex64> {
    energy::cross_ratio(point(p1)?, point(p2)?, point(p3)?, point(p4)?).map_err(err)
}

/// Runs the constrained descent from a planar curve spec and returns the
/// final state.
#[pyfunction]
#[pyo3(signature = (spec, max_iter = 200))]
fn minimize_spec<'py>(py: Python<'py>, spec: &str, max_iter: usize) -> PyResult<Bound<'py, PyAny>> {
    let spec = CurveSpec::from_json(spec).map_err(err)?;
    let c = spec
        .planar()
        .map_err(err)?
        .ok_or_else(|| PyValueError::new_err("minimize needs a planar curve family"))?;
    let options = MinimizeOptions { max_iter, ..MinimizeOptions::default() };
    let st = py.detach(|| minimize::minimize(&c, options)).map_err(err)?;
    dict(py, &st)
}

#[pymodule]
fn pylegendrian(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKnot>()?;
    m.add_function(wrap_pyfunction!(koranyi_dist, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(cross_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_spec, m)?)?;
    Ok(())
}
