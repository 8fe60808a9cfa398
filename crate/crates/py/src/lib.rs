use hdx_core::complex::{complete_complex, punctured_complete_complex, sparsified_complex};
use hdx_core::expansion as exp;
use hdx_core::level_set;
use hdx_core::local_spectral;
use hdx_core::strips;
use hdx_core::unique_games::{self, RoundingConfig};
use hdx_core::walk::{HdWalk, WalkSpec};
use hdx_core::{Face, HdxError};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py(e: HdxError) -> PyErr {
    match e {
        HdxError::MalformedInput(_)
        | HdxError::UnknownFace(_)
        | HdxError::ParseError(_)
        | HdxError::MalformedWalk(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Round-trip a serializable report through Python's json module.
fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

/// A weighted pure simplicial complex.
#[pyclass(name = "Complex", module = "hdx", frozen)]
struct PyComplex {
    inner: hdx_core::Complex,
}

#[pymethods]
impl PyComplex {
    #[new]
    #[pyo3(signature = (top_faces, weights=None))]
    fn new(top_faces: Vec<Vec<usize>>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let inner = hdx_core::Complex::build(top_faces, weights).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn complete(n: usize, d: usize) -> PyResult<Self> {
        Ok(Self { inner: complete_complex(n, d).map_err(to_py)? })
    }

    #[staticmethod]
    fn punctured(n: usize) -> PyResult<Self> {
        Ok(Self { inner: punctured_complete_complex(n).map_err(to_py)? })
    }

    #[staticmethod]
    fn sparsified(n: usize, d: usize, p: f64, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: sparsified_complex(n, d, p, seed).map_err(to_py)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: hdx_core::Complex::from_json(text).map_err(to_py)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn level_sizes(&self) -> Vec<usize> {
        self.inner.level_sizes()
    }

    fn faces(&self, i: usize) -> PyResult<Vec<Vec<usize>>> {
        self.check_level(i)?;
        Ok(self.inner.faces(i).iter().map(|f| f.vertices().to_vec()).collect())
    }

    fn weights(&self, i: usize) -> PyResult<Vec<f64>> {
        self.check_level(i)?;
        Ok(self.inner.weights(i).to_vec())
    }

    /// Indices into `faces(k)` of the k-faces containing `tau`.
    fn link(&self, tau: Vec<usize>, k: usize) -> PyResult<Vec<usize>> {
        let face = Face::new(tau).map_err(to_py)?;
        let faces = self.inner.link_faces(&face, k).map_err(to_py)?;
        Ok(faces.into_iter().map(|(s, _)| s).collect())
    }

    fn gamma(&self) -> PyResult<f64> {
        local_spectral::gamma(&self.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Complex(n={}, d={}, sizes={:?})", self.inner.n(), self.inner.dim(), self.inner.level_sizes())
    }
}

impl PyComplex {
    fn check_level(&self, i: usize) -> PyResult<()> {
        if i > self.inner.dim() {
            return Err(PyValueError::new_err(format!("level {i} above dimension {}", self.inner.dim())));
        }
        Ok(())
    }
}

/// An HD-walk on `X(k)`, built from a spec such as `"N:3:1"` or `"S:3:2"`.
#[pyclass(name = "Walk", module = "hdx", frozen)]
struct PyWalk {
    inner: HdWalk,
    spec: String,
}

#[pymethods]
impl PyWalk {
    #[new]
    fn new(complex: &PyComplex, spec: &str) -> PyResult<Self> {
        let parsed = WalkSpec::parse(spec).map_err(to_py)?;
        let inner = parsed.build(&complex.inner).map_err(to_py)?;
        Ok(Self { inner, spec: parsed.to_string() })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn spec(&self) -> String {
        self.spec.clone()
    }

    #[getter]
    fn is_complete(&self) -> bool {
        self.inner.is_complete
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn lambdas(&self) -> Vec<f64> {
        strips::walk_lambdas(&self.inner)
    }

    /// Dense row-major transition matrix.
    fn matrix(&self) -> Vec<Vec<f64>> {
        let m = self.inner.matrix.to_dense();
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }

    fn apply(&self, f: Vec<f64>) -> PyResult<Vec<f64>> {
        if f.len() != self.inner.size() {
            return Err(PyValueError::new_err(format!(
                "expected {} values, got {}",
                self.inner.size(),
                f.len()
            )));
        }
        Ok(self.inner.apply(&f))
    }

    fn spectrum(&self) -> Vec<f64> {
        strips::walk_spectrum(&self.inner).values
    }

    fn laziness(&self) -> f64 {
        hdx_core::walk::laziness(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Walk({:?}, faces={})", self.spec, self.inner.size())
    }
}

#[pyfunction]
#[pyo3(signature = (complex, walk, residuals=false))]
fn strip_report<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    walk: &PyWalk,
    residuals: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let res = if residuals {
        let basis = level_set::LevelSetBasis::new(&complex.inner, walk.inner.k).map_err(to_py)?;
        Some(strips::measured_residuals(&walk.inner, &basis, &strips::walk_lambdas(&walk.inner)))
    } else {
        None
    };
    to_dict(py, &strips::stripping_report(&walk.inner, res))
}

/// `(rank_predicted, rank_empirical)` at threshold `delta`.
#[pyfunction]
fn st_rank(walk: &PyWalk, delta: f64) -> (usize, usize) {
    let r = strips::st_rank(&strips::stripping_report(&walk.inner, None), delta);
    (r.predicted, r.empirical)
}

/// Components `f_0 .. f_k` of the level-set decomposition and its residual.
#[pyfunction]
fn decompose<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    k: usize,
    f: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let dec = level_set::decompose(&complex.inner, k, &f).map_err(to_py)?;
    #[derive(Serialize)]
    struct Out {
        components: Vec<Vec<f64>>,
        residual: f64,
        gram: Vec<Vec<f64>>,
    }
    let gram = dec.gram();
    to_dict(py, &Out { components: dec.components, residual: dec.residual, gram })
}

#[pyfunction]
fn expansion<'py>(py: Python<'py>, walk: &PyWalk, members: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &exp::expansion(&walk.inner, &members).map_err(to_py)?)
}

#[pyfunction]
fn link_expansion<'py>(py: Python<'py>, complex: &PyComplex, walk: &PyWalk) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &exp::link_expansion_profile(&complex.inner, &walk.inner).map_err(to_py)?)
}

#[pyfunction]
fn expansion_bound<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    walk: &PyWalk,
    members: Vec<usize>,
    delta: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let b = exp::expansion_lower_bound(&complex.inner, &walk.inner, &members, delta, 0.0)
        .map_err(to_py)?;
    to_dict(py, &b)
}

#[pyfunction]
fn tightness_fixture<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    k: usize,
    t: usize,
    d: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_dict(py, &exp::tightness_fixture_bm(n, m, k, t, d).map_err(to_py)?)
}

/// Plant an instance with corruption `eps` and solve it by iterated link rounding.
#[pyfunction]
#[pyo3(signature = (complex, walk, m, eps, seed, r=None))]
fn solve_unique_game<'py>(
    py: Python<'py>,
    complex: &PyComplex,
    walk: &PyWalk,
    m: usize,
    eps: f64,
    seed: u64,
    r: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let (inst, _) = unique_games::plant_instance(&walk.inner, m, eps, seed).map_err(to_py)?;
    let cfg = RoundingConfig { eps, seed, r_override: r };
    let report = unique_games::iterated_link_rounding(&complex.inner, &walk.inner, &inst, &cfg)
        .map_err(to_py)?;
    to_dict(py, &report)
}

#[pymodule]
fn hdx(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyWalk>()?;
    m.add_function(wrap_pyfunction!(strip_report, m)?)?;
    m.add_function(wrap_pyfunction!(st_rank, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(expansion, m)?)?;
    m.add_function(wrap_pyfunction!(link_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_bound, m)?)?;
    m.add_function(wrap_pyfunction!(tightness_fixture, m)?)?;
    m.add_function(wrap_pyfunction!(solve_unique_game, m)?)?;
    Ok(())
}
