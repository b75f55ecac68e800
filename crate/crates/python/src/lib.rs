//! Python bindings: the `pdbgrid` extension module.
//!
//! Words cross the boundary as strings over `a, b, c, …` and Parikh vectors
//! as sequences of integers. Reports come back as plain dictionaries with
//! the same fields as the JSON output of the command-line tool.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

use parikh_grid as core;
use parikh_grid::{Alphabet, Error, Letter, SearchConfig, Target};

create_exception!(pdbgrid, CapacityError, PyValueError, "The requested grid or search is too large.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Capacity(_) => CapacityError::new_err(e.to_string()),
        Error::SelfCheck(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_pyobject(py)?.into_any(),
            (None, Some(i)) => i.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
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
            for (key, item) in map {
                dict.set_item(key, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: Serialize>(py: Python<'py>, body: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(body).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn letters(word: &str, sigma: usize) -> PyResult<Vec<Letter>> {
    Alphabet::new(sigma).and_then(|a| a.parse(word)).or_raise()
}

fn text(word: &[Letter], sigma: usize) -> PyResult<String> {
    Ok(Alphabet::new(sigma).or_raise()?.render(word))
}

fn to_vectors(vs: Vec<Vec<u32>>) -> Vec<core::ParikhVector> {
    vs.into_iter().map(core::ParikhVector::new).collect()
}

/// A Parikh vector: letter multiplicities of a word.
#[pyclass(name = "ParikhVector", frozen, eq, hash, skip_from_py_object, module = "pdbgrid")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyParikhVector(core::ParikhVector);

#[pymethods]
impl PyParikhVector {
    #[new]
    fn new(counts: Vec<u32>) -> Self {
        PyParikhVector(core::ParikhVector::new(counts))
    }

    #[staticmethod]
    fn of(word: &str, sigma: usize) -> PyResult<Self> {
        Ok(PyParikhVector(core::pv_of(&letters(word, sigma)?, sigma).or_raise()?))
    }

    #[staticmethod]
    fn unrank(index: u64, k: usize, sigma: usize) -> PyResult<Self> {
        Ok(PyParikhVector(core::unrank(index, k, sigma).or_raise()?))
    }

    #[getter]
    fn counts(&self) -> Vec<u32> {
        self.0.counts().to_vec()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn sigma(&self) -> usize {
        self.0.sigma()
    }

    fn rank(&self) -> u64 {
        core::rank(&self.0)
    }

    fn neighbors(&self) -> Vec<Self> {
        self.0.neighbors().into_iter().map(PyParikhVector).collect()
    }

    fn parents(&self) -> Vec<Self> {
        self.0.parents().into_iter().map(PyParikhVector).collect()
    }

    fn children(&self) -> Vec<Self> {
        self.0.children().into_iter().map(PyParikhVector).collect()
    }

    fn is_neighbor(&self, other: &Self) -> bool {
        self.0.is_neighbor(&other.0)
    }

    fn distance(&self, other: &Self) -> PyResult<usize> {
        if self.0.sigma() != other.0.sigma() {
            return Err(PyValueError::new_err("vectors have different alphabet sizes"));
        }
        Ok(self.0.distance(&other.0))
    }

    fn __len__(&self) -> usize {
        self.0.sigma()
    }

    fn __repr__(&self) -> String {
        format!("ParikhVector({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// The PdB-grid on all order-`k` vectors over `sigma` letters.
#[pyclass(name = "Grid", frozen, module = "pdbgrid")]
struct PyGrid(core::PdbGrid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(k: usize, sigma: usize) -> PyResult<Self> {
        Ok(PyGrid(core::PdbGrid::build(k, sigma).or_raise()?))
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn sigma(&self) -> usize {
        self.0.sigma()
    }

    fn __len__(&self) -> usize {
        self.0.vertex_count()
    }

    fn vertices(&self) -> Vec<PyParikhVector> {
        self.0.vertices().iter().cloned().map(PyParikhVector).collect()
    }

    fn neighbors_of(&self, index: usize) -> PyResult<Vec<usize>> {
        if index >= self.0.vertex_count() {
            return Err(PyValueError::new_err(format!("vertex {index} out of range")));
        }
        Ok(self.0.neighbors_of(index))
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.undirected_edges()
    }

    fn bows(&self) -> PyResult<Vec<(usize, String)>> {
        let alphabet = Alphabet::new(self.0.sigma()).or_raise()?;
        Ok(self.0.bows().into_iter().map(|(v, l)| (v, alphabet.render_letter(l))).collect())
    }

    fn layout_2d(&self) -> PyResult<Vec<(f64, f64)>> {
        self.0.layout_2d().or_raise()
    }

    fn to_dot(&self) -> PyResult<String> {
        core::export::grid_dot(&self.0).or_raise()
    }

    fn to_json(&self) -> PyResult<String> {
        Ok(core::export::to_json(&core::export::GridExport::from_grid(&self.0).or_raise()?))
    }

    fn __repr__(&self) -> String {
        format!("Grid(k={}, sigma={})", self.0.k(), self.0.sigma())
    }
}

/// The distinct order-`k` vectors among the windows of `word`, in rank order.
#[pyfunction]
fn parikh_set(word: &str, k: usize, sigma: usize) -> PyResult<Vec<PyParikhVector>> {
    let set = core::parikh_set(&letters(word, sigma)?, k, sigma).or_raise()?;
    Ok(set.iter().cloned().map(PyParikhVector).collect())
}

/// Vertex sequence of the walk `word` spells in the order-`k` grid.
#[pyfunction]
fn walk_of(word: &str, k: usize, sigma: usize) -> PyResult<Vec<PyParikhVector>> {
    let walk = core::walk_of(&letters(word, sigma)?, k, sigma).or_raise()?;
    Ok(walk.vertices.into_iter().map(PyParikhVector).collect())
}

/// Whether the vertex sequence is spelled by a word; returns the
/// lexicographically smallest such word, or the refutation.
#[pyfunction]
fn is_realizable_walk<'py>(py: Python<'py>, vertices: Vec<Vec<u32>>, k: usize) -> PyResult<Bound<'py, PyAny>> {
    let vs = to_vectors(vertices);
    let sigma = vs.first().map_or(1, core::ParikhVector::sigma);
    let walk = core::Walk::new(k, vs, None).or_raise()?;
    let out = PyDict::new(py);
    match core::is_realizable_walk(&walk).or_raise()? {
        core::Realizability::Realizable { word, .. } => {
            out.set_item("realizable", true)?;
            out.set_item("word", text(&word, sigma)?)?;
        }
        core::Realizability::Unrealizable(why) => {
            out.set_item("realizable", false)?;
            out.set_item("refutation", report(py, &why)?)?;
        }
    }
    Ok(out.into_any())
}

/// Shortest word whose itinerary is the given bowfree vertex sequence.
#[pyfunction]
fn string_from_itinerary(vertices: Vec<Vec<u32>>, k: usize) -> PyResult<String> {
    let vs = to_vectors(vertices);
    let sigma = vs.first().map_or(1, core::ParikhVector::sigma);
    let it = core::Itinerary::new(vs).or_raise()?;
    text(&core::string_from_itinerary(&it, k).or_raise()?, sigma)
}

/// Whether some word has exactly these vectors as its order-`k` windows.
#[pyfunction]
fn is_realizable<'py>(py: Python<'py>, vectors: Vec<Vec<u32>>) -> PyResult<Bound<'py, PyAny>> {
    let vs = to_vectors(vectors);
    let sigma = vs.first().map_or(1, core::ParikhVector::sigma);
    let r = core::is_realizable(&vs).or_raise()?;
    let out = PyDict::new(py);
    out.set_item("realizable", r.realizable)?;
    out.set_item("witness", r.witness.as_deref().map(|w| text(w, sigma)).transpose()?)?;
    out.set_item("components", report(py, &r.refutation)?)?;
    Ok(out.into_any())
}

#[pyfunction]
fn verify<'py>(py: Python<'py>, word: &str, k: usize, sigma: usize) -> PyResult<Bound<'py, PyAny>> {
    report(py, &core::verify(&letters(word, sigma)?, k, sigma).or_raise()?)
}

#[pyfunction]
fn covset(word: &str, sigma: usize) -> PyResult<Vec<usize>> {
    Ok(core::covset(&letters(word, sigma)?, sigma).or_raise()?.into_iter().collect())
}

#[pyfunction]
fn bounds<'py>(py: Python<'py>, k: usize, sigma: usize) -> PyResult<Bound<'py, PyAny>> {
    report(py, &core::bounds(k, sigma).or_raise()?)
}

/// `family` is one of `"binary_pdb"`, `"k2_eulerian"`, `"kcover_not_k1"`.
#[pyfunction]
fn construct(family: &str, k: usize, sigma: usize) -> PyResult<String> {
    let family = match family {
        "binary_pdb" => core::Family::BinaryPdb,
        "k2_eulerian" => core::Family::K2Eulerian,
        "kcover_not_k1" => core::Family::KcoverNotK1,
        other => return Err(PyValueError::new_err(format!("unknown family '{other}'"))),
    };
    text(&core::construct_family(family, k, sigma).or_raise()?, sigma)
}

fn config(k: usize, sigma: usize, threads: usize, budget: Option<u64>) -> SearchConfig {
    SearchConfig::new(k, sigma).workers(threads).budget(budget)
}

/// Exhaustive search. `target` is `"shortest"`, `"pdb"` or `"length"`
/// (the last needs `length`).
#[pyfunction]
#[pyo3(signature = (k, sigma, target = "shortest", length = None, max_len = None, threads = 1, budget = Some(core::search::DEFAULT_NODE_BUDGET)))]
#[allow(clippy::too_many_arguments)]
fn search<'py>(
    py: Python<'py>,
    k: usize,
    sigma: usize,
    target: &str,
    length: Option<usize>,
    max_len: Option<usize>,
    threads: usize,
    budget: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let target = match (target, length) {
        ("shortest", _) => Target::ShortestCovering,
        ("pdb", _) => Target::PdbOnly,
        ("length", Some(l)) => Target::ExistenceAtLength(l),
        ("length", None) => return Err(PyValueError::new_err("target 'length' needs length=")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown target '{other}'"))),
    };
    let cfg = config(k, sigma, threads, budget).target(target).max_len(max_len);
    let outcome = py.detach(|| core::search(&cfg)).or_raise()?;
    report(py, &outcome)
}

/// Canonical representatives of all PdB words up to reversal and relabeling.
#[pyfunction]
#[pyo3(signature = (k, sigma, force = false, threads = 1))]
fn enumerate_all_pdb(py: Python<'_>, k: usize, sigma: usize, force: bool, threads: usize) -> PyResult<Vec<String>> {
    let cfg = config(k, sigma, threads, None);
    let e = py.detach(|| core::enumerate_all_pdb(&cfg, force)).or_raise()?;
    Ok(e.classes)
}

#[pyfunction]
#[pyo3(signature = (k, sigma, max_len, threads = 1))]
fn mincov<'py>(py: Python<'py>, k: usize, sigma: usize, max_len: usize, threads: usize) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(k, sigma, threads, Some(core::search::DEFAULT_NODE_BUDGET));
    let m = py.detach(|| core::mincov_explore(&cfg, max_len)).or_raise()?;
    report(py, &m)
}

#[pymodule]
fn pdbgrid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParikhVector>()?;
    m.add_class::<PyGrid>()?;
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_function(wrap_pyfunction!(parikh_set, m)?)?;
    m.add_function(wrap_pyfunction!(walk_of, m)?)?;
    m.add_function(wrap_pyfunction!(is_realizable_walk, m)?)?;
    m.add_function(wrap_pyfunction!(string_from_itinerary, m)?)?;
    m.add_function(wrap_pyfunction!(is_realizable, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(covset, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_all_pdb, m)?)?;
    m.add_function(wrap_pyfunction!(mincov, m)?)?;
    Ok(())
}
