//! Python bindings. Reports come back as plain dicts built from their JSON
//! form.

use operad_forge_core::budget::Budget;
use operad_forge_core::conjectures::{self, LabelSystem};
use operad_forge_core::lattice::block::{self, DEFAULT_MAX_TOTAL};
use operad_forge_core::lattice::{self as lattice, matching, LatticePath};
use operad_forge_core::signatures::{self, BergerElement, TruncatedSignature};
use operad_forge_core::topology;
use operad_forge_core::vdgen;
use operad_forge_core::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) | Error::SizeCap { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn budget(seconds: Option<u64>) -> Budget {
    seconds.map_or_else(Budget::unlimited, Budget::seconds)
}

/// A label: one complete-graph factor per level, e.g. `(121)|(1212)|(21)`.
#[pyclass(name = "Signature", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySignature(TruncatedSignature);

#[pymethods]
impl PySignature {
    #[new]
    fn new(text: &str, d: usize) -> PyResult<Self> {
        TruncatedSignature::parse(text, d).map(Self).map_err(py_err)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn le(&self, other: &PySignature) -> bool {
        self.0.le(&other.0)
    }

    fn swap(&self) -> Self {
        Self(self.0.swap())
    }

    fn meet(&self, other: &PySignature) -> Option<Self> {
        signatures::meet(&self.0, &other.0).map(Self)
    }

    fn down_set(&self) -> Vec<Self> {
        self.0.down_set().into_iter().map(Self).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signature('{}', {})", self.0, self.0.depth())
    }
}

/// A lattice path with its argument and output degrees.
#[pyclass(name = "LatticePath", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyLatticePath(LatticePath);

#[pymethods]
impl PyLatticePath {
    #[new]
    #[pyo3(signature = (in_degrees, out_degree, word, cuts))]
    fn new(
        in_degrees: Vec<usize>,
        out_degree: usize,
        word: Vec<usize>,
        cuts: Vec<usize>,
    ) -> PyResult<Self> {
        LatticePath::new(in_degrees, out_degree, word, cuts)
            .map(Self)
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(Self)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("paths serialize")
    }

    #[getter]
    fn in_degrees(&self) -> Vec<usize> {
        self.0.in_degrees().to_vec()
    }

    #[getter]
    fn out_degree(&self) -> usize {
        self.0.out_degree()
    }

    #[getter]
    fn word(&self) -> Vec<usize> {
        self.0.word().to_vec()
    }

    #[getter]
    fn cuts(&self) -> Vec<usize> {
        self.0.cuts().to_vec()
    }

    /// Pairwise factors keyed by 1-based argument pairs.
    fn pair_factors(&self) -> Vec<((usize, usize), String)> {
        let k = self.0.arity();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| ((i + 1, j + 1), self.0.pair_factor(i, j).to_string()))
            .collect()
    }

    fn params(&self) -> String {
        self.0.params().to_string()
    }

    fn complexity(&self) -> usize {
        self.0.complexity()
    }

    fn is_nondegenerate(&self) -> bool {
        self.0.is_nondegenerate()
    }

    fn in_block(&self, block: &str) -> PyResult<bool> {
        let bound = BergerElement::parse(block).map_err(py_err)?;
        self.0.in_block(&bound).map_err(py_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LatticePath('{}')", self.0)
    }
}

/// Canonical label list of depth `d`.
#[pyfunction]
fn generate_v(d: usize) -> PyResult<Vec<PySignature>> {
    let seq = vdgen::generate_v(d).map_err(py_err)?;
    Ok(seq.elements.into_iter().map(PySignature).collect())
}

/// Auxiliary label list for level `l`.
#[pyfunction]
fn generate_tilde(l: usize) -> PyResult<Vec<PySignature>> {
    let seq = vdgen::generate_tilde(l).map_err(py_err)?;
    Ok(seq.elements.into_iter().map(PySignature).collect())
}

fn system(d: usize, replace: Vec<(usize, Vec<PySignature>)>) -> PyResult<LabelSystem> {
    let mut sys = LabelSystem::builtin(d).map_err(py_err)?;
    for (level, labels) in replace {
        sys = sys
            .with_level(level, labels.into_iter().map(|s| s.0).collect())
            .map_err(py_err)?;
    }
    Ok(sys)
}

/// Twist-compatibility check on the built-in system, optionally with some
/// levels replaced.
#[pyfunction]
#[pyo3(signature = (d, replace = Vec::new()))]
fn check_conjecture1(
    py: Python<'_>,
    d: usize,
    replace: Vec<(usize, Vec<PySignature>)>,
) -> PyResult<Bound<'_, PyAny>> {
    let sys = system(d, replace)?;
    to_py(py, &conjectures::check_conjecture1(&sys))
}

#[pyfunction]
fn check_conjecture2(py: Python<'_>, d: usize) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &conjectures::check_conjecture2(d).map_err(py_err)?)
}

#[pyfunction]
fn check_cover(py: Python<'_>, d: usize) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &conjectures::check_cover(d).map_err(py_err)?)
}

/// Betti numbers of the order complex of the downset of V_d.
#[pyfunction]
fn downset_betti(d: usize) -> PyResult<Vec<usize>> {
    let labels = vdgen::generate_v(d).map_err(py_err)?.elements;
    let p = conjectures::downset(&labels).map_err(py_err)?;
    Ok(topology::poset_homology(&p).betti())
}

/// Betti numbers of the two-leaf Milgram poset.
#[pyfunction]
fn milgram_betti(n: usize) -> PyResult<Vec<usize>> {
    let p = topology::milgram_poset(n).map_err(py_err)?;
    Ok(topology::poset_homology(&p).betti())
}

#[pyfunction]
fn enumerate_paths(in_degrees: Vec<usize>, out_degree: usize) -> Vec<PyLatticePath> {
    lattice::enumerate_paths(&in_degrees, out_degree)
        .into_iter()
        .map(PyLatticePath)
        .collect()
}

#[pyfunction]
fn count_paths(in_degrees: Vec<usize>, out_degree: usize) -> u128 {
    lattice::count_paths(&in_degrees, out_degree)
}

#[pyfunction]
#[pyo3(signature = (block, level, max_degree = 2, time_limit = None))]
fn matching_check<'py>(
    py: Python<'py>,
    block: &str,
    level: i64,
    max_degree: usize,
    time_limit: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let bound = BergerElement::parse(block).map_err(py_err)?;
    let report =
        matching::matching_check(&bound, level, max_degree, &budget(time_limit)).map_err(py_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (block, out = 0, max_total = DEFAULT_MAX_TOTAL, time_limit = None))]
fn block_homology<'py>(
    py: Python<'py>,
    block: &str,
    out: usize,
    max_total: usize,
    time_limit: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let bound = BergerElement::parse(block).map_err(py_err)?;
    let report =
        block::block_homology(&bound, out, max_total, &budget(time_limit)).map_err(py_err)?;
    let is_point = report.is_point();
    let dict = to_py(py, &report)?;
    dict.set_item("is_point", is_point)?;
    Ok(dict)
}

#[pymodule]
fn operad_forge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySignature>()?;
    m.add_class::<PyLatticePath>()?;
    m.add_function(wrap_pyfunction!(generate_v, m)?)?;
    m.add_function(wrap_pyfunction!(generate_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(check_conjecture1, m)?)?;
    m.add_function(wrap_pyfunction!(check_conjecture2, m)?)?;
    m.add_function(wrap_pyfunction!(check_cover, m)?)?;
    m.add_function(wrap_pyfunction!(downset_betti, m)?)?;
    m.add_function(wrap_pyfunction!(milgram_betti, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_paths, m)?)?;
    m.add_function(wrap_pyfunction!(count_paths, m)?)?;
    m.add_function(wrap_pyfunction!(matching_check, m)?)?;
    m.add_function(wrap_pyfunction!(block_homology, m)?)?;
    Ok(())
}
