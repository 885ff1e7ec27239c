use std::path::PathBuf;

use num_bigint::BigInt;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dipath_core::bounds::bounds_row;
use dipath_core::construct::{self, BlowupSpec, IteratedSpec};
use dipath_core::flag::{self as fa, SdpCertificate, Verdict};
use dipath_core::format::{parse_compact, parse_graph, to_compact, write_arc_text};
use dipath_core::grid::{self, BoundMode, Slack};
use dipath_core::rational::{fmt_rational, parse_rational};
use dipath_core::search::{self, MoveSet, SearchReport};
use dipath_core::{count, Constraint, Error, OrientedGraph, Rational, VertexSet};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::ResourceLimit(_) | Error::Unsupported(_) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_rational(r),))
}

fn big_int<'py>(py: Python<'py>, v: &BigInt) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((v.to_string(),))
}

fn constraint(t3_free: bool) -> Constraint {
    if t3_free {
        Constraint::T3Free
    } else {
        Constraint::AllOriented
    }
}

/// An oriented graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "dipath", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: OrientedGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, arcs = Vec::new()))]
    fn new(n: usize, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: OrientedGraph::from_arcs(n, &arcs).map_err(py_err)?,
        })
    }

    /// Parses `n:digits` or the arc-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_graph(text).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_compact(code: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_compact(code).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn directed_cycle(k: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: OrientedGraph::directed_cycle(k).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn directed_path(k: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: OrientedGraph::directed_path(k).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs()
    }

    fn compact(&self) -> String {
        to_compact(&self.inner)
    }

    fn to_text(&self) -> String {
        write_arc_text(&self.inner)
    }

    fn is_t3_free(&self) -> bool {
        self.inner.is_t3_free()
    }

    fn count_p4(&self) -> u64 {
        count::count_p4(&self.inner)
    }

    fn count(&self, pattern: &PyGraph) -> PyResult<u64> {
        count::count_induced(&self.inner, &pattern.inner).map_err(py_err)
    }

    /// Exact induced density as a `fractions.Fraction`.
    fn density<'py>(&self, py: Python<'py>, pattern: &PyGraph) -> PyResult<Bound<'py, PyAny>> {
        let d = count::density(&self.inner, &pattern.inner).map_err(py_err)?;
        fraction(py, &d)
    }

    fn count_p4_through(&self, vertices: Vec<usize>) -> PyResult<u64> {
        let set = VertexSet::new(self.inner.n(), vertices).map_err(py_err)?;
        count::count_p4_through(&self.inner, &set).map_err(py_err)
    }

    fn clone_vertex(&self, x: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: self.inner.clone_vertex(x).map_err(py_err)?,
        })
    }

    fn delete_vertex(&self, y: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: self.inner.delete_vertex(y).map_err(py_err)?,
        })
    }

    fn is_isomorphic(&self, other: &PyGraph) -> PyResult<bool> {
        dipath_core::are_isomorphic(&self.inner, &other.inner).map_err(py_err)
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph('{}')", to_compact(&self.inner))
    }
}

/// Blow-up of `base` with the given class sizes.
#[pyfunction]
fn blow_up(base: &PyGraph, sizes: Vec<usize>) -> PyResult<PyGraph> {
    let spec = BlowupSpec::new(base.inner.clone(), sizes).map_err(py_err)?;
    Ok(PyGraph {
        inner: construct::blow_up(&spec),
    })
}

#[pyfunction]
#[pyo3(signature = (base, n, iterated = false))]
fn balanced_blow_up(base: &PyGraph, n: usize, iterated: bool) -> PyResult<PyGraph> {
    let inner = if iterated {
        construct::iterated_balanced_blow_up(&IteratedSpec::new(base.inner.clone(), n).map_err(py_err)?)
    } else {
        construct::balanced_blow_up(&base.inner, n).map_err(py_err)?
    };
    Ok(PyGraph { inner })
}

/// Closed-form 4-path count of a C5 blow-up with the given class sizes.
#[pyfunction]
fn blowup_p4_count(py: Python<'_>, sizes: Vec<u64>) -> PyResult<Bound<'_, PyAny>> {
    big_int(py, &construct::blowup_p4_count(&sizes).map_err(py_err)?)
}

/// Isomorphism classes on `n` vertices, as compact codes in canonical order.
#[pyfunction]
#[pyo3(signature = (n, t3_free = true))]
fn enumerate(py: Python<'_>, n: usize, t3_free: bool) -> PyResult<Vec<String>> {
    let family = py
        .detach(|| dipath_core::enumerate_family(n, constraint(t3_free)))
        .map_err(py_err)?;
    Ok(family.graphs().iter().map(to_compact).collect())
}

fn report<'py>(py: Python<'py>, r: &SearchReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("max_count", r.max_count)?;
    let graphs: Vec<PyGraph> = r
        .maximizers
        .iter()
        .map(|g| PyGraph { inner: g.clone() })
        .collect();
    d.set_item("maximizers", graphs)?;
    d.set_item("exhaustive", r.exhaustive)?;
    d.set_item("examined", r.examined)?;
    d.set_item("accepted_moves", r.accepted_moves)?;
    Ok(d)
}

/// Maximum number of induced 4-paths over all graphs on `n` vertices.
#[pyfunction]
#[pyo3(signature = (n, t3_free = true))]
fn exhaustive_max(py: Python<'_>, n: usize, t3_free: bool) -> PyResult<Bound<'_, PyDict>> {
    let p4 = OrientedGraph::directed_path(4).map_err(py_err)?;
    let r = py
        .detach(|| search::exhaustive_max(n, constraint(t3_free), &p4))
        .map_err(py_err)?;
    report(py, &r)
}

#[pyfunction]
#[pyo3(signature = (start, t3_free = true, budget = 10_000, rewire = false))]
fn local_search<'py>(
    py: Python<'py>,
    start: &PyGraph,
    t3_free: bool,
    budget: usize,
    rewire: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let moves = MoveSet {
        clone_delete: true,
        rewire_pair: rewire,
    };
    let r = py
        .detach(|| search::local_search(&start.inner, constraint(t3_free), moves, budget))
        .map_err(py_err)?;
    report(py, &r)
}

/// Grid certificate for one restricted case (`1`..`4`); values are Fractions.
#[pyfunction]
#[pyo3(signature = (case, resolution = 100, mode = "paper"))]
fn certify_grid<'py>(py: Python<'py>, case: u32, resolution: u64, mode: &str) -> PyResult<Bound<'py, PyDict>> {
    let mode = match mode {
        "paper" => BoundMode::Paper,
        "tight" => BoundMode::Tight,
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let problem = grid::restricted_case(case).map_err(py_err)?;
    let cert = py
        .detach(|| grid::certify(&problem, resolution, &Slack::Auto, mode))
        .map_err(py_err)?;
    let d = PyDict::new(py);
    let opt = |r: &Option<Rational>| -> PyResult<Option<Bound<'py, PyAny>>> {
        r.as_ref().map(|r| fraction(py, r)).transpose()
    };
    d.set_item("case", case)?;
    d.set_item("resolution", resolution)?;
    d.set_item("free", cert.free.clone())?;
    d.set_item("evaluated", cert.evaluated)?;
    d.set_item("feasible", cert.feasible)?;
    d.set_item("sampled_max", opt(&cert.sampled_max)?)?;
    d.set_item("certified_bound", opt(&cert.certified_bound)?)?;
    d.set_item("derivative_bound", fraction(py, &cert.derivative_bound)?)?;
    d.set_item("certificate", cert.to_text())?;
    Ok(d)
}

/// Closed-form bounds for `P_k`; `upper_fa` is the quoted decimal string or None.
#[pyfunction(name = "bounds_row")]
fn bounds_row_py(py: Python<'_>, k: u64) -> PyResult<Bound<'_, PyDict>> {
    let r = bounds_row(k).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("k", r.k)?;
    d.set_item("lower_iterated", fraction(py, &r.lower_iterated)?)?;
    d.set_item("lower_generic", fraction(py, &r.lower_generic)?)?;
    d.set_item("conj_t3free", fraction(py, &r.conj_t3free)?)?;
    d.set_item("upper_pg", fraction(py, &r.upper_pg)?)?;
    d.set_item("upper_knv_t3free", fraction(py, &r.upper_knv_t3free)?)?;
    d.set_item("upper_fa", r.upper_fa.map(|q| q.decimal))?;
    Ok(d)
}

/// Flags, products and targets of the 4-vertex flag program.
#[pyclass(name = "FlagBasis", module = "dipath", frozen)]
struct PyFlagBasis {
    inner: fa::FlagBasis,
}

#[pymethods]
impl PyFlagBasis {
    #[new]
    fn new(py: Python<'_>) -> PyResult<Self> {
        Ok(PyFlagBasis {
            inner: py.detach(fa::build_basis).map_err(py_err)?,
        })
    }

    /// Type codes, e.g. `["2:0", "2:1"]`.
    fn types(&self) -> Vec<String> {
        self.inner.types.iter().map(|t| t.code()).collect()
    }

    fn flag_counts(&self) -> Vec<usize> {
        (0..self.inner.types.len()).map(|t| self.inner.flag_count(t)).collect()
    }

    fn targets(&self) -> Vec<String> {
        self.inner.targets.iter().map(|h| to_compact(&h.graph())).collect()
    }

    fn target_vector<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner
            .target_vector()
            .iter()
            .map(|c| fraction(py, c))
            .collect()
    }

    fn export_sdp(&self, path: PathBuf) -> PyResult<()> {
        fa::export_sdp(&self.inner, &self.inner.target_vector(), &path).map_err(py_err)
    }

    fn write_zero_certificate(&self, path: PathBuf, bound: &str) -> PyResult<()> {
        let bound = parse_rational(bound).map_err(py_err)?;
        SdpCertificate::zero(&self.inner, bound)
            .write_dir(&path)
            .map_err(py_err)
    }

    /// Returns `("proves", [tight codes])`, `("fails", code)` or `("not-psd", type)`.
    fn verify(&self, py: Python<'_>, cert_dir: PathBuf, bound: &str) -> PyResult<(String, Py<PyAny>)> {
        let bound = parse_rational(bound).map_err(py_err)?;
        let cert = SdpCertificate::read_dir(&cert_dir, bound).map_err(py_err)?;
        let verdict = py
            .detach(|| fa::verify_certificate(&self.inner, &cert))
            .map_err(py_err)?;
        Ok(match verdict {
            Verdict::Proves { tight } => {
                let codes: Vec<String> = tight.iter().map(|h| to_compact(&h.graph())).collect();
                ("proves".into(), codes.into_pyobject(py)?.into_any().unbind())
            }
            Verdict::FailsAt { target, .. } => (
                "fails".into(),
                to_compact(&target.graph()).into_pyobject(py)?.into_any().unbind(),
            ),
            Verdict::NotPsd { type_code } => {
                ("not-psd".into(), type_code.into_pyobject(py)?.into_any().unbind())
            }
        })
    }
}

#[pymodule]
fn dipath(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyFlagBasis>()?;
    m.add_function(wrap_pyfunction!(blow_up, m)?)?;
    m.add_function(wrap_pyfunction!(balanced_blow_up, m)?)?;
    m.add_function(wrap_pyfunction!(blowup_p4_count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_max, m)?)?;
    m.add_function(wrap_pyfunction!(local_search, m)?)?;
    m.add_function(wrap_pyfunction!(certify_grid, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_row_py, m)?)?;
    Ok(())
}
