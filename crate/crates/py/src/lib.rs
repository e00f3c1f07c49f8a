//! Python bindings: read, generate, solve and validate instances.

use pohpath::blocklike::{is_block_graph, solve_block_graph, solve_distance_block, solve_edge_distance_block};
use pohpath::cliquemod::{find_clique_module_set, solve_clique_module};
use pohpath::gadgets::{
    gen_ecc as build_ecc, gen_gnp as build_gnp, gen_w1_d2c, gen_w1_d2p, AlepInstance, CliqueVariant, McpInstance,
    PathVariant,
};
use pohpath::oracle::{solve_exact, EXACT_MAX_N};
use pohpath::planar::{recognize_outerplanar, solve_distance_outerplanar, solve_inner_vertices};
use pohpath::sparse::solve_fes;
use pohpath::{Error, Solution};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A problem instance.
#[pyclass(name = "Instance", frozen)]
struct PyInstance {
    inner: pohpath::Instance,
}

#[pymethods]
impl PyInstance {
    /// Parses the JSON instance format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance { inner: pohpath::read_instance(text.as_bytes()).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        String::from_utf8(pohpath::write_instance(&self.inner)).expect("the writer emits UTF-8")
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.graph.edges()
    }

    #[getter]
    fn constraints(&self) -> Vec<(usize, usize)> {
        self.inner.constraints.clone()
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={}, m={}, constraints={})", self.inner.n(), self.inner.graph.m(), self.inner.constraints.len())
    }
}

#[pyfunction]
fn read_instance(text: &str) -> PyResult<PyInstance> {
    PyInstance::from_json(text)
}

fn missing(what: &str) -> Error {
    Error::InvalidCertificate(format!("instance has no {what} certificate"))
}

/// `auto` uses a deletion-set certificate when it has at most `max_k`
/// vertices or edges, or when the oracle cannot run.
fn dispatch(
    inst: &pohpath::Instance,
    algo: &str,
    max_n: usize,
    max_k: usize,
) -> Result<(String, Option<Solution>), Error> {
    let c = &inst.certificates;
    let oracle_fits = inst.n() <= max_n.min(EXACT_MAX_N);
    let small = |k: usize| k <= max_k || !oracle_fits;
    let algo = match algo {
        "auto" => match (&c.embedding, &c.deletion_vertices, &c.deletion_edges) {
            (Some(_), Some(_), _) => "dist-outerplanar",
            (Some(_), None, _) => "planar-inner",
            (None, _, Some(f)) if small(f.len()) => "edge-block",
            (None, Some(w), None) if small(w.len()) => {
                if is_block_graph(&inst.graph.without_vertices(w)) {
                    "dist-block"
                } else {
                    "clique-module"
                }
            }
            _ if oracle_fits => "oracle",
            _ => return Err(Error::TooLarge(format!("no usable certificate and n = {} exceeds max_n", inst.n()))),
        },
        other => other,
    };
    let empty = Vec::new();
    let solution = match algo {
        "oracle" => solve_exact(inst)?,
        "fes" => solve_fes(inst)?,
        "block" => solve_block_graph(inst)?,
        "edge-block" => solve_edge_distance_block(inst, c.deletion_edges.as_ref().ok_or_else(|| missing("edge"))?)?,
        "dist-block" => solve_distance_block(inst, c.deletion_vertices.as_ref().ok_or_else(|| missing("vertex"))?)?,
        "clique-module" => match &c.deletion_vertices {
            Some(w) => solve_clique_module(inst, w)?,
            None => solve_clique_module(inst, &find_clique_module_set(&inst.graph).0)?,
        },
        "planar-inner" => solve_inner_vertices(inst, c.embedding.as_ref().ok_or_else(|| missing("embedding"))?)?,
        "dist-outerplanar" => {
            let w = c.deletion_vertices.as_ref().unwrap_or(&empty);
            match &c.embedding {
                Some(emb) => solve_distance_outerplanar(inst, w, emb)?,
                None => {
                    let emb = recognize_outerplanar(&inst.graph.without_vertices(w)).ok_or_else(|| missing("embedding"))?;
                    solve_distance_outerplanar(inst, w, &emb)?
                }
            }
        }
        other => return Err(Error::Unsupported(format!("unknown algorithm {other:?}"))),
    };
    Ok((algo.to_string(), solution))
}

/// Solves an instance. Returns a dict with `feasible`, `order`, `cost` and
/// `algo`; `order` and `cost` are None when no solution exists.
#[pyfunction]
#[pyo3(signature = (instance, algo = "auto", max_n = 24, max_k = 3))]
fn solve<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    algo: &str,
    max_n: usize,
    max_k: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = instance.inner.clone();
    let algo = algo.to_string();
    let (used, solution) = py.detach(move || dispatch(&inst, &algo, max_n, max_k)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("feasible", solution.is_some())?;
    out.set_item("order", solution.as_ref().map(|s| s.order.clone()))?;
    out.set_item("cost", solution.as_ref().map(|s| s.cost))?;
    out.set_item("algo", used)?;
    Ok(out)
}

/// Checks `order` against the instance and returns the individual checks.
#[pyfunction]
fn validate<'py>(py: Python<'py>, instance: &PyInstance, order: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
    let report = pohpath::validate_solution(&instance.inner, &order);
    let out = PyDict::new(py);
    out.set_item("is_permutation", report.is_permutation)?;
    out.set_item("edges_present", report.edges_present)?;
    out.set_item("cycle_closed", report.cycle_closed)?;
    out.set_item("extends_poset", report.extends_poset)?;
    out.set_item("cost", report.cost)?;
    out.set_item("valid", report.is_valid())?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (n, p, d = 0, seed = 0, max_weight = None))]
fn gen_gnp(n: usize, p: f64, d: usize, seed: u64, max_weight: Option<u64>) -> PyInstance {
    PyInstance { inner: build_gnp(n, p, d, max_weight, seed) }
}

fn mcp_seed(k: usize, q: usize, density: f64, plant: bool, seed: u64) -> PyResult<McpInstance> {
    if k == 0 || q == 0 {
        return Err(PyValueError::new_err("k and q must be positive"));
    }
    Ok(McpInstance::random(k, q, density, plant, seed))
}

#[pyfunction]
#[pyo3(signature = (k, q, density = 0.5, seed = 0, plant = false, variant = "path"))]
fn gen_mcp_d2p(k: usize, q: usize, density: f64, seed: u64, plant: bool, variant: &str) -> PyResult<PyInstance> {
    let shape = match variant {
        "path" => PathVariant::Path,
        "modules" => PathVariant::Modules,
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    Ok(PyInstance { inner: gen_w1_d2p(&mcp_seed(k, q, density, plant, seed)?, shape) })
}

#[pyfunction]
#[pyo3(signature = (k, q, density = 0.5, seed = 0, plant = false, variant = "clique"))]
fn gen_mcp_d2c(k: usize, q: usize, density: f64, seed: u64, plant: bool, variant: &str) -> PyResult<PyInstance> {
    let shape = match variant {
        "clique" => CliqueVariant::Clique,
        "cluster-modules" => CliqueVariant::ClusterModules,
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    Ok(PyInstance { inner: gen_w1_d2c(&mcp_seed(k, q, density, plant, seed)?, shape) })
}

/// `constraints` holds pairs `(i, j)` meaning a_i before b_j.
#[pyfunction]
fn gen_ecc(n: usize, constraints: Vec<(usize, usize)>) -> PyResult<PyInstance> {
    let seed = AlepInstance::new(n, &constraints).map_err(py_err)?;
    Ok(PyInstance { inner: build_ecc(&seed) })
}

#[pymodule]
fn pohpath_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(read_instance, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(gen_gnp, m)?)?;
    m.add_function(wrap_pyfunction!(gen_mcp_d2p, m)?)?;
    m.add_function(wrap_pyfunction!(gen_mcp_d2c, m)?)?;
    m.add_function(wrap_pyfunction!(gen_ecc, m)?)?;
    Ok(())
}
