//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! element sets as sorted lists of ids.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use medalg::actions;
use medalg::independence::{FunctionFamily, SetSystem};
use medalg::variation::{self, FamilyMode};
use medalg::walls::HellyOutcome;
use medalg::{ElementSet, Rational, RationalFunctionTable};

create_exception!(medalg, RefusedError, PyRuntimeError, "A size limit refused the computation.");

fn py_err(e: medalg::Error) -> PyErr {
    match e {
        medalg::Error::Refused { .. } => RefusedError::new_err(e.to_string()),
        medalg::Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        medalg::Error::Malformed(_) | medalg::Error::Precondition(_) => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

fn fractions<'py>(py: Python<'py>, f: &RationalFunctionTable) -> PyResult<Vec<Bound<'py, PyAny>>> {
    f.values().iter().map(|r| fraction(py, r)).collect()
}

/// Accepts ints and `Fraction`s alike: both expose `numerator` and `denominator`.
fn table(values: &[Bound<'_, PyAny>]) -> PyResult<RationalFunctionTable> {
    let pairs = values
        .iter()
        .map(|v| Ok((v.getattr("numerator")?.extract::<BigInt>()?, v.getattr("denominator")?.extract::<BigInt>()?)))
        .collect::<PyResult<Vec<_>>>()?;
    RationalFunctionTable::from_pairs(&pairs).map_err(py_err)
}

fn set(n: usize, members: &[usize]) -> PyResult<ElementSet> {
    if let Some(&x) = members.iter().find(|&&x| x >= n) {
        return Err(PyValueError::new_err(format!("element {x} is not below {n}")));
    }
    Ok(ElementSet::from_members(n, members.iter().copied()))
}

#[pyclass(name = "MedianAlgebra", module = "medalg", frozen)]
struct PyAlgebra(medalg::MedianAlgebra);

#[pymethods]
impl PyAlgebra {
    #[staticmethod]
    fn hypercube(d: usize) -> PyResult<Self> {
        medalg::MedianAlgebra::hypercube(d).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn chain(k: usize) -> PyResult<Self> {
        medalg::MedianAlgebra::chain(k).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn grid(dims: Vec<usize>) -> PyResult<Self> {
        medalg::MedianAlgebra::grid(&dims).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn wedge(dims: Vec<usize>) -> PyResult<Self> {
        medalg::MedianAlgebra::wedge(&dims).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn product(a: &PyAlgebra, b: &PyAlgebra) -> PyResult<Self> {
        medalg::MedianAlgebra::product(&a.0, &b.0).map(Self).map_err(py_err)
    }

    /// Row-major `n**3` table: entry `(x*n + y)*n + z` is `m(x, y, z)`. Axioms are not checked.
    #[staticmethod]
    fn from_table(n: usize, table: Vec<usize>) -> PyResult<Self> {
        medalg::MedianAlgebra::from_table(n, &table).map(Self).map_err(py_err)
    }

    /// Median closure of cube vertices given as bit masks.
    #[staticmethod]
    fn closure(d: usize, vertices: Vec<u64>) -> PyResult<Self> {
        medalg::generators::cube_closure(d, &vertices).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn random_closure(d: usize, points: usize, seed: u64) -> PyResult<Self> {
        medalg::generators::random_subalgebra(d, points, seed).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_graph(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        medalg::generators::import_median_graph(n, &edges).map(Self).map_err(py_err)
    }

    /// Table or generator JSON, as read by the command-line tool.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        medalg::io::parse_algebra(text).map(Self).map_err(py_err)
    }

    fn to_json(&self) -> PyResult<String> {
        let v = medalg::io::algebra_table_json(&self.0).map_err(py_err)?;
        Ok(v.to_string())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!("MedianAlgebra(n={}, provenance={:?})", self.0.n(), self.0.provenance())
    }

    fn median(&self, x: usize, y: usize, z: usize) -> PyResult<usize> {
        let n = self.0.n();
        if x >= n || y >= n || z >= n {
            return Err(PyValueError::new_err(format!("ids must be below {n}")));
        }
        Ok(self.0.median(x, y, z))
    }

    /// `(passed, axiom, witness)`; the last two are `None` on success.
    fn verify(&self) -> (bool, Option<String>, Option<Vec<usize>>) {
        let r = self.0.verify_axioms();
        match r.failure {
            None => (true, None, None),
            Some(f) => (false, Some(f.axiom.to_string()), Some(f.witness)),
        }
    }

    fn interval(&self, x: usize, y: usize) -> PyResult<Vec<usize>> {
        self.0.checked_interval(x, y).map(|s| s.to_vec()).map_err(py_err)
    }

    fn is_convex(&self, members: Vec<usize>) -> PyResult<bool> {
        Ok(self.0.is_convex(&set(self.0.n(), &members)?))
    }

    fn convex_hull(&self, members: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.0.convex_hull(&set(self.0.n(), &members)?).to_vec())
    }

    fn subalgebra_closure(&self, members: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.0.subalgebra_closure(&set(self.0.n(), &members)?).to_vec())
    }

    fn walls(&self) -> PyWalls {
        PyWalls(medalg::WallSystem::new(&self.0))
    }

    /// The automorphism group as a sorted list of permutations.
    fn automorphisms(&self) -> PyResult<Vec<Vec<usize>>> {
        let g = actions::automorphisms(&self.0).map_err(py_err)?;
        Ok(g.elements().map_or_else(|| g.generators().to_vec(), <[_]>::to_vec))
    }

    /// Every median-preserving map into the chain `0 < 1/(m-1) < .. < 1`.
    fn mp_maps<'py>(&self, py: Python<'py>, m: usize) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let fam = FunctionFamily::all_mp_maps(&self.0, m).map_err(py_err)?;
        fam.functions().iter().map(|f| fractions(py, f)).collect()
    }

    fn is_mp(&self, values: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        table(&values)?.is_mp(&self.0).map_err(py_err)
    }
}

#[pyclass(name = "WallSystem", module = "medalg", frozen)]
struct PyWalls(medalg::WallSystem);

#[pymethods]
impl PyWalls {
    #[new]
    fn new(algebra: &PyAlgebra) -> Self {
        PyWalls(medalg::WallSystem::new(&algebra.0))
    }

    #[getter]
    fn halfspaces(&self) -> Vec<Vec<usize>> {
        self.0.halfspaces().iter().map(ElementSet::to_vec).collect()
    }

    /// Pairs of complementary halfspace indices.
    #[getter]
    fn walls(&self) -> Vec<(usize, usize)> {
        self.0.wall_indices().to_vec()
    }

    #[getter]
    fn crossing_edges(&self) -> Vec<(usize, usize)> {
        self.0.crossing_edges()
    }

    fn rank(&self) -> usize {
        self.0.rank_via_crossing()
    }

    fn rank_via_embedding(&self) -> PyResult<usize> {
        self.0.max_embedding_rank().map_err(py_err)
    }

    /// `(wall index, side holding c1, side holding c2)`.
    fn separate(&self, c1: Vec<usize>, c2: Vec<usize>) -> PyResult<(usize, Vec<usize>, Vec<usize>)> {
        let n = self.0.algebra().n();
        let s = self.0.kakutani_separate(&set(n, &c1)?, &set(n, &c2)?).map_err(py_err)?;
        let (a, b) = if s.first_in_side0 {
            (s.wall.side0, s.wall.side1)
        } else {
            (s.wall.side1, s.wall.side0)
        };
        Ok((s.wall_index, a.to_vec(), b.to_vec()))
    }

    /// Least common point, or `None` when some pair is disjoint.
    fn helly(&self, sets: Vec<Vec<usize>>) -> PyResult<Option<usize>> {
        let n = self.0.algebra().n();
        let sets = sets.iter().map(|s| set(n, s)).collect::<PyResult<Vec<_>>>()?;
        Ok(match self.0.helly_check(&sets).map_err(py_err)? {
            HellyOutcome::CommonPoint(p) => Some(p),
            HellyOutcome::DisjointPair(..) => None,
        })
    }

    /// For each element, the indices of the halfspaces containing it.
    fn roller(&self) -> Vec<Vec<usize>> {
        self.0.roller_embedding().vectors.iter().map(ElementSet::to_vec).collect()
    }
}

fn set_system(ground: usize, sets: Vec<Vec<usize>>) -> PyResult<SetSystem> {
    SetSystem::from_members(ground, &sets).map_err(py_err)
}

/// `(ind, witness)` for a family of subsets of `range(ground)`.
#[pyfunction]
fn ind(ground: usize, sets: Vec<Vec<usize>>) -> PyResult<(usize, Vec<usize>)> {
    let r = set_system(ground, sets)?.ind();
    Ok((r.ind, r.witness))
}

/// `(vc, shattered set)`; with `dual=True`, of the dual system.
#[pyfunction]
#[pyo3(signature = (ground, sets, dual = false))]
fn vc_dimension(ground: usize, sets: Vec<Vec<usize>>, dual: bool) -> PyResult<(usize, Vec<usize>)> {
    let s = set_system(ground, sets)?;
    let r = if dual {
        s.dual().system.vc_dimension()
    } else {
        s.vc_dimension()
    }
    .map_err(py_err)?;
    Ok((r.vc, r.witness))
}

/// `(ind, witness)` for a family of real functions on a common carrier.
#[pyfunction]
fn function_ind(functions: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<(usize, Vec<usize>)> {
    let tables = functions.iter().map(|f| table(f)).collect::<PyResult<Vec<_>>>()?;
    let n = tables.first().map_or(0, RationalFunctionTable::n);
    let r = FunctionFamily::new(n, tables).map_err(py_err)?.ind();
    Ok((r.ind, r.witness))
}

/// Sum of `|f(x) - f(y)|` over adjacent pairs of the whole carrier.
#[pyfunction]
fn edge_variation<'py>(py: Python<'py>, algebra: &PyAlgebra, values: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let full = ElementSet::full(algebra.0.n());
    let v = variation::edge_sum_variation(&algebra.0, &table(&values)?, &full).map_err(py_err)?;
    fraction(py, &v)
}

/// Maximum edge-sum variation over all subalgebras.
#[pyfunction]
fn total_variation<'py>(py: Python<'py>, algebra: &PyAlgebra, values: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
    let r = variation::total_variation_upsilon(&algebra.0, &table(&values)?).map_err(py_err)?;
    fraction(py, &r.value)
}

/// Maximum variation along nested halfspace chains; `axis` restricts a grid to one coordinate.
#[pyfunction]
#[pyo3(signature = (algebra, values, axis = None))]
fn chain_variation<'py>(
    py: Python<'py>,
    algebra: &PyAlgebra,
    values: Vec<Bound<'py, PyAny>>,
    axis: Option<usize>,
) -> PyResult<(Bound<'py, PyAny>, Vec<usize>)> {
    let ws = medalg::WallSystem::new(&algebra.0);
    let mode = axis.map_or(FamilyMode::All, FamilyMode::Coordinate);
    let family = variation::halfspace_family(&ws, &mode).map_err(py_err)?;
    let r = variation::bv_chain(&ws, &table(&values)?, &family).map_err(py_err)?;
    Ok((fraction(py, &r.value)?, r.transversal))
}

/// The orbit of `values` under the automorphism group.
#[pyfunction]
fn orbit<'py>(py: Python<'py>, algebra: &PyAlgebra, values: Vec<Bound<'py, PyAny>>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    let g = actions::automorphisms(&algebra.0).map_err(py_err)?;
    let fam = actions::orbit_family(&table(&values)?, &g).map_err(py_err)?;
    fam.functions().iter().map(|f| fractions(py, f)).collect()
}

/// Independence number of the orbit of a median-preserving map, against the rank.
#[pyfunction]
fn tameness<'py>(py: Python<'py>, algebra: &PyAlgebra, values: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyDict>> {
    let g = actions::automorphisms(&algebra.0).map_err(py_err)?;
    let ws = medalg::WallSystem::new(&algebra.0);
    let r = actions::orbit_tameness_check(&ws, &table(&values)?, &g).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("orbit_size", r.orbit_size)?;
    d.set_item("ind_orbit", r.ind_orbit)?;
    d.set_item("rank", r.rank)?;
    d.set_item("bounded", r.bounded)?;
    d.set_item("witness", r.witness)?;
    Ok(d)
}

#[pymodule(name = "medalg")]
fn medalg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyWalls>()?;
    m.add("RefusedError", m.py().get_type::<RefusedError>())?;
    m.add_function(wrap_pyfunction!(ind, m)?)?;
    m.add_function(wrap_pyfunction!(vc_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(function_ind, m)?)?;
    m.add_function(wrap_pyfunction!(edge_variation, m)?)?;
    m.add_function(wrap_pyfunction!(total_variation, m)?)?;
    m.add_function(wrap_pyfunction!(chain_variation, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(tameness, m)?)?;
    Ok(())
}
