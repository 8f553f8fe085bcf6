//! Python bindings. Vectors are passed as `(origin, end)` label tuples.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use tgeom::linear::{SolveOptions, SurveyOptions};
use tgeom::{Coefficients, GridSpec, PointId, Vector};

create_exception!(tgeom, TgeomError, PyValueError, "Invalid σ-space, vector or query.");
create_exception!(
    tgeom,
    LimitError,
    TgeomError,
    "Space too large for an exhaustive search."
);

fn py_err(e: tgeom::Error) -> PyErr {
    match e {
        tgeom::Error::SearchLimitExceeded { .. } | tgeom::Error::OracleLimitExceeded { .. } => {
            LimitError::new_err(e.to_string())
        }
        _ => TgeomError::new_err(e.to_string()),
    }
}

type Pair = (String, String);

fn vector(v: Pair) -> Vector {
    Vector::new(v.0, v.1)
}

fn pair(v: &Vector) -> Pair {
    (v.origin.to_string(), v.end.to_string())
}

fn coefficients(alpha: f64, beta: f64) -> PyResult<Coefficients> {
    Coefficients::new(alpha, beta).map_err(py_err)
}

/// A finite set of labelled points with a world function σ.
#[pyclass(frozen, module = "tgeom")]
pub struct SigmaSpace {
    inner: tgeom::SigmaSpace,
}

#[pymethods]
impl SigmaSpace {
    /// Build from `(p, q, value)` entries, one per ordered pair of distinct
    /// points. Use `parse` for the file format, which mirrors symmetric tables.
    #[staticmethod]
    #[pyo3(signature = (labels, entries, tolerance=None))]
    fn from_table(labels: Vec<String>, entries: Vec<(String, String, f64)>, tolerance: Option<f64>) -> PyResult<Self> {
        let inner = match tolerance {
            Some(eps) => tgeom::SigmaSpace::from_table_with_tolerance(&labels, entries, eps),
            None => tgeom::SigmaSpace::from_table(&labels, entries),
        }
        .map_err(py_err)?;
        Ok(SigmaSpace { inner })
    }

    #[staticmethod]
    fn from_coordinates(labels: Vec<String>, coordinates: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = tgeom::SigmaSpace::from_coordinates(&labels, &coordinates).map_err(py_err)?;
        Ok(SigmaSpace { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (dim, size, deleted=Vec::new()))]
    fn grid(dim: usize, size: usize, deleted: Vec<Vec<usize>>) -> PyResult<Self> {
        let spec = deleted.into_iter().fold(GridSpec::new(dim, size), GridSpec::delete);
        let inner = tgeom::SigmaSpace::grid(&spec).map_err(py_err)?;
        Ok(SigmaSpace { inner })
    }

    /// Parse the text table format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = tgeom::table_file::parse_space(text).map_err(py_err)?;
        Ok(SigmaSpace { inner })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let inner = tgeom::table_file::read_space(path).map_err(py_err)?;
        Ok(SigmaSpace { inner })
    }

    fn to_text(&self) -> String {
        tgeom::table_file::write(&self.inner)
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        tgeom::table_file::write_space(&self.inner, path).map_err(py_err)
    }

    fn with_tolerance(&self, tolerance: f64) -> PyResult<Self> {
        let inner = self.inner.clone().with_tolerance(tolerance).map_err(py_err)?;
        Ok(SigmaSpace { inner })
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance()
    }

    #[getter]
    fn points(&self) -> Vec<String> {
        self.inner.points().iter().map(PointId::to_string).collect()
    }

    /// Coordinate dimension, or `None` for table-backed spaces.
    #[getter]
    fn dimension(&self) -> Option<usize> {
        self.inner.dimension()
    }

    fn sigma(&self, p: &str, q: &str) -> PyResult<f64> {
        self.inner.sigma_between(p, q).map_err(py_err)
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    /// Row-major `|Ω|×|Ω|` matrix of σ values.
    fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.inner.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.inner.sigma(i, j)).collect())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let kind = if self.inner.is_table_backed() {
            "table"
        } else {
            "coordinates"
        };
        format!(
            "SigmaSpace({} points, {kind}, tolerance={:e})",
            self.inner.len(),
            self.inner.tolerance()
        )
    }
}

/// Outcome of solving `S = αv + βw`.
#[pyclass(frozen, get_all, module = "tgeom")]
pub struct CombinationResult {
    /// All solution vectors, sorted.
    solutions: Vec<Pair>,
    /// Name of the always-defined case covering the query, if any.
    guaranteed: Option<String>,
    representative: Option<Pair>,
}

#[pymethods]
impl CombinationResult {
    fn is_defined(&self) -> bool {
        !self.solutions.is_empty()
    }

    fn __repr__(&self) -> String {
        format!(
            "CombinationResult(solutions={}, guaranteed={:?}, representative={:?})",
            self.solutions.len(),
            self.guaranteed,
            self.representative
        )
    }
}

#[pyfunction]
fn scalar_product(space: &SigmaSpace, v: Pair, w: Pair) -> PyResult<f64> {
    tgeom::scalar_product(&space.inner, &vector(v), &vector(w)).map_err(py_err)
}

#[pyfunction]
fn norm_squared(space: &SigmaSpace, v: Pair) -> PyResult<f64> {
    tgeom::norm_squared(&space.inner, &vector(v)).map_err(py_err)
}

/// Returns `(equivalent, counterexample)`; the counterexample is
/// `(q0, q1, slot, lhs, rhs)` or `None`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn equivalent(space: &SigmaSpace, v: Pair, w: Pair) -> PyResult<(bool, Option<(String, String, String, f64, f64)>)> {
    let witness = tgeom::equivalent(&space.inner, &vector(v), &vector(w)).map_err(py_err)?;
    let counter = witness
        .counterexample
        .map(|c| (c.q0.to_string(), c.q1.to_string(), c.slot.to_string(), c.lhs, c.rhs));
    Ok((witness.equivalent, counter))
}

#[pyfunction]
fn equivalence_classes(space: &SigmaSpace) -> Vec<Vec<Pair>> {
    let partition = tgeom::equivalence_classes(&space.inner);
    partition.classes.iter().map(|c| c.iter().map(pair).collect()).collect()
}

#[pyfunction]
fn negate(v: Pair) -> Pair {
    pair(&tgeom::negate(&vector(v)))
}

#[pyfunction]
fn chain_sum(v: Pair, w: Pair) -> PyResult<Pair> {
    tgeom::chain_sum(&vector(v), &vector(w))
        .map(|s| pair(&s))
        .map_err(py_err)
}

#[pyfunction]
fn guaranteed_case(space: &SigmaSpace, alpha: f64, beta: f64, v: Pair, w: Pair) -> PyResult<Option<String>> {
    let case =
        tgeom::guaranteed_case(&space.inner, coefficients(alpha, beta)?, &vector(v), &vector(w)).map_err(py_err)?;
    Ok(case.map(|c| c.to_string()))
}

#[pyfunction]
fn construct_guaranteed(space: &SigmaSpace, alpha: f64, beta: f64, v: Pair, w: Pair) -> PyResult<Pair> {
    let s = tgeom::construct_guaranteed(&space.inner, coefficients(alpha, beta)?, &vector(v), &vector(w))
        .map_err(py_err)?;
    Ok(pair(&s))
}

#[pyfunction]
#[pyo3(signature = (space, alpha, beta, v, w, limit=tgeom::linear::SEARCH_LIMIT, force=false))]
fn solve_combination(
    space: &SigmaSpace,
    alpha: f64,
    beta: f64,
    v: Pair,
    w: Pair,
    limit: usize,
    force: bool,
) -> PyResult<CombinationResult> {
    let opts = SolveOptions { limit, force };
    let c = coefficients(alpha, beta)?;
    let r = tgeom::linear::solve_combination_with(&space.inner, c, &vector(v), &vector(w), &opts).map_err(py_err)?;
    Ok(CombinationResult {
        solutions: r.solutions.iter().map(pair).collect(),
        guaranteed: r.guaranteed.map(|c| c.to_string()),
        representative: r.representative.as_ref().map(pair),
    })
}

/// Returns `(checked, symmetry_checked, violations)` with each violation as
/// `(identity, points, lhs, rhs)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn verify_identities(space: &SigmaSpace) -> PyResult<(u64, bool, Vec<(String, Vec<String>, f64, f64)>)> {
    let report = tgeom::verify_identities(&space.inner).map_err(py_err)?;
    let violations = report
        .violations
        .iter()
        .map(|v| {
            (
                v.identity.to_string(),
                v.points.iter().map(PointId::to_string).collect(),
                v.lhs,
                v.rhs,
            )
        })
        .collect();
    Ok((report.checked, report.symmetry_checked, violations))
}

/// Survey as CSV text, one row per `(α, β)` pair.
#[pyfunction]
#[pyo3(signature = (space, coefficients, restrict_to=None, limit=tgeom::linear::SURVEY_LIMIT, force=false))]
fn survey(
    space: &SigmaSpace,
    coefficients: Vec<(f64, f64)>,
    restrict_to: Option<Vec<String>>,
    limit: usize,
    force: bool,
) -> PyResult<String> {
    let coeffs = coefficients
        .into_iter()
        .map(|(a, b)| Coefficients::new(a, b))
        .collect::<tgeom::Result<Vec<_>>>()
        .map_err(py_err)?;
    let opts = SurveyOptions {
        limit,
        force,
        restrict_to: restrict_to.map(|r| r.into_iter().map(PointId::from).collect()),
    };
    let report = tgeom::linear::survey_linearity_with(&space.inner, &coeffs, &opts).map_err(py_err)?;
    Ok(report.to_csv())
}

#[pymodule]
#[pyo3(name = "tgeom")]
fn tgeom_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TgeomError", m.py().get_type::<TgeomError>())?;
    m.add("LimitError", m.py().get_type::<LimitError>())?;
    m.add_class::<SigmaSpace>()?;
    m.add_class::<CombinationResult>()?;
    m.add_function(wrap_pyfunction!(scalar_product, m)?)?;
    m.add_function(wrap_pyfunction!(norm_squared, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_classes, m)?)?;
    m.add_function(wrap_pyfunction!(negate, m)?)?;
    m.add_function(wrap_pyfunction!(chain_sum, m)?)?;
    m.add_function(wrap_pyfunction!(guaranteed_case, m)?)?;
    m.add_function(wrap_pyfunction!(construct_guaranteed, m)?)?;
    m.add_function(wrap_pyfunction!(solve_combination, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    m.add_function(wrap_pyfunction!(survey, m)?)?;
    m.add("SEARCH_LIMIT", tgeom::linear::SEARCH_LIMIT)?;
    m.add("DEFAULT_TOLERANCE", tgeom::DEFAULT_TOLERANCE)?;
    Ok(())
}
