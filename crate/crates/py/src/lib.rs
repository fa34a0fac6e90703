//! Python bindings: `import gck`.
//!
//! Tensors cross the boundary as strings: polynomials in the chart's
//! coordinates, 2-forms and bivectors as `{"x^y": "..."}` dicts, and
//! endomorphisms as lists of rows.

use std::collections::BTreeMap;

use gck_core::courant::{self, eigenspace_check, integrable_on_basis};
use gck_core::format::{form_from_map, form_to_map};
use gck_core::fuzz::run_fuzz;
use gck_core::hitchin::{check_hitchin_pair, gcs_to_hitchin, hitchin_to_gcs, twist};
use gck_core::ratpoly::parse_rational;
use gck_core::suite::{self, ConvertOp, Suite};
use gck_core::{
    Bivector, Chart, CheckReport, EndoField, Error, GeneralizedStructure, HitchinPair, PolyMatrix, RatPoly,
    StructureFile,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(gck, GckError, PyException, "A mathematical precondition failed.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. }
        | Error::Resolution(_)
        | Error::UnknownCoordinate(_)
        | Error::DimensionMismatch { .. }
        | Error::ChartMismatch(_)
        | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        _ => GckError::new_err(e.to_string()),
    }
}

fn chart_of(coords: Vec<String>) -> PyResult<Chart> {
    Chart::new(&coords).map_err(to_py)
}

fn endo_of(chart: &Chart, rows: &[Vec<String>]) -> PyResult<EndoField> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| chart.poly(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    EndoField::new(chart, PolyMatrix::from_rows(chart.vars(), rows).map_err(to_py)?).map_err(to_py)
}

fn rows_of(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(RatPoly::to_string).collect()).collect()
}

/// Outcome of a check: verdict, per-condition results and a witness.
#[pyclass(name = "Report", frozen)]
pub struct PyReport(CheckReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn certified(&self) -> bool {
        self.0.certified()
    }

    /// `(label, passed)` in check order.
    #[getter]
    fn conditions(&self) -> Vec<(String, bool)> {
        self.0.conditions.iter().map(|c| (c.label.clone(), c.passed)).collect()
    }

    fn failed_labels(&self) -> Vec<String> {
        self.0.failed_labels().into_iter().map(String::from).collect()
    }

    /// `(label, {coord: value})` for a refuted check.
    #[getter]
    fn witness(&self) -> Option<(String, BTreeMap<String, String>)> {
        self.0.witness.as_ref().map(|w| {
            let point = w.point.iter().map(|(c, v)| (c.clone(), gck_core::ratpoly::format_rational(v))).collect();
            (w.label.clone(), point)
        })
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn __bool__(&self) -> bool {
        self.0.certified()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Report {} {:?}>", self.0.name, self.0.verdict)
    }
}

/// A generalized complex structure candidate `(a, π, σ)` on a chart.
#[pyclass(name = "Gcs", frozen)]
pub struct PyGcs(GeneralizedStructure);

#[pymethods]
impl PyGcs {
    #[new]
    fn new(coords: Vec<String>, a: Vec<Vec<String>>, pi: BTreeMap<String, String>, sigma: BTreeMap<String, String>) -> PyResult<Self> {
        let chart = chart_of(coords)?;
        let a = endo_of(&chart, &a)?;
        let pi = Bivector::from_form(&form_from_map(&chart, 2, &pi).map_err(to_py)?);
        let sigma = form_from_map(&chart, 2, &sigma).map_err(to_py)?;
        GeneralizedStructure::new(a, pi, sigma).map(PyGcs).map_err(to_py)
    }

    #[getter]
    fn coords(&self) -> Vec<String> {
        self.0.chart().coords().to_vec()
    }

    #[getter]
    fn a(&self) -> Vec<Vec<String>> {
        rows_of(self.0.a.matrix())
    }

    #[getter]
    fn pi(&self) -> BTreeMap<String, String> {
        form_to_map(&self.0.pi.as_form())
    }

    #[getter]
    fn sigma(&self) -> BTreeMap<String, String> {
        form_to_map(&self.0.sigma)
    }

    /// The full `2n × 2n` matrix of J.
    fn j_matrix(&self) -> Vec<Vec<String>> {
        rows_of(&self.0.j_matrix())
    }

    /// Conditions (C1)-(C4).
    fn check(&self) -> PyResult<PyReport> {
        courant::check_gcs(&self.0).map(PyReport).map_err(to_py)
    }

    /// The Courant-bracket defect on coordinate basis pairs.
    fn check_on_basis(&self) -> PyResult<PyReport> {
        integrable_on_basis(&self.0).map(PyReport).map_err(to_py)
    }

    /// Eigenspace check at a rational point, given as strings like `"1/2"`.
    fn eigenspace(&self, point: Vec<String>) -> PyResult<PyReport> {
        let point = point.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
        eigenspace_check(&self.0, &point).map(PyReport).map_err(to_py)
    }

    fn opposite(&self) -> Self {
        PyGcs(courant::opposite(&self.0))
    }

    /// B-field transform; B need not be closed.
    fn gauge(&self, b: BTreeMap<String, String>) -> PyResult<Self> {
        let b = form_from_map(self.0.chart(), 2, &b).map_err(to_py)?;
        courant::gauge(&self.0, &b).map(PyGcs).map_err(to_py)
    }

    fn to_hitchin(&self) -> PyResult<PyHitchin> {
        gcs_to_hitchin(&self.0).map(PyHitchin).map_err(to_py)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("<Gcs on ({})>", self.0.chart().coords().join(", "))
    }
}

/// A Hitchin pair candidate `(ω, a)`.
#[pyclass(name = "HitchinPair", frozen)]
pub struct PyHitchin(HitchinPair);

#[pymethods]
impl PyHitchin {
    #[new]
    fn new(coords: Vec<String>, omega: BTreeMap<String, String>, a: Vec<Vec<String>>) -> PyResult<Self> {
        let chart = chart_of(coords)?;
        let omega = form_from_map(&chart, 2, &omega).map_err(to_py)?;
        HitchinPair::new(omega, endo_of(&chart, &a)?).map(PyHitchin).map_err(to_py)
    }

    #[getter]
    fn omega(&self) -> BTreeMap<String, String> {
        form_to_map(&self.0.omega)
    }

    #[getter]
    fn a(&self) -> Vec<Vec<String>> {
        rows_of(self.0.a.matrix())
    }

    fn check(&self) -> PyResult<PyReport> {
        check_hitchin_pair(&self.0).map(PyReport).map_err(to_py)
    }

    fn twist(&self) -> BTreeMap<String, String> {
        form_to_map(&twist(&self.0))
    }

    fn to_gcs(&self) -> PyResult<PyGcs> {
        hitchin_to_gcs(&self.0).map(PyGcs).map_err(to_py)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// A parsed structure file.
#[pyclass(name = "StructureFile", frozen)]
pub struct PyStructureFile(StructureFile);

#[pymethods]
impl PyStructureFile {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        StructureFile::parse(text).map(PyStructureFile).map_err(to_py)
    }

    /// Structure names with their bundle type.
    fn structures(&self) -> BTreeMap<String, String> {
        self.0.structures().iter().map(|(k, b)| (k.clone(), b.kind().to_string())).collect()
    }

    fn check(&self, target: &str, suite: &str) -> PyResult<PyReport> {
        let suite: Suite = suite.parse().map_err(to_py)?;
        suite::run_suite(&self.0, target, suite).map(PyReport).map_err(to_py)
    }

    #[pyo3(signature = (target, op, b=None, force=false))]
    fn convert(&self, target: &str, op: &str, b: Option<&str>, force: bool) -> PyResult<Self> {
        let op: ConvertOp = op.parse().map_err(to_py)?;
        suite::convert(&self.0, target, op, b, force).map(PyStructureFile).map_err(to_py)
    }

    fn gcs(&self, name: &str) -> PyResult<PyGcs> {
        self.0.gcs(name).map(PyGcs).map_err(to_py)
    }

    fn hitchin(&self, name: &str) -> PyResult<PyHitchin> {
        self.0.hitchin(name).map(PyHitchin).map_err(to_py)
    }

    fn __str__(&self) -> PyResult<String> {
        self.0.to_canonical_string().map_err(to_py)
    }
}

/// Canonical form of a polynomial in the given coordinates.
#[pyfunction]
fn parse_poly(text: &str, coords: Vec<String>) -> PyResult<String> {
    Ok(chart_of(coords)?.poly(text).map_err(to_py)?.to_string())
}

/// Run the randomized properties; returns `{property: (passed, failed)}`.
#[pyfunction]
#[pyo3(signature = (seed, dim=2, degree=1, count=50))]
fn fuzz(seed: u64, dim: usize, degree: u32, count: usize) -> PyResult<BTreeMap<String, (usize, usize)>> {
    let summary = run_fuzz(seed, dim, degree, count).map_err(to_py)?;
    Ok(summary.properties.into_iter().map(|t| (t.name, (t.passed, t.failed))).collect())
}

#[pymodule]
fn gck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GckError", m.py().get_type::<GckError>())?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyGcs>()?;
    m.add_class::<PyHitchin>()?;
    m.add_class::<PyStructureFile>()?;
    m.add_function(wrap_pyfunction!(parse_poly, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    Ok(())
}
