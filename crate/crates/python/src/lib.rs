//! Python bindings: model bundles, exact operators, the verification suite
//! and the oscillator spectrum.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use superlax::model::Item;
use superlax::verify::{self, spectrum, Mode, SuiteOptions};
use superlax::Error;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Differential operator with fermionic words and exact rational coefficients.
#[pyclass(name = "Operator", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyOperator(superlax::Operator);

#[pymethods]
impl PyOperator {
    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Operator(n={}, chart={}, terms={})", self.0.n(), self.0.chart().name(), self.0.len())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    fn commutator(&self, other: &Self) -> Self {
        Self(self.0.commutator(&other.0))
    }

    fn anticommutator(&self, other: &Self) -> Self {
        Self(self.0.anticommutator(&other.0))
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// One model at a fixed particle number, with its lazily built operators.
#[pyclass(name = "Model", frozen)]
struct PyModel {
    bundle: superlax::Bundle,
}

impl PyModel {
    fn spec(&self) -> superlax::ModelSpec {
        *self.bundle.spec()
    }
}

#[pymethods]
impl PyModel {
    #[new]
    fn new(model: &str, n: usize) -> PyResult<Self> {
        let model: superlax::Model = model.parse().map_err(py_err)?;
        let spec = superlax::ModelSpec::new(model, n).map_err(py_err)?;
        Ok(Self { bundle: superlax::Bundle::new(spec) })
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, {})", self.spec().model.name(), self.spec().n)
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.spec().model.name()
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec().n
    }

    /// Ground-energy constant in canonical text.
    fn e0(&self) -> String {
        self.spec().e0().to_text()
    }

    fn keys(&self) -> Vec<String> {
        self.bundle.keys()
    }

    /// Operator for `key`; matrices raise `ValueError`.
    fn op(&self, key: &str) -> PyResult<PyOperator> {
        self.bundle.op(key).map(PyOperator).map_err(py_err)
    }

    /// Canonical text of any bundle entry, operator or matrix.
    fn text(&self, key: &str) -> PyResult<String> {
        let item = self.bundle.get(key).map_err(py_err)?;
        Ok(match &*item {
            Item::Op(op) => op.to_text(),
            Item::Mat(m) => m.to_text(),
        })
    }

    fn parse(&self, text: &str) -> PyResult<PyOperator> {
        let spec = self.spec();
        superlax::Operator::parse(text, spec.chart(), spec.n).map(PyOperator).map_err(py_err)
    }

    /// Run the identity catalog and return the report as JSON.
    #[pyo3(signature = (filter=None, mode=None, jobs=None))]
    fn verify(&self, filter: Option<String>, mode: Option<&str>, jobs: Option<usize>) -> PyResult<String> {
        let mode = mode.map(|m| m.parse::<Mode>().map_err(py_err)).transpose()?;
        let report = verify::run_suite(self.spec(), &SuiteOptions { filter, mode, jobs }).map_err(py_err)?;
        Ok(report.to_json())
    }

    /// Representation matrices and Dunkl blocks as JSON.
    fn export(&self) -> PyResult<String> {
        let value = superlax::jacobi::export_json(&self.spec()).map_err(py_err)?;
        Ok(serde_json::to_string_pretty(&value).expect("export serializes"))
    }
}

#[pyfunction]
fn catalog<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
    PyList::new(py, verify::catalog().iter().map(|id| (id.id, id.statement)))
}

#[pyfunction]
fn spectrum_json(n: usize, depth: u32) -> PyResult<String> {
    let s = spectrum::spectrum(n, depth).map_err(py_err)?;
    Ok(serde_json::to_string_pretty(&s).expect("spectrum serializes"))
}

#[pymodule]
fn superlax_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_json, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
