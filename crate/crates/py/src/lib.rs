//! Python bindings. Reports, classifications and certificates cross the
//! boundary as plain dicts (via their JSON form).

use std::time::Duration;

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use gnlset_core::constructions::{gen_named, ConstructionSpec, Family};
use gnlset_core::cyclotomic::{ambient_order, ArithOp};
use gnlset_core::document::{set_from_json, set_to_json, OplmReportView};
use gnlset_core::oplm::{assemble, float_solution_dim, solution_space};
use gnlset_core::table1::{run_table1, Grid};
use gnlset_core::verdicts::{self, find_reduction, RuleCertificate, SearchOptions};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Element of the cyclotomic field Q(ζ_N).
#[pyclass(module = "gnlset", frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Cyclotomic(gnlset_core::Cyclotomic);

#[pymethods]
impl Cyclotomic {
    /// Parse a literal such as `"1 + -1*w^2"` in Q(ζ_order).
    #[new]
    fn new(literal: &str, order: u32) -> PyResult<Self> {
        gnlset_core::Cyclotomic::parse_literal(literal, order).map(Cyclotomic).map_err(err)
    }

    /// ζ_order^exponent, embedded in Q(ζ_ambient) (defaults to `order`).
    #[staticmethod]
    #[pyo3(signature = (order, exponent, ambient=None))]
    fn root_of_unity(order: u32, exponent: i64, ambient: Option<u32>) -> PyResult<Self> {
        gnlset_core::root_of_unity(order, exponent, ambient.unwrap_or(order))
            .map(Cyclotomic)
            .map_err(err)
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    fn conj(&self) -> Self {
        Cyclotomic(self.0.conj())
    }

    fn lift(&self, order: u32) -> PyResult<Self> {
        self.0.lift(order).map(Cyclotomic).map_err(err)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __complex__(&self) -> num_complex_shim::Complex {
        let z = self.0.to_complex();
        num_complex_shim::Complex(z.re, z.im)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.arith(other, ArithOp::Add)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.arith(other, ArithOp::Sub)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.arith(other, ArithOp::Mul)
    }

    fn __neg__(&self) -> Self {
        Cyclotomic(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_literal()
    }

    fn __repr__(&self) -> String {
        format!("Cyclotomic({:?}, {})", self.0.to_literal(), self.0.order())
    }
}

impl Cyclotomic {
    fn arith(&self, other: &Self, op: ArithOp) -> PyResult<Self> {
        let order = ambient_order([self.0.order(), other.0.order()]);
        let (a, b) = (self.0.lift(order).map_err(err)?, other.0.lift(order).map_err(err)?);
        gnlset_core::cyclotomic::arith(&a, &b, op).map(Cyclotomic).map_err(err)
    }
}

/// `complex(x)` needs a Python complex; keep the conversion local.
mod num_complex_shim {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    pub struct Complex(pub f64, pub f64);

    impl<'py> IntoPyObject<'py> for Complex {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0, self.1))
        }
    }
}

/// A set of product states over Q(ζ_N).
#[pyclass(module = "gnlset", frozen)]
#[derive(Clone)]
struct StateSet(gnlset_core::StateSet);

#[pymethods]
impl StateSet {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        set_from_json(text).map(StateSet).map_err(err)
    }

    fn to_json(&self) -> String {
        set_to_json(&self.0)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims().to_vec()
    }

    #[getter]
    fn ambient_order(&self) -> u32 {
        self.0.ambient_order()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().iter().map(|s| s.to_string()).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// ⟨a|b⟩ for two labelled states.
    fn inner(&self, a: &str, b: &str) -> PyResult<Cyclotomic> {
        let sa = self.0.state(a).ok_or_else(|| err(format!("no state {a}")))?;
        let sb = self.0.state(b).ok_or_else(|| err(format!("no state {b}")))?;
        sa.inner(sb).map(Cyclotomic).map_err(err)
    }

    fn is_orthogonal(&self) -> bool {
        self.0.check_mutual_orthogonality().is_orthogonal()
    }

    fn subset(&self, labels: Vec<String>) -> PyResult<Self> {
        self.0.subset(&labels).map(StateSet).map_err(err)
    }

    /// Exact measurement report for a party (or merged party group).
    fn party_report<'py>(&self, py: Python<'py>, party_group: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let cs = assemble(&self.0, &party_group).map_err(err)?;
        let r = solution_space(&cs).map_err(err)?;
        to_py(py, &OplmReportView::new(&r))
    }

    /// Nullspace dimension from the floating-point backend.
    #[pyo3(signature = (party_group, tolerance=1e-9))]
    fn float_solution_dim(&self, party_group: Vec<usize>, tolerance: f64) -> PyResult<usize> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(PyZeroDivisionError::new_err("tolerance must be positive"));
        }
        let cs = assemble(&self.0, &party_group).map_err(err)?;
        Ok(float_solution_dim(&cs, tolerance))
    }

    fn find_reduction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &find_reduction(&self.0))
    }

    #[pyo3(signature = (budget_ms=None, grouped_rule=false))]
    fn classify<'py>(&self, py: Python<'py>, budget_ms: Option<u64>, grouped_rule: bool) -> PyResult<Bound<'py, PyAny>> {
        let mut opts = SearchOptions::from_env();
        if let Some(ms) = budget_ms {
            opts.budget = Some(Duration::from_millis(ms));
        }
        opts.grouped_rule = grouped_rule;
        let c = py
            .detach(|| verdicts::classify(&self.0, &opts))
            .map_err(err)?;
        to_py(py, &c)
    }

    /// Re-validates a certificate (dict or JSON string); raises on failure.
    fn verify_certificate(&self, py: Python<'_>, certificate: &Bound<'_, PyAny>) -> PyResult<()> {
        let text: String = match certificate.extract::<String>() {
            Ok(s) => s,
            Err(_) => py.import("json")?.call_method1("dumps", (certificate,))?.extract()?,
        };
        let cert: RuleCertificate = serde_json::from_str(&text).map_err(err)?;
        verdicts::verify_certificate(&self.0, &cert).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("StateSet(dims={:?}, states={})", self.0.dims(), self.0.len())
    }
}

/// Generate a set by family name; `dims` may be omitted for fixed families.
#[pyfunction]
#[pyo3(signature = (family, dims=None))]
fn construct(family: &str, dims: Option<Vec<usize>>) -> PyResult<StateSet> {
    let family: Family = family.parse().map_err(err)?;
    let spec = match dims {
        Some(d) => ConstructionSpec::new(family, d),
        None => ConstructionSpec::fixed(family),
    };
    gen_named(&spec).map(StateSet).map_err(err)
}

#[pyfunction]
fn families() -> Vec<&'static str> {
    Family::ALL.iter().map(|f| f.name()).collect()
}

/// Runs the regression grid; returns the per-cell results.
#[pyfunction]
#[pyo3(signature = (grid="small"))]
fn table1<'py>(py: Python<'py>, grid: &str) -> PyResult<Bound<'py, PyAny>> {
    let grid: Grid = grid.parse().map_err(err)?;
    let report = py.detach(|| run_table1(grid, &SearchOptions::default()));
    to_py(py, &report)
}

#[pymodule]
fn gnlset(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Cyclotomic>()?;
    m.add_class::<StateSet>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    Ok(())
}
