//! Python bindings: job documents in, JSON text out.

use std::collections::BTreeMap;

use dforge_core::cli::{self, Options};
use dforge_core::error::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(dforge, ParseError, PyValueError);
create_exception!(dforge, DomainError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { pos, msg } => ParseError::new_err(format!("position {pos}: {msg}")),
        other => DomainError::new_err(other.to_string()),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json output")
}

/// A parsed job document.
#[pyclass(unsendable, module = "dforge")]
struct Workspace {
    inner: cli::Workspace,
    seed: u64,
}

#[pymethods]
impl Workspace {
    #[new]
    #[pyo3(signature = (document, seed = 0))]
    fn new(document: &str, seed: u64) -> PyResult<Self> {
        let doc = cli::parse_document(document).map_err(to_py)?;
        let inner = cli::Workspace::load(doc, seed).map_err(to_py)?;
        Ok(Workspace { inner, seed })
    }

    /// Run a command and return its JSON report.
    #[pyo3(signature = (command, certify_bound = None, jobs = 1))]
    fn run(&self, command: &str, certify_bound: Option<usize>, jobs: usize) -> PyResult<String> {
        let opts = Options {
            seed: self.seed,
            certify_bound,
            jobs: jobs.max(1),
        };
        cli::run_command(command, &self.inner, &opts)
            .map(|v| pretty(&v))
            .map_err(to_py)
    }

    /// phi_T for every module, in canonical text form.
    fn modules(&self) -> BTreeMap<String, String> {
        self.inner
            .modules
            .iter()
            .map(|(n, m)| (n.clone(), m.to_text()))
            .collect()
    }

    fn j_invariant(&self, module: &str) -> PyResult<String> {
        let phi = self.inner.module(module).map_err(to_py)?;
        let j = phi.j_invariant().map_err(to_py)?;
        Ok(self.inner.ring.field().fmt_elem(&j))
    }

    fn degree(&self, isogeny: &str) -> PyResult<String> {
        let iso = self.inner.isogeny(isogeny).map_err(to_py)?;
        let d = iso.degree().map_err(to_py)?;
        Ok(d.deg.to_text(&self.inner.a))
    }

    fn dual(&self, isogeny: &str) -> PyResult<String> {
        let iso = self.inner.isogeny(isogeny).map_err(to_py)?;
        let d = iso.dual().map_err(to_py)?;
        Ok(self.inner.ring.fmt_skew(d.mu()))
    }

    /// The document with every object printed canonically.
    fn document(&self) -> String {
        serde_json::to_string_pretty(&self.inner.to_document()).expect("json output")
    }
}

/// The quadratic example report for an odd prime power q.
#[pyfunction]
#[pyo3(signature = (q = 3, certify_bound = None))]
fn example35(q: u64, certify_bound: Option<usize>) -> PyResult<String> {
    let opts = Options {
        certify_bound,
        ..Options::default()
    };
    cli::cmd_example35(q, &opts)
        .map(|v| pretty(&v))
        .map_err(to_py)
}

#[pymodule]
fn dforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Workspace>()?;
    m.add_function(wrap_pyfunction!(example35, m)?)?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("COMMANDS", cli::COMMANDS.to_vec())?;
    Ok(())
}
