//! Python bindings: run report jobs and validate bialgebra documents.

use std::path::PathBuf;

use bialg_core::cli::{self, Command, Format, JobSpec, Source};
use bialg_core::{AlgebraicScalar, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    if cli::exit_code(&e) == 2 {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn command(name: &str) -> PyResult<Command> {
    Ok(match name {
        "validate" => Command::Validate,
        "double" => Command::Double,
        "quantize" => Command::Quantize,
        "primitivize" => Command::Primitivize,
        "recognize" => Command::Recognize,
        _ => return Err(PyValueError::new_err(format!("unknown command `{name}`"))),
    })
}

fn format(name: &str) -> PyResult<Format> {
    match name {
        "text" => Ok(Format::Text),
        "json" => Ok(Format::Json),
        _ => Err(PyValueError::new_err(format!("unknown format `{name}`"))),
    }
}

/// Runs one job and returns `(exit_code, report)`; the code is 0 on pass
/// and 1 on fail. Usage errors raise `ValueError`.
#[pyfunction]
#[pyo3(signature = (command_name, builtin=None, input=None, order=cli::DEFAULT_ORDER, degree=None, report_format="text", seed=0))]
fn run(
    command_name: &str,
    builtin: Option<&str>,
    input: Option<PathBuf>,
    order: u32,
    degree: Option<u32>,
    report_format: &str,
    seed: u64,
) -> PyResult<(i32, String)> {
    let source = match (builtin, input) {
        (Some(b), None) => Source::Builtin(b.to_string()),
        (None, Some(p)) => Source::Input(p),
        _ => return Err(PyValueError::new_err("pass exactly one of builtin= or input=")),
    };
    let fmt = format(report_format)?;
    let mut job = JobSpec::new(command(command_name)?, source).with_order(order).with_format(fmt).with_seed(seed);
    if let Some(d) = degree {
        job = job.with_degree(d);
    }
    let report = cli::run(&job).map_err(to_py)?;
    let text = String::from_utf8(cli::render_report(&report, fmt)).expect("reports are UTF-8");
    Ok((report.exit_code(), text))
}

/// `(check, passed)` for each axiom of a JSON bialgebra document.
#[pyfunction]
fn check_document(text: &str) -> PyResult<Vec<(String, bool)>> {
    let b = cli::parse_bialgebra_str(text).map_err(to_py)?;
    Ok(b.reports().into_iter().map(|r| (r.check, r.passed)).collect())
}

/// Canonical text of a scalar in Q(i, √2).
#[pyfunction]
fn normalize_scalar(text: &str) -> PyResult<String> {
    let x: AlgebraicScalar = text.parse().map_err(to_py)?;
    Ok(x.to_string())
}

#[pymodule]
fn bialg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", cli::ENGINE_VERSION)?;
    m.add("SCHEMA_VERSION", cli::SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(check_document, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_scalar, m)?)?;
    Ok(())
}
