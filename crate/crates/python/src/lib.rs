#![allow(clippy::useless_conversion)]

use biharm_verify::io::parser::{parse_poly, parse_ratfunc};
use biharm_verify::io::printer::print_canonical;
use biharm_verify::io::report::{emit_report, Format, ReportOptions};
use biharm_verify::realroots::{self, UniPoly};
use biharm_verify::verify::run_all;
use biharm_verify::{Corpus, RunConfig};
use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn load(corpus: Option<&str>) -> PyResult<Corpus> {
    match corpus {
        Some(dir) => Corpus::load_dir(dir),
        None => Corpus::embedded(),
    }
    .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs the selected steps and returns the report as a JSON string.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (step=None, filter=None, include_extended=false, time_limit=120, term_cap=2_000_000, corpus=None, timings=false))]
fn run(
    py: Python<'_>,
    step: Option<String>,
    filter: Option<String>,
    include_extended: bool,
    time_limit: u64,
    term_cap: usize,
    corpus: Option<&str>,
    timings: bool,
) -> PyResult<String> {
    let corpus = load(corpus)?;
    if let Some(id) = &step {
        if corpus.step(id).is_none() {
            return Err(PyValueError::new_err(format!("no step with id {id}")));
        }
    }
    let config = RunConfig {
        filter,
        step,
        include_extended,
        time_limit,
        term_cap,
        jobs: 1,
    };
    let results = py.allow_threads(|| run_all(&corpus, &config));
    Ok(emit_report(&results, Format::Json, ReportOptions { timings }))
}

/// `(id, kind, anchor)` for every registered step.
#[pyfunction]
#[pyo3(signature = (corpus=None))]
fn list_steps(corpus: Option<&str>) -> PyResult<Vec<(String, String, String)>> {
    let corpus = load(corpus)?;
    Ok(corpus
        .steps
        .iter()
        .map(|s| (s.id.clone(), s.kind.as_str().to_string(), s.anchor.clone()))
        .collect())
}

/// Canonical form of a polynomial over the corpus symbols.
#[pyfunction]
fn canonical(text: &str) -> PyResult<String> {
    let corpus = load(None)?;
    let p = parse_poly(text, &corpus.table).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(print_canonical(&p, &corpus.table))
}

/// Reduced form of a rational function over the corpus symbols.
#[pyfunction]
fn simplify(text: &str) -> PyResult<String> {
    let corpus = load(None)?;
    let r = parse_ratfunc(text, &corpus.table).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(r.render(&corpus.table))
}

/// Distinct real roots of the polynomial with integer coefficients
/// `coeffs[i] * x^i`.
#[pyfunction]
fn count_real_roots(coeffs: Vec<BigInt>) -> PyResult<usize> {
    let p = UniPoly::new(coeffs.into_iter().map(Into::into).collect());
    realroots::count_real_roots(&p).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "biharm_verify")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(list_steps, m)?)?;
    m.add_function(wrap_pyfunction!(canonical, m)?)?;
    m.add_function(wrap_pyfunction!(simplify, m)?)?;
    m.add_function(wrap_pyfunction!(count_real_roots, m)?)?;
    Ok(())
}
