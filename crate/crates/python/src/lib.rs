//! Python bindings: exact oracles on count vectors, the SpaceSaving sketch,
//! and the stream-vs-reference tester. Rationals cross the boundary as
//! strings ("0.3" or "3/10") so no precision is lost.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use frecheck_core::model::{self, DecayParams, Element, FrequencyFunction, Tolerances};
use frecheck_core::rat::{format_rat, parse_rat};
use frecheck_core::sampling::ScheduleConfig;
use frecheck_core::spacesaving::CounterTable;
use frecheck_core::tester::{self, Answer, TesterParams};

fn err(e: frecheck_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile(counts: Vec<u64>) -> PyResult<FrequencyFunction> {
    FrequencyFunction::from_counts(counts).map_err(err)
}

fn tols(eps1: &str, eps2: &str) -> PyResult<Tolerances> {
    Tolerances::new(parse_rat(eps1).map_err(err)?, parse_rat(eps2).map_err(err)?).map_err(err)
}

fn elements(ids: Vec<u64>) -> Vec<Element> {
    ids.into_iter().map(Element).collect()
}

/// Non-increasing count vector of a stream of element ids.
#[pyfunction]
fn frequency_of_stream(ids: Vec<u64>) -> Vec<u64> {
    model::frequency_of_stream(&elements(ids)).counts().to_vec()
}

#[pyfunction]
fn frechet_close(f: Vec<u64>, g: Vec<u64>, eps1: &str, eps2: &str) -> PyResult<bool> {
    Ok(model::frechet_close(&profile(f)?, &profile(g)?, &tols(eps1, eps2)?))
}

/// Rank pairs of a closeness certificate, or None when the pair is far.
#[pyfunction]
fn find_coupling(
    f: Vec<u64>,
    g: Vec<u64>,
    eps1: &str,
    eps2: &str,
) -> PyResult<Option<Vec<(u64, u64)>>> {
    Ok(model::find_coupling(&profile(f)?, &profile(g)?, &tols(eps1, eps2)?).map(|c| c.pairs))
}

/// Separating rectangle as (x, y, span_lo, span_hi) with rational corners
/// rendered as strings, or None.
#[pyfunction]
fn find_separating_rectangle(
    f: Vec<u64>,
    g: Vec<u64>,
    eps1: &str,
    eps2: &str,
) -> PyResult<Option<(String, String, u64, u64)>> {
    Ok(
        model::find_separating_rectangle(&profile(f)?, &profile(g)?, &tols(eps1, eps2)?).map(
            |r| {
                let (l, h) = r.span_ranks();
                (format_rat(&r.x), format_rat(&r.y), l, h)
            },
        ),
    )
}

#[pyfunction]
fn is_half_stable(f: Vec<u64>, eps1: &str, eps2: &str) -> PyResult<bool> {
    Ok(model::is_half_stable(&profile(f)?, &tols(eps1, eps2)?))
}

#[pyfunction]
fn is_decreasing(f: Vec<u64>, gamma1: &str, gamma2: &str) -> PyResult<bool> {
    let d = DecayParams::new(parse_rat(gamma1).map_err(err)?, parse_rat(gamma2).map_err(err)?)
        .map_err(err)?;
    Ok(model::is_decreasing(&profile(f)?, &d))
}

#[pyfunction]
fn zipf_profile(n: u64, total: u64, alpha: f64) -> Vec<u64> {
    frecheck_core::generators::zipf_profile(n, total, alpha).counts().to_vec()
}

/// Streaming heavy-hitter sketch with a fixed number of counters.
#[pyclass]
struct SpaceSaving {
    table: CounterTable,
}

#[pymethods]
impl SpaceSaving {
    #[new]
    fn new(capacity: usize) -> PyResult<Self> {
        Ok(Self { table: CounterTable::new(capacity).map_err(err)? })
    }

    fn insert(&mut self, id: u64) {
        self.table.insert(Element(id));
    }

    /// (id, counter, error) triples in decreasing counter order.
    fn entries(&self) -> Vec<(u64, u64, u64)> {
        self.table.entries().into_iter().map(|e| (e.element.0, e.counter, e.error)).collect()
    }

    fn counter_at(&self, rank: u64) -> u64 {
        self.table.counter_at(rank)
    }

    fn min_counter(&self) -> u64 {
        self.table.min_counter()
    }

    fn items_processed(&self) -> u64 {
        self.table.items_processed()
    }
}

/// Run the streaming tester against a reference count vector. Returns
/// ("YES"|"NO", failing_level_or_None).
#[pyfunction]
#[pyo3(signature = (ids, reference, eps1, eps2, delta, seed=0, k_mult=1.0))]
#[allow(clippy::too_many_arguments)]
fn test_reference(
    ids: Vec<u64>,
    reference: Vec<u64>,
    eps1: &str,
    eps2: &str,
    delta: &str,
    seed: u64,
    k_mult: f64,
) -> PyResult<(String, Option<u64>)> {
    let params = TesterParams {
        tol: tols(eps1, eps2)?,
        delta: parse_rat(delta).map_err(err)?,
        decay: DecayParams::new(parse_rat("2").map_err(err)?, parse_rat("3").map_err(err)?)
            .map_err(err)?,
        schedule: ScheduleConfig { b_override: None, k_mult, master_seed: seed },
        declared_n: None,
    };
    let v = tester::test_reference(&elements(ids), &profile(reference)?, &params).map_err(err)?;
    let answer = match v.answer {
        Answer::Yes => "YES",
        Answer::No => "NO",
    };
    Ok((answer.to_string(), v.failing_level))
}

#[pymodule]
fn frecheck(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(frequency_of_stream, m)?)?;
    m.add_function(wrap_pyfunction!(frechet_close, m)?)?;
    m.add_function(wrap_pyfunction!(find_coupling, m)?)?;
    m.add_function(wrap_pyfunction!(find_separating_rectangle, m)?)?;
    m.add_function(wrap_pyfunction!(is_half_stable, m)?)?;
    m.add_function(wrap_pyfunction!(is_decreasing, m)?)?;
    m.add_function(wrap_pyfunction!(zipf_profile, m)?)?;
    m.add_function(wrap_pyfunction!(test_reference, m)?)?;
    m.add_class::<SpaceSaving>()?;
    Ok(())
}
