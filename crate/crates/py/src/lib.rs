//! Python bindings: permutations as one-line strings ("21453", or
//! comma-separated past nine letters), words over the positive integers as
//! digit strings ("3212").

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

use permposet::disconnect;
use permposet::mobius;
use permposet::pattern;
use permposet::perm::Permutation;
use permposet::subword::{self, CertifyOutcome, Word};
use permposet::topology::{self, Field, DEFAULT_MAX_FACES};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_perm(s: &str) -> PyResult<Permutation> {
    s.parse().map_err(value_error)
}

fn parse_word(s: &str) -> PyResult<Word> {
    s.parse().map_err(value_error)
}

fn field_of(p: Option<u64>) -> Field {
    match p {
        Some(p) => Field::Prime(p),
        None => Field::Rational,
    }
}

fn big_to_i64(x: permposet::BigInt) -> PyResult<i64> {
    i64::try_from(x).map_err(|_| PyOverflowError::new_err("Möbius value exceeds i64"))
}

/// Standard form of a sequence of distinct integers.
#[pyfunction]
fn flatten(word: Vec<u32>) -> PyResult<String> {
    Ok(Permutation::flatten(&word)
        .map_err(value_error)?
        .to_string())
}

/// Pattern containment: does sigma occur in tau?
#[pyfunction]
fn contains(sigma: &str, tau: &str) -> PyResult<bool> {
    Ok(parse_perm(sigma)?.is_contained_in(&parse_perm(tau)?))
}

/// All occurrences of sigma in tau as 1-based position lists.
#[pyfunction]
fn occurrences(sigma: &str, tau: &str) -> PyResult<Vec<Vec<usize>>> {
    Ok(parse_perm(tau)?.occurrences_of(&parse_perm(sigma)?))
}

/// All embeddings of sigma in tau, zeros marking deleted positions.
#[pyfunction]
fn embeddings(sigma: &str, tau: &str) -> PyResult<Vec<String>> {
    Ok(parse_perm(tau)?
        .embeddings_of(&parse_perm(sigma)?)
        .iter()
        .map(|e| e.to_string())
        .collect())
}

#[pyfunction]
fn direct_sum(alpha: &str, beta: &str) -> PyResult<String> {
    Ok(parse_perm(alpha)?
        .direct_sum(&parse_perm(beta)?)
        .to_string())
}

#[pyfunction]
fn skew_sum(alpha: &str, beta: &str) -> PyResult<String> {
    Ok(parse_perm(alpha)?.skew_sum(&parse_perm(beta)?).to_string())
}

/// Möbius function of [sigma, tau]; method is "brute", "decomposable", or
/// "skew".
#[pyfunction]
#[pyo3(signature = (sigma, tau, method = "brute"))]
fn mobius_value(sigma: &str, tau: &str, method: &str) -> PyResult<i64> {
    let sigma = parse_perm(sigma)?;
    let tau = parse_perm(tau)?;
    let value = match method {
        "brute" => mobius::mobius_brute(&sigma, &tau),
        "decomposable" => mobius::mobius_decomposable(&sigma, &tau),
        "skew" => mobius::mobius_skew_variant(&sigma, &tau),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(value_error)?;
    big_to_i64(value)
}

/// The closed interval [sigma, tau] as a JSON string:
/// {bottom, top, elements, covers}.
#[pyfunction]
fn interval_json(sigma: &str, tau: &str) -> PyResult<String> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(interval.to_json().to_string())
}

#[pyfunction]
fn rank_sizes(sigma: &str, tau: &str) -> PyResult<Vec<usize>> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(interval.rank_sizes())
}

#[pyfunction]
fn is_rank_unimodal(sigma: &str, tau: &str) -> PyResult<bool> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(interval.is_rank_unimodal())
}

#[pyfunction]
#[pyo3(signature = (sigma, tau, open = false))]
fn max_antichain(sigma: &str, tau: &str, open: bool) -> PyResult<usize> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(interval.max_antichain_size(open))
}

#[pyfunction]
#[pyo3(signature = (sigma, tau, open = false))]
fn is_sperner(sigma: &str, tau: &str, open: bool) -> PyResult<bool> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(interval.is_sperner(open))
}

/// Sizes of the connected components of the open interval (sigma, tau).
#[pyfunction]
fn open_component_sizes(sigma: &str, tau: &str) -> PyResult<Vec<usize>> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(interval.open_components().iter().map(|c| c.len()).collect())
}

/// Disconnectivity of (sigma, tau) by the embedding-partition test.
#[pyfunction]
fn is_disconnected(sigma: &str, tau: &str) -> PyResult<bool> {
    Ok(
        disconnect::is_disconnected(&parse_perm(sigma)?, &parse_perm(tau)?)
            .map_err(value_error)?
            .0,
    )
}

/// Least disconnected subinterval of rank at least 3, if any.
#[pyfunction]
fn disconnected_subinterval(sigma: &str, tau: &str) -> PyResult<Option<(String, String)>> {
    Ok(
        disconnect::has_nontrivial_disconnected_subinterval(&parse_perm(sigma)?, &parse_perm(tau)?)
            .map_err(value_error)?
            .map(|(x, y)| (x.to_string(), y.to_string())),
    )
}

/// Reduced Betti numbers of the open interval, indexed from dimension -1;
/// field None means the rationals, otherwise a prime.
#[pyfunction]
#[pyo3(signature = (sigma, tau, field = None))]
fn betti_numbers(sigma: &str, tau: &str, field: Option<u64>) -> PyResult<Vec<usize>> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    let complex = topology::order_complex(&interval, DEFAULT_MAX_FACES).map_err(value_error)?;
    Ok(topology::betti_numbers(&complex, field_of(field))
        .as_slice()
        .to_vec())
}

/// Reduced Euler characteristic of the open interval.
#[pyfunction]
fn euler_reduced(sigma: &str, tau: &str) -> PyResult<i64> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    let complex = topology::order_complex(&interval, DEFAULT_MAX_FACES).map_err(value_error)?;
    big_to_i64(topology::reduced_euler_characteristic(&complex))
}

#[pyfunction]
#[pyo3(signature = (sigma, tau, field = None))]
fn is_cohen_macaulay(sigma: &str, tau: &str, field: Option<u64>) -> PyResult<bool> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    Ok(
        topology::is_cohen_macaulay(&interval, field_of(field), DEFAULT_MAX_FACES)
            .map_err(value_error)?
            .0,
    )
}

#[pyfunction]
#[pyo3(signature = (sigma, tau, field = None))]
fn wedge_of_spheres(sigma: &str, tau: &str, field: Option<u64>) -> PyResult<bool> {
    let interval =
        pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?).map_err(value_error)?;
    topology::wedge_of_spheres_check(&interval, field_of(field), DEFAULT_MAX_FACES)
        .map_err(value_error)
}

/// Generalized subword order over the positive integers.
#[pyfunction]
fn word_leq(u: &str, w: &str) -> PyResult<bool> {
    let u = parse_word(u)?;
    let w = parse_word(w)?;
    let forest = subword::chain_for(&[&u, &w]);
    subword::word_leq(&forest, &u, &w).map_err(value_error)
}

/// Dual CL-shellability certificate for the word interval [u, w] over the
/// positive integers: ("certified", None) or ("refuted", (lower, upper)).
#[pyfunction]
fn certify_dual_cl(u: &str, w: &str) -> PyResult<(String, Option<(String, String)>)> {
    let u = parse_word(u)?;
    let w = parse_word(w)?;
    let forest = subword::chain_for(&[&u, &w]);
    match subword::certify_dual_cl(&forest, &u, &w).map_err(value_error)? {
        CertifyOutcome::Certified => Ok(("certified".into(), None)),
        CertifyOutcome::Refuted { witness } => Ok((
            "refuted".into(),
            Some((witness.lower.to_string(), witness.upper.to_string())),
        )),
        CertifyOutcome::LabelCheckFailed { lower, upper } => Ok((
            "label-check-failed".into(),
            Some((lower.to_string(), upper.to_string())),
        )),
    }
}

/// Composition of layer lengths of a layered permutation, and back.
#[pyfunction]
fn layered_to_word(perm: &str) -> PyResult<String> {
    Ok(subword::layered_to_word(&parse_perm(perm)?)
        .map_err(value_error)?
        .to_string())
}

#[pyfunction]
fn word_to_layered(word: &str) -> PyResult<String> {
    Ok(subword::word_to_layered(&parse_word(word)?)
        .map_err(value_error)?
        .to_string())
}

/// Seeded Monte Carlo estimate of how often a random permutation of length
/// n contains sigma+sigma, as a JSON report.
#[pyfunction]
#[pyo3(signature = (sigma, n, trials = 2000, seed = 0))]
fn monte_carlo_prevalence(sigma: &str, n: usize, trials: u64, seed: u64) -> PyResult<String> {
    let report = disconnect::monte_carlo_prevalence(&parse_perm(sigma)?, n, trials, seed)
        .map_err(value_error)?;
    serde_json::to_string(&report).map_err(value_error)
}

/// A built closed interval of the pattern poset.
#[pyclass]
struct PatternInterval {
    inner: permposet::Interval<Permutation>,
}

#[pymethods]
impl PatternInterval {
    #[new]
    fn new(sigma: &str, tau: &str) -> PyResult<Self> {
        Ok(PatternInterval {
            inner: pattern::build_interval(&parse_perm(sigma)?, &parse_perm(tau)?)
                .map_err(value_error)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!(
            "PatternInterval('{}', '{}', {} elements)",
            self.inner.bottom(),
            self.inner.top(),
            self.inner.size()
        )
    }

    fn elements(&self) -> Vec<String> {
        self.inner
            .elements()
            .iter()
            .map(|e| e.to_string())
            .collect()
    }

    fn covers(&self) -> Vec<(String, String)> {
        self.inner
            .covers()
            .iter()
            .map(|&(u, l)| {
                (
                    self.inner.element(u).to_string(),
                    self.inner.element(l).to_string(),
                )
            })
            .collect()
    }

    fn rank_sizes(&self) -> Vec<usize> {
        self.inner.rank_sizes()
    }

    fn open_component_sizes(&self) -> Vec<usize> {
        self.inner
            .open_components()
            .iter()
            .map(|c| c.len())
            .collect()
    }

    fn mobius(&self) -> PyResult<i64> {
        big_to_i64(self.inner.mobius_to_top()[0].clone())
    }

    fn is_isomorphic_to(&self, other: &PatternInterval) -> bool {
        self.inner.isomorphism_to(&other.inner).is_some()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

#[pymodule]
fn permposet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(flatten, m)?)?;
    m.add_function(wrap_pyfunction!(contains, m)?)?;
    m.add_function(wrap_pyfunction!(occurrences, m)?)?;
    m.add_function(wrap_pyfunction!(embeddings, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(skew_sum, m)?)?;
    m.add_function(wrap_pyfunction!(mobius_value, m)?)?;
    m.add_function(wrap_pyfunction!(interval_json, m)?)?;
    m.add_function(wrap_pyfunction!(rank_sizes, m)?)?;
    m.add_function(wrap_pyfunction!(is_rank_unimodal, m)?)?;
    m.add_function(wrap_pyfunction!(max_antichain, m)?)?;
    m.add_function(wrap_pyfunction!(is_sperner, m)?)?;
    m.add_function(wrap_pyfunction!(open_component_sizes, m)?)?;
    m.add_function(wrap_pyfunction!(is_disconnected, m)?)?;
    m.add_function(wrap_pyfunction!(disconnected_subinterval, m)?)?;
    m.add_function(wrap_pyfunction!(betti_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(euler_reduced, m)?)?;
    m.add_function(wrap_pyfunction!(is_cohen_macaulay, m)?)?;
    m.add_function(wrap_pyfunction!(wedge_of_spheres, m)?)?;
    m.add_function(wrap_pyfunction!(word_leq, m)?)?;
    m.add_function(wrap_pyfunction!(certify_dual_cl, m)?)?;
    m.add_function(wrap_pyfunction!(layered_to_word, m)?)?;
    m.add_function(wrap_pyfunction!(word_to_layered, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo_prevalence, m)?)?;
    m.add_class::<PatternInterval>()?;
    Ok(())
}
