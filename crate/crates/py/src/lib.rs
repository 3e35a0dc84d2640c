//! Python bindings. Values cross the boundary as `fractions.Fraction`, with
//! `None` for an undefined value; variations are lists of `(digit, name)`.

use std::collections::HashMap;

use evaluate::expr::Assignment;
use evaluate::fairness::Outcome;
use evaluate::ordering::{EstimateConfig, SamplingMode, DEFAULT_SAMPLES};
use evaluate::search::{SearchError, SearchOptions, SearchStats, SolveResult, DEFAULT_MAX_VARS};
use evaluate::tree::Binding;
use evaluate::{DigitOrder, Expression, Value};
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

create_exception!(evaluate_py, UnsolvableError, PyValueError, "No instantiation has a defined value.");

fn search_err(e: SearchError) -> PyErr {
    match e {
        SearchError::Unsolvable => UnsolvableError::new_err(e.to_string()),
        SearchError::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn value_to_py(py: Python<'_>, v: Value) -> PyResult<Py<PyAny>> {
    match v {
        Value::Finite(r) => {
            let fraction = py.import("fractions")?.getattr("Fraction")?;
            Ok(fraction.call1((r.numer(), r.denom()))?.unbind())
        }
        Value::Invalid => Ok(py.None()),
    }
}

fn value_from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if obj.is_none() {
        return Ok(Value::Invalid);
    }
    let num: i64 = obj.getattr("numerator")?.extract()?;
    let den: i64 = obj.getattr("denominator")?.extract()?;
    let r = evaluate::Rational::new(num, den).ok_or_else(|| PyValueError::new_err("zero denominator"))?;
    Ok(Value::Finite(r))
}

/// A parsed arithmetic expression over single-digit variables.
#[pyclass(name = "Expression", frozen)]
struct PyExpression {
    inner: Expression,
}

#[pymethods]
impl PyExpression {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Expression::parse(text).map(|inner| PyExpression { inner }).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn source(&self) -> &str {
        self.inner.source()
    }

    /// Variable names in order of first occurrence.
    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.variables().to_vec()
    }

    /// Postfix tokens as strings.
    #[getter]
    fn postfix(&self) -> Vec<String> {
        self.inner.postfix().iter().map(ToString::to_string).collect()
    }

    fn evaluate(&self, py: Python<'_>, digits: HashMap<String, u8>) -> PyResult<Py<PyAny>> {
        let mut a = Assignment::new();
        for (name, d) in digits {
            a.bind(name, d).map_err(|e| PyValueError::new_err(e.to_string()))?;
        }
        let v = self.inner.evaluate(&a).map_err(|e| PyValueError::new_err(e.to_string()))?;
        value_to_py(py, v)
    }

    fn substitute(&self, variable: &str, digit: u8) -> PyResult<Self> {
        let inner = self.inner.substitute(variable, digit).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyExpression { inner })
    }

    fn negate(&self) -> Self {
        PyExpression { inner: self.inner.negate() }
    }

    fn __repr__(&self) -> String {
        format!("Expression({:?})", self.inner.source())
    }

    fn __str__(&self) -> &str {
        self.inner.source()
    }
}

#[derive(FromPyObject)]
enum ExprArg<'py> {
    Parsed(PyRef<'py, PyExpression>),
    Text(String),
}

impl ExprArg<'_> {
    fn expression(&self) -> PyResult<Expression> {
        match self {
            ExprArg::Parsed(e) => Ok(e.inner.clone()),
            ExprArg::Text(t) => Expression::parse(t).map_err(|e| PyValueError::new_err(e.to_string())),
        }
    }
}

type PvList = Vec<(u8, String)>;

/// Minimax value, principal variation and search counters.
#[pyclass(name = "SolveResult", frozen, get_all)]
struct PySolveResult {
    value: Py<PyAny>,
    pv: PvList,
    visited: u128,
    alpha_prunes: u128,
    beta_prunes: u128,
    tt_prunes: u128,
    alpha_cutoffs: u64,
    beta_cutoffs: u64,
    tt_hits: u64,
    digit_order: Vec<u32>,
}

#[pymethods]
impl PySolveResult {
    #[getter]
    fn pruned(&self) -> u128 {
        self.alpha_prunes + self.beta_prunes + self.tt_prunes
    }

    fn __repr__(&self, py: Python<'_>) -> String {
        let pv: Vec<String> = self.pv.iter().map(|(d, v)| Binding::new(*d, v.clone()).to_string()).collect();
        format!("SolveResult(value={}, pv=[{}], visited={})", self.value.bind(py), pv.join(", "), self.visited)
    }
}

impl PySolveResult {
    fn build(py: Python<'_>, res: SolveResult, stats: SearchStats, order: &DigitOrder) -> PyResult<Self> {
        Ok(PySolveResult {
            value: value_to_py(py, res.value)?,
            pv: res.pv.into_iter().map(|b| (b.digit, b.variable)).collect(),
            visited: stats.visited,
            alpha_prunes: stats.alpha_prunes,
            beta_prunes: stats.beta_prunes,
            tt_prunes: stats.tt_prunes,
            alpha_cutoffs: stats.alpha_cutoffs,
            beta_cutoffs: stats.beta_cutoffs,
            tt_hits: stats.tt_hits,
            digit_order: digits(order),
        })
    }
}

// a Vec<u8> would surface as bytes
fn digits(order: &DigitOrder) -> Vec<u32> {
    order.sequence().iter().map(|&d| d as u32).collect()
}

fn sampling_mode(mode: &str) -> PyResult<SamplingMode> {
    match mode {
        "auto" => Ok(SamplingMode::Auto),
        "sampled" => Ok(SamplingMode::Sampled),
        "exhaustive" => Ok(SamplingMode::Exhaustive),
        _ => Err(PyValueError::new_err(format!("unknown sampling mode {mode:?}"))),
    }
}

fn options(expr: &Expression, order: &str, tt: bool, samples: usize, seed: u64, max_vars: usize) -> PyResult<SearchOptions> {
    let opts = match order {
        "ascending" => SearchOptions::plain(),
        "heuristic" => {
            let config = EstimateConfig { samples, seed, ..Default::default() };
            SearchOptions::heuristic(expr, &config).map_err(|e| PyOverflowError::new_err(e.to_string()))?
        }
        other => SearchOptions::plain()
            .with_order(other.parse::<DigitOrder>().map_err(PyValueError::new_err)?),
    };
    Ok(opts.with_tt(tt).with_max_vars(max_vars))
}

/// Alpha-beta solve. `order` is "ascending", "heuristic" or an explicit
/// permutation such as "9,8,7,6,5,4,3,2,1,0".
#[pyfunction]
#[pyo3(signature = (expr, order = "ascending", tt = false, samples = DEFAULT_SAMPLES, seed = 0, max_vars = DEFAULT_MAX_VARS, min_first = false))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    expr: ExprArg<'_>,
    order: &str,
    tt: bool,
    samples: usize,
    seed: u64,
    max_vars: usize,
    min_first: bool,
) -> PyResult<PySolveResult> {
    let e = expr.expression()?;
    let opts = options(&e, order, tt, samples, seed, max_vars)?;
    let (res, stats) = py
        .detach(|| {
            if min_first {
                evaluate::solve_min_first(&e, &opts)
            } else {
                evaluate::solve_alphabeta(&e, &opts)
            }
        })
        .map_err(search_err)?;
    PySolveResult::build(py, res, stats, &opts.digit_order)
}

/// Plain backward induction (no pruning); at most four variables.
#[pyfunction]
fn oracle(py: Python<'_>, expr: ExprArg<'_>) -> PyResult<(Py<PyAny>, PvList)> {
    let e = expr.expression()?;
    let res = py.detach(|| evaluate::solve_oracle(&e)).map_err(search_err)?;
    Ok((value_to_py(py, res.value)?, res.pv.into_iter().map(|b| (b.digit, b.variable)).collect()))
}

/// Plays a variation from the root and returns the final value.
#[pyfunction]
fn replay(py: Python<'_>, expr: ExprArg<'_>, pv: Vec<(u8, String)>) -> PyResult<Py<PyAny>> {
    let e = expr.expression()?;
    let pv: Vec<Binding> = pv.into_iter().map(|(d, v)| Binding::new(d, v)).collect();
    let v = evaluate::replay(&e, &pv).map_err(|err| PyValueError::new_err(err.to_string()))?;
    value_to_py(py, v)
}

/// Number of nodes in the game tree of an expression with `n` variables.
#[pyfunction]
fn tree_size(n: usize) -> BigUint {
    evaluate::tree_size(n)
}

/// Digit order for MAX nodes, best first.
#[pyfunction]
#[pyo3(signature = (expr, samples = DEFAULT_SAMPLES, seed = 0, mode = "auto"))]
fn digit_order(expr: ExprArg<'_>, samples: usize, seed: u64, mode: &str) -> PyResult<Vec<u32>> {
    let e = expr.expression()?;
    let config = EstimateConfig { samples, seed, mode: sampling_mode(mode)? };
    let order = evaluate::estimate_digit_order_with(&e, &config).map_err(|err| PyOverflowError::new_err(err.to_string()))?;
    Ok(digits(&order))
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::MaxWins => "max_wins",
        Outcome::MinWins => "min_wins",
        Outcome::Draw => "draw",
        Outcome::InvalidFinal => "invalid",
    }
}

/// Verdict for a finished game: "max_wins", "min_wins", "draw" or "invalid".
#[pyfunction]
fn judge(final_value: &Bound<'_, PyAny>, minimax: &Bound<'_, PyAny>) -> PyResult<&'static str> {
    Ok(outcome_name(evaluate::judge(value_from_py(final_value)?, value_from_py(minimax)?)))
}

/// Monte-Carlo outcome frequencies under uniformly random play.
#[pyfunction]
#[pyo3(signature = (expr, trials = 10_000, seed = 0))]
fn fairness(py: Python<'_>, expr: ExprArg<'_>, trials: u64, seed: u64) -> PyResult<HashMap<&'static str, Py<PyAny>>> {
    let e = expr.expression()?;
    let r = py.detach(|| evaluate::estimate_fairness(&e, trials, seed)).map_err(search_err)?;
    let mut out = HashMap::new();
    out.insert("trials", r.trials.into_pyobject(py)?.into_any().unbind());
    for (k, p) in [("max_wins", r.p_max_win), ("min_wins", r.p_min_win), ("draw", r.p_draw), ("invalid", r.p_invalid)] {
        out.insert(k, p.into_pyobject(py)?.into_any().unbind());
    }
    out.insert("minimax", value_to_py(py, r.minimax)?);
    Ok(out)
}

/// Exact outcome probabilities under random play; at most four variables.
#[pyfunction]
fn exact_fairness(py: Python<'_>, expr: ExprArg<'_>) -> PyResult<HashMap<&'static str, f64>> {
    let e = expr.expression()?;
    let exact = py
        .detach(|| {
            let minimax = evaluate::solve_oracle(&e)?.value;
            evaluate::exact_fairness(&e, minimax)
        })
        .map_err(search_err)?;
    Ok(HashMap::from([
        ("max_wins", exact.p_max_win),
        ("min_wins", exact.p_min_win),
        ("draw", exact.p_draw),
        ("invalid", exact.p_invalid),
    ]))
}

#[pymodule]
fn evaluate_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpression>()?;
    m.add_class::<PySolveResult>()?;
    m.add("UnsolvableError", m.py().get_type::<UnsolvableError>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(tree_size, m)?)?;
    m.add_function(wrap_pyfunction!(digit_order, m)?)?;
    m.add_function(wrap_pyfunction!(judge, m)?)?;
    m.add_function(wrap_pyfunction!(fairness, m)?)?;
    m.add_function(wrap_pyfunction!(exact_fairness, m)?)?;
    Ok(())
}
