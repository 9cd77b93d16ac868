//! Python bindings. States cross the boundary as lists of fact names and
//! actions as their `(name args...)` plan forms, so interactive sessions
//! stay readable; the dense encodings never leak out.

use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use thts::heuristics::{h_add, h_ff, h_goal_count, h_max};
use thts::{
    parse_arms, run_search, Algorithm, ArmStats, Direction, GroundOptions, GroundTask, HValue,
    HeuristicKind, PolicyConfig, PolicyKind, PreferredMode, SearchConfig, State, UniformVariant,
};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_into<T>(s: &str) -> PyResult<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(value_err)
}

fn hvalue_to_f64(h: HValue) -> f64 {
    match h {
        HValue::Finite(v) => v,
        HValue::Infinite => f64::INFINITY,
    }
}

/// A ground STRIPS task loaded from PDDL files.
#[pyclass(frozen)]
struct Task {
    inner: GroundTask,
    fact_ids: HashMap<String, usize>,
    action_ids: HashMap<String, usize>,
}

impl Task {
    fn state_from_names(&self, names: Vec<String>) -> PyResult<State> {
        let mut s = State::empty(self.inner.num_facts());
        for name in &names {
            match self.fact_ids.get(name) {
                Some(&f) => s.insert(f),
                None => return Err(PyValueError::new_err(format!("unknown fact {name}"))),
            }
        }
        Ok(s)
    }

    fn names_of(&self, s: &State) -> Vec<String> {
        s.iter().map(|f| self.inner.facts[f].clone()).collect()
    }

    fn action_id(&self, form: &str) -> PyResult<usize> {
        self.action_ids
            .get(form)
            .copied()
            .ok_or_else(|| PyValueError::new_err(format!("unknown action {form}")))
    }
}

#[pymethods]
impl Task {
    #[new]
    #[pyo3(signature = (domain, problem, *, unit_costs = false, full_universe = false))]
    fn new(
        domain: PathBuf,
        problem: PathBuf,
        unit_costs: bool,
        full_universe: bool,
    ) -> PyResult<Self> {
        let read = |p: &PathBuf| {
            std::fs::read_to_string(p)
                .map_err(|e| PyIOError::new_err(format!("cannot read {}: {e}", p.display())))
        };
        let d = thts::parse_domain(&read(&domain)?)
            .map_err(|e| PyValueError::new_err(format!("{}: {e}", domain.display())))?;
        let p = thts::parse_problem(&read(&problem)?)
            .map_err(|e| PyValueError::new_err(format!("{}: {e}", problem.display())))?;
        let opts = GroundOptions { unit_costs, full_universe };
        let inner = thts::ground(&d, &p, &opts)
            .map_err(|e| PyValueError::new_err(format!("{}: {e}", problem.display())))?;
        let fact_ids =
            inner.facts.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let action_ids = inner
            .actions
            .iter()
            .enumerate()
            .map(|(i, a)| (a.display_form(), i))
            .collect();
        Ok(Task { inner, fact_ids, action_ids })
    }

    #[getter]
    fn domain_name(&self) -> &str {
        &self.inner.domain_name
    }

    #[getter]
    fn problem_name(&self) -> &str {
        &self.inner.problem_name
    }

    #[getter]
    fn num_facts(&self) -> usize {
        self.inner.num_facts()
    }

    #[getter]
    fn num_actions(&self) -> usize {
        self.inner.num_actions()
    }

    /// Every fact name in the grounded universe, indexable order.
    fn facts(&self) -> Vec<String> {
        self.inner.facts.clone()
    }

    /// Every ground action in `(name args...)` form, indexable order.
    fn actions(&self) -> Vec<String> {
        self.inner.actions.iter().map(|a| a.display_form()).collect()
    }

    fn initial_state(&self) -> Vec<String> {
        self.names_of(&self.inner.init)
    }

    fn goal(&self) -> Vec<String> {
        self.names_of(&self.inner.goal)
    }

    /// Actions whose preconditions hold in the given state.
    fn applicable(&self, state: Vec<String>) -> PyResult<Vec<String>> {
        let s = self.state_from_names(state)?;
        Ok(self
            .inner
            .applicable_actions(&s)
            .into_iter()
            .map(|a| self.inner.actions[a].display_form())
            .collect())
    }

    /// Successor state; raises if the action is not applicable.
    fn apply(&self, state: Vec<String>, action: &str) -> PyResult<Vec<String>> {
        let s = self.state_from_names(state)?;
        let a = self.action_id(action)?;
        if !self.inner.actions[a].pre.is_subset(&s) {
            return Err(PyValueError::new_err(format!("{action} is not applicable here")));
        }
        Ok(self.names_of(&self.inner.apply(&s, a)))
    }

    fn is_goal(&self, state: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_goal(&self.state_from_names(state)?))
    }

    /// Heuristic value of a state; `inf` marks a recognized dead end.
    #[pyo3(signature = (state, *, kind = "ff"))]
    fn heuristic(&self, state: Vec<String>, kind: &str) -> PyResult<f64> {
        let s = self.state_from_names(state)?;
        let h = match parse_into::<HeuristicKind>(kind)? {
            HeuristicKind::Ff => h_ff(&self.inner, &s).value,
            HeuristicKind::Add => h_add(&self.inner, &s),
            HeuristicKind::Hmax => h_max(&self.inner, &s),
            HeuristicKind::GoalCount => h_goal_count(&self.inner, &s),
        };
        Ok(hvalue_to_f64(h))
    }

    /// Replays a plan from the initial state and returns its cost.
    fn validate(&self, plan: Vec<String>) -> PyResult<u64> {
        let steps = plan
            .iter()
            .map(|form| self.action_id(form))
            .collect::<PyResult<Vec<_>>>()?;
        self.inner.validate_plan(&steps).map_err(value_err)
    }

    /// Runs a search and returns a dict with the outcome, the plan (or
    /// None), its cost, and the search counters.
    #[pyo3(signature = (*, search = "guct-uniform", heuristic = "ff", evals = 10_000,
                        max_expansions = None, seed = 0, po = false, c = 1.0,
                        uniform_exploration = "paper", normal_force_pull = true))]
    #[allow(clippy::too_many_arguments)]
    fn plan<'py>(
        &self,
        py: Python<'py>,
        search: &str,
        heuristic: &str,
        evals: u64,
        max_expansions: Option<u64>,
        seed: u64,
        po: bool,
        c: f64,
        uniform_exploration: &str,
        normal_force_pull: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(PyValueError::new_err("c must be finite and non-negative"));
        }
        let mut cfg = SearchConfig::new(
            parse_into::<Algorithm>(search)?,
            parse_into::<HeuristicKind>(heuristic)?,
        );
        cfg.max_evaluations = evals;
        cfg.max_expansions = max_expansions;
        cfg.seed = seed;
        cfg.preferred = if po { PreferredMode::Boost } else { PreferredMode::Off };
        cfg.c = c;
        cfg.uniform_variant = parse_into::<UniformVariant>(uniform_exploration)?;
        cfg.normal_force_pull = normal_force_pull;
        let res = run_search(&self.inner, &cfg);

        let out = PyDict::new(py);
        out.set_item("outcome", res.outcome.to_string())?;
        match &res.plan {
            Some(p) => {
                let steps: Vec<String> =
                    p.steps.iter().map(|&a| self.inner.actions[a].display_form()).collect();
                out.set_item("plan", steps)?;
                out.set_item("cost", p.cost)?;
            }
            None => {
                out.set_item("plan", py.None())?;
                out.set_item("cost", py.None())?;
            }
        }
        out.set_item("evaluations", res.evaluations)?;
        out.set_item("expansions", res.expansions)?;
        out.set_item("frac_h_above_init", res.frac_h_above_init)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Task({}: {} facts, {} actions)",
            self.inner.problem_name,
            self.inner.num_facts(),
            self.inner.num_actions()
        )
    }
}

fn policy_from(
    policy: &str,
    direction: &str,
    c: f64,
    uniform_exploration: &str,
    normal_force_pull: bool,
) -> PyResult<PolicyConfig> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(PyValueError::new_err("c must be finite and non-negative"));
    }
    let mut cfg = PolicyConfig::new(
        parse_into::<PolicyKind>(policy)?,
        parse_into::<Direction>(direction)?,
    );
    cfg.c = c;
    cfg.uniform_variant = parse_into::<UniformVariant>(uniform_exploration)?;
    cfg.normal_force_pull = normal_force_pull;
    Ok(cfg)
}

/// Simulates a bandit policy on synthetic arms; returns a dict with the
/// final regret, the regret at each checkpoint, and per-arm pull counts.
#[pyfunction]
#[pyo3(signature = (arms, policy, horizon, seed = 0, *, direction = "maximize", c = 1.0,
                    uniform_exploration = "paper", normal_force_pull = true))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    arms: &str,
    policy: &str,
    horizon: u64,
    seed: u64,
    direction: &str,
    c: f64,
    uniform_exploration: &str,
    normal_force_pull: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let arms = parse_arms(arms).map_err(value_err)?;
    if arms.len() < 2 {
        return Err(PyValueError::new_err("need at least two arms"));
    }
    if horizon < arms.len() as u64 {
        return Err(PyValueError::new_err("horizon cannot cover the forced initial pulls"));
    }
    let cfg = policy_from(policy, direction, c, uniform_exploration, normal_force_pull)?;
    let trace = thts::simulate(&arms, &cfg, horizon, seed);

    let mut pull_counts = vec![0u64; arms.len()];
    for &i in &trace.pulls {
        pull_counts[i] += 1;
    }
    let out = PyDict::new(py);
    out.set_item("total", trace.total)?;
    out.set_item("checkpoints", trace.checkpoints)?;
    out.set_item("pull_counts", pull_counts)?;
    Ok(out)
}

/// Density of the generalized Pareto distribution at `x`.
#[pyfunction]
fn gp_pdf(x: f64, theta: f64, sigma: f64, xi: f64) -> PyResult<f64> {
    let p = thts::GpParams::new(theta, sigma, xi).map_err(value_err)?;
    Ok(thts::gp_pdf(x, &p))
}

/// Moments of the extreme of two independent Gaussians.
#[pyfunction]
#[pyo3(signature = (mu1, sigma1, mu2, sigma2, *, direction = "minimize"))]
fn clark_extreme_moments(
    mu1: f64,
    sigma1: f64,
    mu2: f64,
    sigma2: f64,
    direction: &str,
) -> PyResult<(f64, f64)> {
    // negated form so NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(sigma1 >= 0.0 && sigma2 >= 0.0) {
        return Err(PyValueError::new_err("sigmas must be non-negative"));
    }
    Ok(thts::clark_extreme_moments(
        (mu1, sigma1),
        (mu2, sigma2),
        parse_into::<Direction>(direction)?,
    ))
}

/// IPC agile score of the given solved runtimes, in seconds.
#[pyfunction]
#[pyo3(signature = (times, *, limit = 300.0))]
fn ipc_score(times: Vec<f64>, limit: f64) -> PyResult<f64> {
    if limit <= 1.0 {
        return Err(PyValueError::new_err("limit must exceed one second"));
    }
    // negated form so NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if times.iter().any(|&t| !(t >= 0.0)) {
        return Err(PyValueError::new_err("runtimes must be non-negative"));
    }
    Ok(thts::ipc_score(&times, limit))
}

fn stats_from(samples: &[f64]) -> PyResult<ArmStats> {
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(PyValueError::new_err("samples must be finite"));
    }
    Ok(ArmStats::from_samples(samples))
}

/// Bandit index of one arm given its reward samples and the total pull
/// count at the parent.
#[pyfunction]
#[pyo3(signature = (samples, total, *, policy = "ucb1", direction = "minimize", c = 1.0,
                    uniform_exploration = "paper", normal_force_pull = true))]
#[allow(clippy::too_many_arguments)]
fn bandit_index(
    samples: Vec<f64>,
    total: u64,
    policy: &str,
    direction: &str,
    c: f64,
    uniform_exploration: &str,
    normal_force_pull: bool,
) -> PyResult<f64> {
    if samples.is_empty() {
        return Err(PyValueError::new_err("an unvisited arm has no index"));
    }
    if total < samples.len() as u64 {
        return Err(PyValueError::new_err("total pulls cannot be below this arm's pulls"));
    }
    let cfg = policy_from(policy, direction, c, uniform_exploration, normal_force_pull)?;
    Ok(thts::bandit::index(&stats_from(&samples)?, (total as f64).max(1.0), &cfg))
}

/// Index of the arm a policy would pull next, given per-arm sample lists.
#[pyfunction]
#[pyo3(signature = (samples, *, policy = "ucb1", direction = "minimize", c = 1.0,
                    uniform_exploration = "paper", normal_force_pull = true))]
fn select_arm(
    samples: Vec<Vec<f64>>,
    policy: &str,
    direction: &str,
    c: f64,
    uniform_exploration: &str,
    normal_force_pull: bool,
) -> PyResult<usize> {
    if samples.is_empty() {
        return Err(PyValueError::new_err("need at least one arm"));
    }
    let arms = samples
        .iter()
        .map(|xs| stats_from(xs))
        .collect::<PyResult<Vec<_>>>()?;
    let total: u64 = arms.iter().map(|a| a.t).sum();
    let cfg = policy_from(policy, direction, c, uniform_exploration, normal_force_pull)?;
    Ok(thts::select_arm(&arms, total.max(1), &cfg))
}

#[pymodule]
fn thts_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Task>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(gp_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(clark_extreme_moments, m)?)?;
    m.add_function(wrap_pyfunction!(ipc_score, m)?)?;
    m.add_function(wrap_pyfunction!(bandit_index, m)?)?;
    m.add_function(wrap_pyfunction!(select_arm, m)?)?;
    Ok(())
}
