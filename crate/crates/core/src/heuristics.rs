//! Delete-relaxation heuristics (max, additive, relaxed-plan) and goal
//! counting, over extended values where infinity is an explicit variant
//! rather than a sentinel number.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::task::{ActionId, FactId, GroundTask, State};

/// Non-negative extended heuristic value. Dead ends are `Infinite`, never a
/// large finite stand-in, so callers can pattern-match them exactly.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum HValue {
    Finite(f64),
    Infinite,
}

impl HValue {
    /// Wraps a finite, non-negative value.
    pub fn finite(v: f64) -> Self {
        assert!(v.is_finite() && v >= 0.0, "heuristic values are finite and non-negative: {v}");
        HValue::Finite(v)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, HValue::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            HValue::Finite(v) => v,
            HValue::Infinite => f64::INFINITY,
        }
    }

    /// The finite value; panics on `Infinite`.
    pub fn unwrap_finite(self) -> f64 {
        match self {
            HValue::Finite(v) => v,
            HValue::Infinite => panic!("unwrap_finite on an infinite heuristic value"),
        }
    }
}

impl std::ops::Add for HValue {
    type Output = HValue;
    fn add(self, rhs: HValue) -> HValue {
        match (self, rhs) {
            (HValue::Finite(a), HValue::Finite(b)) => HValue::Finite(a + b),
            _ => HValue::Infinite,
        }
    }
}

impl std::fmt::Display for HValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HValue::Finite(v) => write!(f, "{v}"),
            HValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Mean of a slice of extended values; infinite as soon as any member is.
pub fn mean_hvalues(values: &[HValue]) -> HValue {
    assert!(!values.is_empty());
    let mut sum = HValue::finite(0.0);
    for &v in values {
        sum = sum + v;
    }
    match sum {
        HValue::Finite(s) => HValue::finite(s / values.len() as f64),
        HValue::Infinite => HValue::Infinite,
    }
}

/// A heuristic value plus the preferred operators that came out of the
/// computation. Only the relaxed-plan heuristic marks operators; the set is
/// empty (and in particular empty on dead ends) for the others.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: HValue,
    /// Ascending action ids; always applicable in the evaluated state.
    pub preferred: Vec<ActionId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize)]
pub enum HeuristicKind {
    #[serde(rename = "ff")]
    Ff,
    #[serde(rename = "add")]
    Add,
    #[serde(rename = "hmax")]
    Hmax,
    #[serde(rename = "gc")]
    GoalCount,
}

impl HeuristicKind {
    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Ff => "ff",
            HeuristicKind::Add => "add",
            HeuristicKind::Hmax => "hmax",
            HeuristicKind::GoalCount => "gc",
        }
    }
}

impl std::str::FromStr for HeuristicKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ff" => Ok(HeuristicKind::Ff),
            "add" => Ok(HeuristicKind::Add),
            "hmax" => Ok(HeuristicKind::Hmax),
            "gc" => Ok(HeuristicKind::GoalCount),
            other => Err(format!("unknown heuristic {other} (expected ff|add|hmax|gc)")),
        }
    }
}

impl std::fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Agg {
    Max,
    Add,
}

const NO_SUPPORTER: usize = usize::MAX;

/// Priority-driven fixpoint over the relaxed planning graph. One instance
/// holds the per-task tables and scratch buffers and is reused across
/// evaluations.
struct Relaxation {
    /// fact -> actions with that fact as a precondition
    consumers: Vec<Vec<ActionId>>,
    n_pre: Vec<u32>,
    zero_pre: Vec<ActionId>,
    // scratch, reset on every solve
    fact_cost: Vec<f64>,
    unsat: Vec<u32>,
    acc: Vec<f64>,
    supporter: Vec<usize>,
    heap: BinaryHeap<Reverse<(u64, FactId)>>,
}

/// Order-preserving key for a non-negative float; IEEE 754 bit order matches
/// numeric order on that range.
fn cost_key(c: f64) -> u64 {
    debug_assert!(c >= 0.0);
    c.to_bits()
}

impl Relaxation {
    fn new(task: &GroundTask) -> Self {
        let nf = task.num_facts();
        let na = task.actions.len();
        let mut consumers = vec![Vec::new(); nf];
        let mut n_pre = vec![0u32; na];
        let mut zero_pre = Vec::new();
        for (i, a) in task.actions.iter().enumerate() {
            let mut count = 0;
            for f in a.pre.iter() {
                consumers[f].push(i);
                count += 1;
            }
            n_pre[i] = count;
            if count == 0 {
                zero_pre.push(i);
            }
        }
        Relaxation {
            consumers,
            n_pre,
            zero_pre,
            fact_cost: vec![f64::INFINITY; nf],
            unsat: vec![0; na],
            acc: vec![0.0; na],
            supporter: vec![NO_SUPPORTER; nf],
            heap: BinaryHeap::new(),
        }
    }

    fn solve(&mut self, task: &GroundTask, s: &State, agg: Agg) {
        self.fact_cost.fill(f64::INFINITY);
        self.unsat.copy_from_slice(&self.n_pre);
        self.acc.fill(0.0);
        self.supporter.fill(NO_SUPPORTER);
        self.heap.clear();

        for f in s.iter() {
            self.fact_cost[f] = 0.0;
            self.heap.push(Reverse((cost_key(0.0), f)));
        }
        for i in 0..self.zero_pre.len() {
            self.fire(task, self.zero_pre[i]);
        }
        while let Some(Reverse((key, f))) = self.heap.pop() {
            if key > cost_key(self.fact_cost[f]) {
                continue; // stale entry
            }
            let cost = self.fact_cost[f];
            for ci in 0..self.consumers[f].len() {
                let a = self.consumers[f][ci];
                match agg {
                    Agg::Add => self.acc[a] += cost,
                    Agg::Max => self.acc[a] = self.acc[a].max(cost),
                }
                self.unsat[a] -= 1;
                if self.unsat[a] == 0 {
                    self.fire(task, a);
                }
            }
        }
    }

    /// All preconditions of `a` are priced; propagate to its add effects.
    fn fire(&mut self, task: &GroundTask, a: ActionId) {
        let v = self.acc[a] + task.actions[a].cost as f64;
        for g in task.actions[a].add.iter() {
            if v < self.fact_cost[g] {
                self.fact_cost[g] = v;
                self.supporter[g] = a;
                self.heap.push(Reverse((cost_key(v), g)));
            } else if v == self.fact_cost[g]
                && (self.supporter[g] == NO_SUPPORTER || a < self.supporter[g])
            {
                // equal-cost achievers resolve to the lowest action id
                self.supporter[g] = a;
            }
        }
    }

    /// Backchains through the additive supporters, collecting each action
    /// once. Facts are processed in decreasing price so shared subgoals are
    /// reused. Requires every goal fact to be finitely priced.
    fn extract_relaxed_plan(&self, task: &GroundTask, s: &State) -> Vec<ActionId> {
        let mut marked = vec![false; task.num_facts()];
        let mut in_plan = vec![false; task.actions.len()];
        let mut plan = Vec::new();
        let mut queue: BinaryHeap<(u64, Reverse<FactId>)> = BinaryHeap::new();
        for g in task.goal.iter() {
            if !s.contains(g) {
                queue.push((cost_key(self.fact_cost[g]), Reverse(g)));
            }
        }
        while let Some((_, Reverse(f))) = queue.pop() {
            if marked[f] {
                continue;
            }
            marked[f] = true;
            let a = self.supporter[f];
            debug_assert_ne!(a, NO_SUPPORTER, "finitely priced fact without a supporter");
            if !in_plan[a] {
                in_plan[a] = true;
                plan.push(a);
                for p in task.actions[a].pre.iter() {
                    if !s.contains(p) && !marked[p] {
                        queue.push((cost_key(self.fact_cost[p]), Reverse(p)));
                    }
                }
            }
        }
        plan.sort_unstable();
        plan
    }
}

/// Reusable evaluator for one task and one heuristic.
pub struct Evaluator {
    kind: HeuristicKind,
    relax: Option<Relaxation>,
}

impl Evaluator {
    pub fn new(kind: HeuristicKind, task: &GroundTask) -> Self {
        let relax = match kind {
            HeuristicKind::GoalCount => None,
            _ => Some(Relaxation::new(task)),
        };
        Evaluator { kind, relax }
    }

    pub fn kind(&self) -> HeuristicKind {
        self.kind
    }

    pub fn evaluate(&mut self, task: &GroundTask, s: &State) -> Evaluation {
        match self.kind {
            HeuristicKind::GoalCount => Evaluation {
                value: HValue::finite(task.goal.count_missing_from(s) as f64),
                preferred: Vec::new(),
            },
            HeuristicKind::Hmax => {
                let r = self.relax.as_mut().unwrap();
                r.solve(task, s, Agg::Max);
                let mut worst: f64 = 0.0;
                for g in task.goal.iter() {
                    worst = worst.max(r.fact_cost[g]);
                }
                Evaluation { value: extended(worst), preferred: Vec::new() }
            }
            HeuristicKind::Add => {
                let r = self.relax.as_mut().unwrap();
                r.solve(task, s, Agg::Add);
                let mut sum: f64 = 0.0;
                for g in task.goal.iter() {
                    sum += r.fact_cost[g];
                }
                Evaluation { value: extended(sum), preferred: Vec::new() }
            }
            HeuristicKind::Ff => {
                let r = self.relax.as_mut().unwrap();
                r.solve(task, s, Agg::Add);
                if task.goal.iter().any(|g| r.fact_cost[g].is_infinite()) {
                    return Evaluation { value: HValue::Infinite, preferred: Vec::new() };
                }
                let plan = r.extract_relaxed_plan(task, s);
                let value: f64 =
                    plan.iter().map(|&a| task.actions[a].cost as f64).sum();
                let preferred: Vec<ActionId> = plan
                    .into_iter()
                    .filter(|&a| task.actions[a].pre.is_subset(s))
                    .collect();
                Evaluation { value: HValue::finite(value), preferred }
            }
        }
    }
}

fn extended(v: f64) -> HValue {
    if v.is_infinite() {
        HValue::Infinite
    } else {
        HValue::finite(v)
    }
}

pub fn h_max(task: &GroundTask, s: &State) -> HValue {
    Evaluator::new(HeuristicKind::Hmax, task).evaluate(task, s).value
}

pub fn h_add(task: &GroundTask, s: &State) -> HValue {
    Evaluator::new(HeuristicKind::Add, task).evaluate(task, s).value
}

pub fn h_ff(task: &GroundTask, s: &State) -> Evaluation {
    Evaluator::new(HeuristicKind::Ff, task).evaluate(task, s)
}

pub fn h_goal_count(task: &GroundTask, s: &State) -> HValue {
    Evaluator::new(HeuristicKind::GoalCount, task).evaluate(task, s).value
}
