//! STRIPS task model: fact universe, states as fact sets, ground actions,
//! plan validation.
//!
//! A `GroundTask` is immutable once built. Facts and actions are dense
//! indices into the task's tables, so states pack into fixed-width bitsets
//! with word-parallel subset tests.

use std::collections::HashMap;

use thiserror::Error;

pub type FactId = usize;
pub type ActionId = usize;

/// Fixed-width bitset over a task's fact universe.
///
/// Every set belonging to one task has the same block count, so equality and
/// hashing are plain block comparisons. Bits at or above the fact count are
/// never set, keeping the representation canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FactSet {
    blocks: Box<[u64]>,
}

/// A state is exactly the set of facts currently true.
pub type State = FactSet;

impl FactSet {
    pub fn empty(n_facts: usize) -> Self {
        FactSet {
            blocks: vec![0u64; n_facts.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn from_facts(n_facts: usize, facts: &[FactId]) -> Self {
        let mut s = Self::empty(n_facts);
        for &f in facts {
            s.insert(f);
        }
        s
    }

    pub fn insert(&mut self, f: FactId) {
        self.blocks[f / 64] |= 1 << (f % 64);
    }

    pub fn remove(&mut self, f: FactId) {
        self.blocks[f / 64] &= !(1 << (f % 64));
    }

    pub fn contains(&self, f: FactId) -> bool {
        match self.blocks.get(f / 64) {
            Some(b) => b >> (f % 64) & 1 == 1,
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_subset(&self, other: &FactSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &FactSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &FactSet) {
        for (a, b) in self.blocks.iter_mut().zip(other.blocks.iter()) {
            *a &= !b;
        }
    }

    /// Number of facts in `self` that are missing from `other`.
    pub fn count_missing_from(&self, other: &FactSet) -> usize {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    /// Ascending fact ids.
    pub fn iter(&self) -> impl Iterator<Item = FactId> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let j = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(i * 64 + j)
                }
            })
        })
    }
}

impl std::fmt::Debug for FactSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<String>,
    pub pre: FactSet,
    pub add: FactSet,
    /// Normalized at build time: disjoint from `add`, so delete-then-add
    /// semantics reduce to `(s \ del) ∪ add`.
    pub del: FactSet,
    pub cost: u32,
}

impl GroundAction {
    /// Plan-line form: `(name arg1 arg2 ...)`.
    pub fn display_form(&self) -> String {
        let mut s = String::from("(");
        s.push_str(&self.name);
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s.push(')');
        s
    }
}

#[derive(Clone, Debug)]
pub struct GroundTask {
    pub domain_name: String,
    pub problem_name: String,
    /// Display names; the index is the `FactId`.
    pub facts: Vec<String>,
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal: FactSet,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("step {step}: action id out of range")]
    UnknownAction { step: usize },
    #[error("step {step}: {action} is not applicable")]
    NotApplicable { step: usize, action: String },
    #[error("plan executes but does not reach the goal")]
    GoalNotReached,
    #[error("line {line}: no ground action named {text}")]
    UnknownName { line: usize, text: String },
}

impl GroundTask {
    pub fn num_facts(&self) -> usize {
        self.facts.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Ids of actions whose preconditions hold in `s`, ascending.
    pub fn applicable_actions(&self, s: &State) -> Vec<ActionId> {
        self.actions
            .iter()
            .enumerate()
            .filter(|(_, a)| a.pre.is_subset(s))
            .map(|(i, _)| i)
            .collect()
    }

    /// Successor state under delete-then-add semantics.
    ///
    /// The caller guarantees applicability.
    pub fn apply(&self, s: &State, a: ActionId) -> State {
        let act = &self.actions[a];
        debug_assert!(
            act.pre.is_subset(s),
            "apply called with inapplicable {}",
            act.display_form()
        );
        let mut next = s.clone();
        next.subtract(&act.del);
        next.union_with(&act.add);
        next
    }

    pub fn is_goal(&self, s: &State) -> bool {
        self.goal.is_subset(s)
    }

    /// Replays `steps` from the initial state. Returns the summed action cost
    /// or the first failing step.
    pub fn validate_plan(&self, steps: &[ActionId]) -> Result<u64, PlanError> {
        let mut s = self.init.clone();
        let mut cost = 0u64;
        for (i, &a) in steps.iter().enumerate() {
            if a >= self.actions.len() {
                return Err(PlanError::UnknownAction { step: i });
            }
            if !self.actions[a].pre.is_subset(&s) {
                return Err(PlanError::NotApplicable {
                    step: i,
                    action: self.actions[a].display_form(),
                });
            }
            s = self.apply(&s, a);
            cost += self.actions[a].cost as u64;
        }
        if !self.is_goal(&s) {
            return Err(PlanError::GoalNotReached);
        }
        Ok(cost)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<ActionId>,
    pub cost: u64,
}

/// One action per line in `(name args...)` form, then a cost comment.
pub fn format_plan(task: &GroundTask, plan: &Plan) -> String {
    let mut out = String::new();
    for &a in &plan.steps {
        out.push_str(&task.actions[a].display_form());
        out.push('\n');
    }
    out.push_str(&format!("; cost = {}\n", plan.cost));
    out
}

/// Inverse of [`format_plan`]. `;` lines are comments; the cost is recomputed
/// from the matched actions rather than trusted.
pub fn parse_plan(task: &GroundTask, text: &str) -> Result<Plan, PlanError> {
    let mut by_form: HashMap<String, ActionId> = HashMap::new();
    for (i, a) in task.actions.iter().enumerate() {
        by_form.insert(a.display_form(), i);
    }
    let mut steps = Vec::new();
    let mut cost = 0u64;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let tokens: Vec<&str> = line
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split_whitespace()
            .collect();
        let norm = format!("({})", tokens.join(" ")).to_ascii_lowercase();
        match by_form.get(&norm) {
            Some(&id) => {
                steps.push(id);
                cost += task.actions[id].cost as u64;
            }
            None => {
                return Err(PlanError::UnknownName {
                    line: lineno + 1,
                    text: line.to_string(),
                })
            }
        }
    }
    Ok(Plan { steps, cost })
}

struct ProtoAction {
    name: String,
    args: Vec<String>,
    pre: Vec<FactId>,
    add: Vec<FactId>,
    del: Vec<FactId>,
    cost: u32,
}

/// Incremental construction of a [`GroundTask`]; the only way facts get
/// interned. Used by the PDDL grounder and by the synthetic generators.
pub struct TaskBuilder {
    domain_name: String,
    problem_name: String,
    facts: Vec<String>,
    index: HashMap<String, FactId>,
    actions: Vec<ProtoAction>,
    init: Vec<FactId>,
    goal: Vec<FactId>,
}

impl TaskBuilder {
    pub fn new(domain_name: &str, problem_name: &str) -> Self {
        TaskBuilder {
            domain_name: domain_name.to_string(),
            problem_name: problem_name.to_string(),
            facts: Vec::new(),
            index: HashMap::new(),
            actions: Vec::new(),
            init: Vec::new(),
            goal: Vec::new(),
        }
    }

    /// Id of an already-interned fact, if any.
    pub fn lookup(&self, name: &str) -> Option<FactId> {
        self.index.get(name).copied()
    }

    /// Interns `name`, returning the existing id on repeats.
    pub fn fact(&mut self, name: &str) -> FactId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.facts.len();
        self.facts.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn action(
        &mut self,
        name: &str,
        args: &[&str],
        pre: &[FactId],
        add: &[FactId],
        del: &[FactId],
        cost: u32,
    ) -> ActionId {
        self.actions.push(ProtoAction {
            name: name.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
            pre: pre.to_vec(),
            add: add.to_vec(),
            del: del.to_vec(),
            cost,
        });
        self.actions.len() - 1
    }

    pub fn set_init(&mut self, facts: &[FactId]) {
        self.init = facts.to_vec();
    }

    pub fn set_goal(&mut self, facts: &[FactId]) {
        self.goal = facts.to_vec();
    }

    pub fn build(self) -> GroundTask {
        let n = self.facts.len();
        let pack = |ids: &[FactId]| FactSet::from_facts(n, ids);
        let actions = self
            .actions
            .iter()
            .map(|p| {
                let add = pack(&p.add);
                let mut del = pack(&p.del);
                // delete-then-add: a fact both deleted and added survives,
                // so the overlap is dropped from the delete set here.
                del.subtract(&add);
                GroundAction {
                    name: p.name.clone(),
                    args: p.args.clone(),
                    pre: pack(&p.pre),
                    add,
                    del,
                    cost: p.cost,
                }
            })
            .collect();
        GroundTask {
            domain_name: self.domain_name,
            problem_name: self.problem_name,
            init: pack(&self.init),
            goal: pack(&self.goal),
            facts: self.facts,
            actions,
        }
    }
}
