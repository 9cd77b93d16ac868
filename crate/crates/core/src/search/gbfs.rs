//! Greedy best-first search: open list ordered by h alone, FIFO among ties,
//! duplicate pruning at generation time, early goal detection.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::{Counters, Outcome, SearchConfig, SearchResult};
use crate::heuristics::Evaluator;
use crate::task::{ActionId, GroundTask, Plan, State};

struct OpenNode {
    state: State,
    parent: usize,
    action: Option<ActionId>,
}

const NO_PARENT: usize = usize::MAX;

fn extract_plan(task: &GroundTask, nodes: &[OpenNode], mut idx: usize, last: ActionId) -> Plan {
    let mut steps = vec![last];
    while idx != NO_PARENT {
        if let Some(a) = nodes[idx].action {
            steps.push(a);
        }
        idx = nodes[idx].parent;
    }
    steps.reverse();
    let cost = steps.iter().map(|&a| task.actions[a].cost as u64).sum();
    debug_assert_eq!(task.validate_plan(&steps).ok(), Some(cost));
    Plan { steps, cost }
}

pub(super) fn run(task: &GroundTask, config: &SearchConfig) -> SearchResult {
    let mut counters = Counters::new(config.max_evaluations);
    if task.is_goal(&task.init) {
        return counters.result(Outcome::Solved, Some(Plan { steps: Vec::new(), cost: 0 }));
    }

    let mut eval = Evaluator::new(config.heuristic, task);
    let root_eval = eval.evaluate(task, &task.init);
    let h_init = root_eval.value.as_f64();
    counters.count_eval(h_init, h_init);
    if root_eval.value.is_infinite() {
        return counters.result(Outcome::Exhausted, None);
    }

    let mut nodes = vec![OpenNode { state: task.init.clone(), parent: NO_PARENT, action: None }];
    // key: (h bits, insertion sequence); non-negative floats order by bits,
    // the sequence makes equal-h pops FIFO
    let mut open: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    open.push(Reverse((h_init.to_bits(), 0)));
    let mut closed: HashSet<State> = HashSet::new();
    closed.insert(task.init.clone());

    while let Some(Reverse((_, idx))) = open.pop() {
        if let Some(cap) = config.max_expansions {
            if counters.expansions >= cap {
                return counters.result(Outcome::BudgetReached, None);
            }
        }
        counters.expansions += 1;
        let state = nodes[idx].state.clone();
        for a in task.applicable_actions(&state) {
            let succ = task.apply(&state, a);
            if !closed.insert(succ.clone()) {
                continue;
            }
            if task.is_goal(&succ) {
                let plan = extract_plan(task, &nodes, idx, a);
                return counters.result(Outcome::Solved, Some(plan));
            }
            if counters.exhausted_budget() {
                return counters.result(Outcome::BudgetReached, None);
            }
            let ev = eval.evaluate(task, &succ);
            let h = ev.value.as_f64();
            counters.count_eval(h, h_init);
            if ev.value.is_infinite() {
                continue; // dead end, never enters the open list
            }
            let id = nodes.len();
            nodes.push(OpenNode { state: succ, parent: idx, action: Some(a) });
            open.push(Reverse((h.to_bits(), id)));
        }
    }
    counters.result(Outcome::Exhausted, None)
}
