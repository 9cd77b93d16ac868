//! Shared helpers for the integration suites: fixture loading and
//! brute-force oracles kept deliberately independent of the library's
//! own grounding and relaxation code.
//!
//! Each integration binary compiles its own copy, so helpers unused by one
//! binary are expected.
#![allow(dead_code)]

use std::collections::HashMap;
use std::collections::hash_map::Entry;
use std::path::PathBuf;

use thts::{ground, parse_domain, parse_problem, GroundOptions, GroundTask};

pub fn fixture_path(domain: &str, file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(domain)
        .join(file)
}

pub fn load_fixture(domain: &str, problem: &str, opts: &GroundOptions) -> GroundTask {
    let d = std::fs::read_to_string(fixture_path(domain, "domain.pddl")).unwrap();
    let p = std::fs::read_to_string(fixture_path(domain, problem)).unwrap();
    ground(&parse_domain(&d).unwrap(), &parse_problem(&p).unwrap(), opts).unwrap()
}

pub const SUITE: [(&str, &str); 12] = [
    ("blocks", "p01.pddl"),
    ("blocks", "p02.pddl"),
    ("blocks", "p03.pddl"),
    ("blocks", "p04.pddl"),
    ("gripper", "p01.pddl"),
    ("gripper", "p02.pddl"),
    ("gripper", "p03.pddl"),
    ("gripper", "p04.pddl"),
    ("delivery", "p01.pddl"),
    ("delivery", "p02.pddl"),
    ("delivery", "p03.pddl"),
    ("delivery", "p04.pddl"),
];

/// Optimal delete-relaxation cost by Dijkstra over fact-subset masks.
/// Exponential in the fact count, so callers keep tasks at <= 16 facts.
pub fn h_plus(task: &GroundTask, from: &thts::State) -> Option<u64> {
    let n = task.num_facts();
    assert!(n <= 16, "oracle is exponential in facts, got {n}");
    let mask_of = |s: &thts::State| s.iter().fold(0u64, |m, f| m | (1 << f));
    let actions: Vec<(u64, u64, u64)> = task
        .actions
        .iter()
        .map(|a| {
            (
                a.pre.iter().fold(0u64, |m, f| m | (1 << f)),
                a.add.iter().fold(0u64, |m, f| m | (1 << f)),
                u64::from(a.cost),
            )
        })
        .collect();
    let goal = task.goal.iter().fold(0u64, |m, f| m | (1 << f));

    let start = mask_of(from);
    let mut dist: HashMap<u64, u64> = HashMap::from([(start, 0)]);
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(std::cmp::Reverse((0u64, start)));
    while let Some(std::cmp::Reverse((d, s))) = heap.pop() {
        if dist.get(&s).is_some_and(|&best| d > best) {
            continue;
        }
        if s & goal == goal {
            return Some(d);
        }
        for &(pre, add, cost) in &actions {
            if s & pre != pre {
                continue;
            }
            let next = s | add;
            let nd = d + cost;
            match dist.entry(next) {
                Entry::Occupied(mut e) if *e.get() > nd => {
                    e.insert(nd);
                    heap.push(std::cmp::Reverse((nd, next)));
                }
                Entry::Vacant(e) => {
                    e.insert(nd);
                    heap.push(std::cmp::Reverse((nd, next)));
                }
                _ => {}
            }
        }
    }
    None
}

/// Ground-action count by exhaustive typed instantiation with the
/// "precondition predicate never added and fact not initially true" filter.
/// Written straight from the definitions, independent of the grounder.
pub fn naive_ground_count(domain_src: &str, problem_src: &str) -> usize {
    fn is_subtype<'a>(parent: &HashMap<&'a str, &'a str>, mut ty: &'a str, target: &str) -> bool {
        loop {
            if ty == target {
                return true;
            }
            if ty == "object" {
                return false;
            }
            ty = parent.get(ty).copied().unwrap_or("object");
        }
    }

    let d = parse_domain(domain_src).unwrap();
    let p = parse_problem(problem_src).unwrap();
    let parent: HashMap<&str, &str> =
        d.types.iter().map(|(t, par)| (t.as_str(), par.as_str())).collect();
    let objects: Vec<_> = d.constants.iter().chain(p.objects.iter()).collect();
    let init: Vec<String> = p
        .init
        .iter()
        .map(|ga| format!("{} {}", ga.pred, ga.args.join(" ")))
        .collect();
    let added: Vec<&str> =
        d.actions.iter().flat_map(|a| a.add.iter()).map(|atom| atom.pred.as_str()).collect();

    let mut count = 0;
    for schema in &d.actions {
        let domains: Vec<Vec<&str>> = schema
            .params
            .iter()
            .map(|param| {
                objects
                    .iter()
                    .filter(|o| is_subtype(&parent, &o.ty, &param.ty))
                    .map(|o| o.name.as_str())
                    .collect()
            })
            .collect();
        let total: usize = domains.iter().map(Vec::len).product();
        'tuple: for mut idx in 0..total {
            let binding: Vec<&str> = domains
                .iter()
                .map(|dom| {
                    let pick = dom[idx % dom.len()];
                    idx /= dom.len();
                    pick
                })
                .collect();
            let resolve = |t: &thts::pddl::Term| -> String {
                match t {
                    thts::pddl::Term::Var(v) => {
                        let at = schema.params.iter().position(|q| &q.name == v).unwrap();
                        binding[at].to_string()
                    }
                    thts::pddl::Term::Const(c) => c.clone(),
                }
            };
            for (x, y) in &schema.eq_pre {
                if resolve(x) != resolve(y) {
                    continue 'tuple;
                }
            }
            for atom in &schema.pre {
                let args: Vec<String> = atom.args.iter().map(&resolve).collect();
                let key = format!("{} {}", atom.pred, args.join(" "));
                if !added.contains(&atom.pred.as_str()) && !init.contains(&key) {
                    continue 'tuple;
                }
            }
            count += 1;
        }
    }
    count
}
