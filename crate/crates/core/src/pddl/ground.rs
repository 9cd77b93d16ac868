//! Schema instantiation. Equality preconditions are compiled away, actions
//! with forever-false preconditions are pruned, and by default the fact
//! universe is restricted to facts reachable under delete relaxation.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::PddlError;
use crate::task::{GroundTask, TaskBuilder};

#[derive(Clone, Copy, Debug, Default)]
pub struct GroundOptions {
    /// Force every action cost to 1 even when the domain declares costs.
    pub unit_costs: bool,
    /// Keep the full statically-valid instantiation instead of restricting
    /// facts and actions to the delete-relaxation reachable set.
    pub full_universe: bool,
}

struct Candidate {
    name: String,
    args: Vec<String>,
    pre: Vec<String>,
    add: Vec<String>,
    del: Vec<String>,
    cost: u32,
}

fn fact_key<S: AsRef<str>>(pred: &str, args: &[S]) -> String {
    let mut s = String::from("(");
    s.push_str(pred);
    for a in args {
        s.push(' ');
        s.push_str(a.as_ref());
    }
    s.push(')');
    s
}

/// Walks the type hierarchy from `ty` up to the root. The hop limit guards
/// against declaration cycles.
fn subtype_of<'a>(
    parent: &HashMap<&'a str, &'a str>,
    limit: usize,
    mut ty: &'a str,
    target: &str,
) -> Result<bool, PddlError> {
    let mut hops = 0;
    loop {
        if ty == target {
            return Ok(true);
        }
        if ty == "object" {
            return Ok(false);
        }
        ty = parent.get(ty).copied().unwrap_or("object");
        hops += 1;
        if hops > limit {
            return Err(PddlError::Ground(format!("type cycle involving {ty}")));
        }
    }
}

pub fn ground(d: &Domain, p: &Problem, opts: &GroundOptions) -> Result<GroundTask, PddlError> {
    if p.domain != d.name {
        return Err(PddlError::Ground(format!(
            "problem {} is for domain {}, not {}",
            p.name, p.domain, d.name
        )));
    }

    // type hierarchy, rooted at `object`
    let mut parent: HashMap<&str, &str> = HashMap::new();
    for (t, par) in &d.types {
        parent.insert(t, par);
    }
    let hop_limit = d.types.len() + 1;

    // objects = domain constants then problem objects, declaration order
    let mut objects: Vec<&TypedName> = Vec::new();
    let mut seen = HashSet::new();
    for tn in d.constants.iter().chain(p.objects.iter()) {
        if !seen.insert(tn.name.as_str()) {
            return Err(PddlError::Ground(format!("object {} declared twice", tn.name)));
        }
        if tn.ty != "object" && !d.types.iter().any(|(t, _)| *t == tn.ty) {
            return Err(PddlError::Ground(format!(
                "object {} has undeclared type {}",
                tn.name, tn.ty
            )));
        }
        objects.push(tn);
    }
    let object_type = |name: &str| objects.iter().find(|o| o.name == name).map(|o| o.ty.as_str());

    let decl = |pred: &str| d.predicates.iter().find(|q| q.name == pred);
    let check_ground_atom = |ga: &GroundAtom, where_: &str| -> Result<(), PddlError> {
        let q = decl(&ga.pred).ok_or_else(|| {
            PddlError::Ground(format!("{where_}: undeclared predicate {}", ga.pred))
        })?;
        if q.param_types.len() != ga.args.len() {
            return Err(PddlError::Ground(format!(
                "{where_}: {} expects {} arguments, got {}",
                ga.pred,
                q.param_types.len(),
                ga.args.len()
            )));
        }
        for (obj, want) in ga.args.iter().zip(q.param_types.iter()) {
            let ty = object_type(obj).ok_or_else(|| {
                PddlError::Ground(format!("{where_}: undeclared object {obj}"))
            })?;
            if !subtype_of(&parent, hop_limit, ty, want)? {
                return Err(PddlError::Ground(format!(
                    "{where_}: object {obj} of type {ty} where {want} is required"
                )));
            }
        }
        Ok(())
    };
    for ga in &p.init {
        check_ground_atom(ga, "init")?;
    }
    for ga in &p.goal {
        check_ground_atom(ga, "goal")?;
    }

    let init_keys: Vec<String> = p
        .init
        .iter()
        .map(|ga| fact_key(&ga.pred, &ga.args.iter().map(String::as_str).collect::<Vec<_>>()))
        .collect();
    let init_set: HashSet<&str> = init_keys.iter().map(String::as_str).collect();

    // a precondition fact can never hold if its predicate is never added and
    // the fact is not initially true
    let mut added_preds: HashSet<&str> = HashSet::new();
    for a in &d.actions {
        for atom in &a.add {
            added_preds.insert(&atom.pred);
        }
    }

    let mut candidates: Vec<Candidate> = Vec::new();
    for schema in &d.actions {
        let mut domains: Vec<Vec<&str>> = Vec::new();
        for param in &schema.params {
            let mut objs = Vec::new();
            for o in &objects {
                if subtype_of(&parent, hop_limit, &o.ty, &param.ty)? {
                    objs.push(o.name.as_str());
                }
            }
            domains.push(objs);
        }
        if domains.iter().any(|d| d.is_empty()) {
            continue;
        }
        let var_index = |v: &str| schema.params.iter().position(|q| q.name == v);

        let mut counters = vec![0usize; domains.len()];
        'bindings: loop {
            let binding: Vec<&str> =
                counters.iter().zip(domains.iter()).map(|(&c, d)| d[c]).collect();

            let resolve = |t: &Term| -> String {
                match t {
                    Term::Var(v) => binding[var_index(v).unwrap()].to_string(),
                    Term::Const(c) => c.clone(),
                }
            };
            let eq_ok = schema.eq_pre.iter().all(|(x, y)| resolve(x) == resolve(y));
            if eq_ok {
                let inst = |atoms: &[Atom]| -> Vec<String> {
                    atoms
                        .iter()
                        .map(|a| {
                            fact_key(&a.pred, &a.args.iter().map(&resolve).collect::<Vec<_>>())
                        })
                        .collect()
                };
                let pre = inst(&schema.pre);
                let forever_false = pre.iter().zip(schema.pre.iter()).any(|(key, atom)| {
                    !added_preds.contains(atom.pred.as_str()) && !init_set.contains(key.as_str())
                });
                if !forever_false {
                    candidates.push(Candidate {
                        name: schema.name.clone(),
                        args: binding.iter().map(|s| s.to_string()).collect(),
                        pre,
                        add: inst(&schema.add),
                        del: inst(&schema.del),
                        cost: if opts.unit_costs { 1 } else { schema.cost.unwrap_or(1) },
                    });
                }
            }

            // odometer over the typed object domains
            if domains.is_empty() {
                break;
            }
            let mut i = domains.len();
            loop {
                if i == 0 {
                    break 'bindings;
                }
                i -= 1;
                counters[i] += 1;
                if counters[i] < domains[i].len() {
                    break;
                }
                counters[i] = 0;
            }
        }
    }

    // Intern the fact universe in a deterministic order: init facts first,
    // then adds in the order the relaxation reaches them (or every mentioned
    // fact when the full universe is requested), then goal facts.
    let mut builder = TaskBuilder::new(&d.name, &p.name);
    for key in &init_keys {
        builder.fact(key);
    }
    let kept: Vec<usize> = if opts.full_universe {
        for c in &candidates {
            for key in c.pre.iter().chain(c.add.iter()).chain(c.del.iter()) {
                builder.fact(key);
            }
        }
        (0..candidates.len()).collect()
    } else {
        let mut reached: HashSet<String> = init_set.iter().map(|s| s.to_string()).collect();
        let mut fired = vec![false; candidates.len()];
        loop {
            let mut progress = false;
            for (i, c) in candidates.iter().enumerate() {
                if fired[i] || !c.pre.iter().all(|k| reached.contains(k)) {
                    continue;
                }
                fired[i] = true;
                progress = true;
                for key in &c.add {
                    if reached.insert(key.clone()) {
                        builder.fact(key);
                    }
                }
            }
            if !progress {
                break;
            }
        }
        (0..candidates.len()).filter(|&i| fired[i]).collect()
    };
    let goal_ids: Vec<_> = p
        .goal
        .iter()
        .map(|ga| {
            let key =
                fact_key(&ga.pred, &ga.args.iter().map(String::as_str).collect::<Vec<_>>());
            builder.fact(&key)
        })
        .collect();

    for &i in &kept {
        let c = &candidates[i];
        let pre: Vec<_> = c.pre.iter().map(|k| builder.lookup(k).unwrap()).collect();
        let add: Vec<_> = c.add.iter().map(|k| builder.lookup(k).unwrap()).collect();
        // deletes of facts outside the universe are no-ops and are dropped
        let del: Vec<_> = c.del.iter().filter_map(|k| builder.lookup(k)).collect();
        let args: Vec<&str> = c.args.iter().map(String::as_str).collect();
        builder.action(&c.name, &args, &pre, &add, &del, c.cost);
    }

    let init_ids: Vec<_> = init_keys.iter().map(|k| builder.lookup(k).unwrap()).collect();
    builder.set_init(&init_ids);
    builder.set_goal(&goal_ids);
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_problem};

    fn task(dsrc: &str, psrc: &str, opts: &GroundOptions) -> Result<GroundTask, PddlError> {
        ground(&parse_domain(dsrc).unwrap(), &parse_problem(psrc).unwrap(), opts)
    }

    const MOVE: &str = "(define (domain move)
        (:predicates (at ?x) (visited ?x))
        (:action go :parameters (?x) :precondition (at ?x) :effect (visited ?x)))";

    #[test]
    fn one_parameter_two_objects_two_actions() {
        let p = "(define (problem p) (:domain move) (:objects a b)
            (:init (at a) (at b)) (:goal (and (visited a))))";
        let t = task(MOVE, p, &GroundOptions::default()).unwrap();
        assert_eq!(t.actions.len(), 2);
        assert_eq!(t.actions[0].display_form(), "(go a)");
        assert_eq!(t.actions[1].display_form(), "(go b)");
    }

    #[test]
    fn statically_false_preconditions_prune_the_schema() {
        // nothing ever adds `at`, and `at c` is not initially true
        let p = "(define (problem p) (:domain move) (:objects c)
            (:init) (:goal (and)))";
        let t = task(MOVE, p, &GroundOptions::default()).unwrap();
        assert_eq!(t.actions.len(), 0);
    }

    #[test]
    fn equality_preconditions_select_the_diagonal() {
        let d = "(define (domain eq) (:requirements :equality)
            (:predicates (p ?x) (q ?x ?y))
            (:action pair :parameters (?x ?y)
              :precondition (and (p ?x) (= ?x ?y))
              :effect (q ?x ?y)))";
        let p = "(define (problem p) (:domain eq) (:objects a b c)
            (:init (p a) (p b) (p c)) (:goal (and (q a a))))";
        let t = task(d, p, &GroundOptions::default()).unwrap();
        assert_eq!(t.actions.len(), 3);
        for (act, obj) in t.actions.iter().zip(["a", "b", "c"]) {
            assert_eq!(act.display_form(), format!("(pair {obj} {obj})"));
        }
    }

    #[test]
    fn typing_restricts_bindings_through_the_hierarchy() {
        let d = "(define (domain ty) (:requirements :typing)
            (:types vehicle - object truck - vehicle)
            (:predicates (ready ?v - vehicle) (rolling ?v - vehicle))
            (:action start :parameters (?v - vehicle)
              :precondition (ready ?v) :effect (rolling ?v)))";
        let p = "(define (problem p) (:domain ty)
            (:objects t1 - truck v1 - vehicle rock)
            (:init (ready t1) (ready v1)) (:goal (and (rolling t1))))";
        let t = task(d, p, &GroundOptions::default()).unwrap();
        // rock is a plain object, so only the two vehicles instantiate ?v
        assert_eq!(t.actions.len(), 2);
        assert_eq!(t.actions[0].display_form(), "(start t1)");
        assert_eq!(t.actions[1].display_form(), "(start v1)");
    }

    #[test]
    fn relaxed_universe_drops_unreachable_instantiations() {
        let d = "(define (domain chain)
            (:predicates (a) (b) (c) (unused))
            (:action ab :parameters () :precondition (a) :effect (b))
            (:action bc :parameters () :precondition (b) :effect (c))
            (:action blocked :parameters () :precondition (unused) :effect (c)))";
        // `unused` is added by nothing and not initially true, so `blocked`
        // is statically pruned in both modes
        let p = "(define (problem p) (:domain chain) (:init (a)) (:goal (and (c))))";
        let t = task(d, p, &GroundOptions::default()).unwrap();
        assert_eq!(t.actions.len(), 2);
        assert_eq!(t.facts.len(), 3);

        // with an empty init, `ab` is statically pruned too (nothing adds
        // `a`), and `bc` survives only in the full universe
        let p2 = "(define (problem p) (:domain chain) (:init) (:goal (and (c))))";
        let relaxed = task(d, p2, &GroundOptions::default()).unwrap();
        assert_eq!(relaxed.actions.len(), 0);
        let full = task(d, p2, &GroundOptions { full_universe: true, ..Default::default() })
            .unwrap();
        assert_eq!(full.actions.len(), 1);
    }

    #[test]
    fn unit_cost_option_flattens_declared_costs() {
        let d = "(define (domain c) (:requirements :action-costs)
            (:predicates (p) (q)) (:functions (total-cost))
            (:action a :parameters () :precondition (p)
              :effect (and (q) (increase (total-cost) 7))))";
        let p = "(define (problem p) (:domain c) (:init (p)) (:goal (and (q))))";
        let costly = task(d, p, &GroundOptions::default()).unwrap();
        assert_eq!(costly.actions[0].cost, 7);
        let unit = task(d, p, &GroundOptions { unit_costs: true, ..Default::default() }).unwrap();
        assert_eq!(unit.actions[0].cost, 1);
    }

    #[test]
    fn mismatches_are_reported_by_name() {
        let wrong = "(define (problem p) (:domain other) (:init) (:goal (and)))";
        let msg = task(MOVE, wrong, &GroundOptions::default()).unwrap_err().to_string();
        assert!(msg.contains("domain move") || msg.contains("not move"), "{msg}");

        let undeclared_obj = "(define (problem p) (:domain move) (:objects a)
            (:init (at a)) (:goal (and (visited ghost))))";
        let msg = task(MOVE, undeclared_obj, &GroundOptions::default()).unwrap_err().to_string();
        assert!(msg.contains("undeclared object ghost"), "{msg}");

        let arity = "(define (problem p) (:domain move) (:objects a)
            (:init (at a a)) (:goal (and)))";
        let msg = task(MOVE, arity, &GroundOptions::default()).unwrap_err().to_string();
        assert!(msg.contains("expects 1 arguments"), "{msg}");

        let twice = "(define (problem p) (:domain move) (:objects a a)
            (:init) (:goal (and)))";
        let msg = task(MOVE, twice, &GroundOptions::default()).unwrap_err().to_string();
        assert!(msg.contains("declared twice"), "{msg}");
    }

    #[test]
    fn goal_facts_join_the_universe_even_when_unreachable() {
        let p = "(define (problem p) (:domain move) (:objects a b)
            (:init (at a)) (:goal (and (visited b))))";
        let t = task(MOVE, p, &GroundOptions::default()).unwrap();
        // (go b) is statically alive but never fires in the relaxation
        assert_eq!(t.actions.len(), 1);
        assert!(t.facts.iter().any(|f| f == "(visited b)"));
        assert!(crate::heuristics::h_max(&t, &t.init).is_infinite());
    }
}
