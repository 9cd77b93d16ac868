//! Small generated tasks for tests and benchmarks: fixed chains and seeded
//! random STRIPS instances.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::task::{GroundTask, TaskBuilder};

/// A path of n unit-cost steps: f0 → f1 → … → fn, goal fn.
pub fn chain_task(n: usize) -> GroundTask {
    assert!(n >= 1);
    let mut b = TaskBuilder::new("chain", &format!("chain-{n}"));
    let facts: Vec<_> = (0..=n).map(|i| b.fact(&format!("(at f{i})"))).collect();
    for i in 0..n {
        b.action(&format!("step{i}"), &[], &[facts[i]], &[facts[i + 1]], &[facts[i]], 1);
    }
    b.set_init(&[facts[0]]);
    b.set_goal(&[facts[n]]);
    b.build()
}

/// Seeded random unit-cost task over at most `max_facts` facts. Preconditions,
/// adds and deletes are small random fact sets; the goal is a random subset.
/// Nothing guarantees solvability, which is the point for oracle tests.
pub fn random_task(seed: u64, max_facts: usize, num_actions: usize) -> GroundTask {
    assert!(max_facts >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nf = rng.gen_range(2..=max_facts);
    let mut b = TaskBuilder::new("random", &format!("random-{seed}"));
    let facts: Vec<_> = (0..nf).map(|i| b.fact(&format!("(f{i})"))).collect();

    let pick = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| -> Vec<usize> {
        let k = rng.gen_range(lo..=hi.min(nf));
        let mut chosen: Vec<usize> = (0..nf).collect();
        chosen.shuffle(rng);
        chosen.truncate(k);
        chosen.sort_unstable();
        chosen.into_iter().map(|i| facts[i]).collect()
    };

    for ai in 0..num_actions {
        let pre = pick(&mut rng, 0, 2);
        let add = pick(&mut rng, 1, 2);
        let del = pick(&mut rng, 0, 1);
        b.action(&format!("a{ai}"), &[], &pre, &add, &del, 1);
    }
    let init = pick(&mut rng, 1, 3);
    let goal = pick(&mut rng, 1, 2);
    b.set_init(&init);
    b.set_goal(&goal);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{h_ff, HValue};

    #[test]
    fn chain_has_expected_shape() {
        let t = chain_task(2);
        assert_eq!(t.num_facts(), 3);
        assert_eq!(t.num_actions(), 2);
        assert_eq!(h_ff(&t, &t.init).value, HValue::finite(2.0));
        assert_eq!(t.validate_plan(&[0, 1]).unwrap(), 2);
    }

    #[test]
    fn random_tasks_are_reproducible() {
        let a = random_task(42, 8, 10);
        let b = random_task(42, 8, 10);
        assert_eq!(a.facts, b.facts);
        assert_eq!(a.init, b.init);
        assert_eq!(a.goal, b.goal);
        assert_eq!(a.actions.len(), b.actions.len());
        let c = random_task(43, 8, 10);
        // different seed, almost surely a different task
        assert!(a.init != c.init || a.goal != c.goal || a.facts != c.facts);
    }
}
