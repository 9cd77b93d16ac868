//! Randomized invariant checks across the bandit, task, and simulator
//! layers.

use proptest::prelude::*;
use thts::bandit::{index, mle_uniform, PolicyConfig, PolicyKind, UniformVariant};
use thts::synthetic::random_task;
use thts::{cumulative_regret, select_arm, simulate, ArmSpec, ArmStats, Direction};

fn quarter_ints(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-400i32..400).prop_map(|k| f64::from(k) / 4.0), len)
}

fn policies() -> Vec<PolicyConfig> {
    let mut out = Vec::new();
    for kind in
        [PolicyKind::Ucb1, PolicyKind::Ucb1Normal, PolicyKind::Ucb1Normal2, PolicyKind::Ucb1Uniform]
    {
        for direction in [Direction::Minimize, Direction::Maximize] {
            let mut cfg = PolicyConfig::new(kind, direction);
            cfg.c = 0.7;
            out.push(cfg);
            if kind == PolicyKind::Ucb1Uniform {
                cfg.uniform_variant = UniformVariant::Shrinking;
                out.push(cfg);
            }
        }
    }
    out
}

proptest! {
    // The optimistic and pessimistic indices mirror each other around the
    // policy's center estimate.
    #[test]
    fn ucb_and_lcb_are_symmetric(xs in quarter_ints(1..40), total_ln in 0.0f64..14.0) {
        let s = ArmStats::from_samples(&xs);
        let total = total_ln.exp();
        let scale = 1.0 + xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for kind in [
            PolicyKind::Ucb1,
            PolicyKind::Ucb1Normal,
            PolicyKind::Ucb1Normal2,
            PolicyKind::Ucb1Uniform,
        ] {
            let center = match kind {
                PolicyKind::Ucb1Uniform => s.midrange(),
                _ => s.mean(),
            };
            let up = index(&s, total, &PolicyConfig::new(kind, Direction::Maximize));
            let down = index(&s, total, &PolicyConfig::new(kind, Direction::Minimize));
            prop_assert!((up + down - 2.0 * center).abs() <= 1e-9 * scale, "{kind:?}");
        }
    }

    // Shifting every sample by a constant shifts every index by the same
    // constant: the spread estimates are location-free.
    #[test]
    fn indices_are_shift_equivariant(
        xs in quarter_ints(1..30),
        shift in -50i32..50,
        total_ln in 0.0f64..10.0,
    ) {
        let delta = f64::from(shift);
        let total = total_ln.exp();
        let base = ArmStats::from_samples(&xs);
        let moved_samples: Vec<f64> = xs.iter().map(|x| x + delta).collect();
        let moved = ArmStats::from_samples(&moved_samples);
        let scale = 1.0 + xs.iter().fold(0.0f64, |m, x| m.max(x.abs())) + delta.abs();
        for cfg in policies() {
            let a = index(&base, total, &cfg) + delta;
            let b = index(&moved, total, &cfg);
            prop_assert!((a - b).abs() <= 1e-8 * scale, "{:?}: {a} vs {b}", cfg.kind);
        }
    }

    // More samples can only widen the uniform support estimate.
    #[test]
    fn uniform_mle_widens_with_more_samples(
        first in quarter_ints(1..20),
        more in quarter_ints(0..20),
    ) {
        let narrow = ArmStats::from_samples(&first);
        let mut all = narrow;
        for &x in &more {
            all.update(x);
        }
        let (l1, u1) = mle_uniform(&narrow).unwrap();
        let (l2, u2) = mle_uniform(&all).unwrap();
        prop_assert!(l2 <= l1 && u2 >= u1);
    }

    // Unvisited arms are pulled before any index is consulted, lowest
    // index first.
    #[test]
    fn unvisited_arms_go_first(
        mut sample_sets in prop::collection::vec(quarter_ints(0..6), 2..8),
        hole in 0usize..8,
    ) {
        let hole = hole % sample_sets.len();
        sample_sets[hole] = Vec::new();
        let arms: Vec<ArmStats> =
            sample_sets.iter().map(|xs| ArmStats::from_samples(xs)).collect();
        let total = arms.iter().map(|a| a.t).sum::<u64>().max(1);
        let first_empty = arms.iter().position(|a| a.t == 0).unwrap();
        for cfg in policies() {
            prop_assert_eq!(select_arm(&arms, total, &cfg), first_empty);
        }
    }

    // With every arm visited and force-pull off, selection is an argbest
    // scan with ties to the lowest arm index.
    #[test]
    fn selection_is_an_argbest_scan(
        sample_sets in prop::collection::vec(quarter_ints(1..6), 2..8),
        total_extra in 0u64..100,
    ) {
        let arms: Vec<ArmStats> =
            sample_sets.iter().map(|xs| ArmStats::from_samples(xs)).collect();
        let total = arms.iter().map(|a| a.t).sum::<u64>() + total_extra.max(1);
        for mut cfg in policies() {
            cfg.normal_force_pull = false;
            let got = select_arm(&arms, total, &cfg);
            let expect = arms
                .iter()
                .enumerate()
                .map(|(i, a)| (i, index(a, total as f64, &cfg)))
                .reduce(|best, cand| if cfg.direction.better(cand.1, best.1) { cand } else { best })
                .unwrap()
                .0;
            prop_assert_eq!(got, expect, "{:?}", cfg.kind);
        }
    }

    // Ground-task application is a pure function of (state, action), and
    // applicable-action lists come back sorted and deduplicated.
    #[test]
    fn applying_actions_is_deterministic(task_seed in 0u64..500, walk in 0u64..1000) {
        let task = random_task(task_seed, 10, 12);
        let replay = || {
            let mut s = task.init.clone();
            let mut trail = Vec::new();
            let mut step = walk;
            for _ in 0..30 {
                let apps = task.applicable_actions(&s);
                if apps.is_empty() {
                    break;
                }
                let mut sorted = apps.clone();
                sorted.dedup();
                sorted.sort_unstable();
                assert_eq!(apps, sorted);
                let a = apps[(step % apps.len() as u64) as usize];
                step = step.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                s = task.apply(&s, a);
                trail.push(s.clone());
            }
            trail
        };
        prop_assert_eq!(replay(), replay());
    }

    // Expected cumulative regret is non-negative, non-decreasing in T, and
    // the checkpointed totals agree with a recount of the pull log.
    #[test]
    fn regret_traces_are_monotone_and_consistent(
        arm_values in prop::collection::vec(0u8..10, 2..5),
        horizon in 20u64..200,
        seed in 0u64..50,
    ) {
        let arms: Vec<ArmSpec> =
            arm_values.iter().map(|&v| ArmSpec::Point(f64::from(v))).collect();
        let cfg = PolicyConfig::new(PolicyKind::Ucb1, Direction::Maximize);
        let trace = simulate(&arms, &cfg, horizon, seed);
        prop_assert_eq!(trace.pulls.len(), horizon as usize);
        let mut running = 0.0;
        for &inc in &trace.increments {
            prop_assert!(inc >= 0.0);
            running += inc;
        }
        prop_assert!((running - trace.total).abs() <= 1e-9 * (1.0 + running));
        prop_assert!((cumulative_regret(&trace, &arms, cfg.direction) - trace.total).abs() <= 1e-9);
        let mut last = 0.0;
        for &(_, r) in &trace.checkpoints {
            prop_assert!(r >= last - 1e-12);
            last = r;
        }
        prop_assert_eq!(trace.checkpoints.last().map(|&(t, _)| t), Some(horizon));
    }
}
