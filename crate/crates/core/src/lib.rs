//! Classical-planning toolkit: STRIPS tasks with a PDDL front end,
//! delete-relaxation heuristics, greedy best-first search, and a family of
//! bandit-guided tree searches whose selection/backup rules are built from
//! the confidence-bound policies in [`bandit`]. A synthetic bandit simulator
//! and a benchmark harness round it out.

pub mod bandit;
pub mod bench;
pub mod heuristics;
pub mod pddl;
pub mod search;
pub mod sim;
pub mod synthetic;
pub mod task;

pub use bandit::{
    clark_extreme_moments, gp_pdf, index_ucb1, index_ucb1_normal, index_ucb1_normal2,
    index_ucb1_uniform, mle_gaussian, mle_uniform, select_arm, ArmStats, Direction, GpParams,
    PolicyConfig, PolicyKind, UniformVariant,
};
pub use bench::{ipc_score, run_suite, RunRecord, SuiteConfig, SuiteReport};
pub use heuristics::{Evaluation, Evaluator, HValue, HeuristicKind};
pub use pddl::{ground, parse_domain, parse_problem, GroundOptions, PddlError};
pub use search::{
    run_search, select_child, Algorithm, BackupRule, Outcome, PreferredMode, SearchConfig,
    SearchResult, SearchTree,
};
pub use sim::{cumulative_regret, format_arms, parse_arms, simulate, ArmSpec, RegretTrace};
pub use task::{GroundAction, GroundTask, Plan, PlanError, State, TaskBuilder};
