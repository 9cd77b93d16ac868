//! Forward heuristic search: GBFS over a priority-queue open list, and
//! trial-based tree search over a bandit-guided tree open list.

mod gbfs;
mod thts;
pub mod tree;

pub use thts::select_child;
pub use tree::{SearchTree, TreeNode};

use crate::bandit::{PolicyKind, UniformVariant};
use crate::heuristics::HeuristicKind;
use crate::task::{GroundTask, Plan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize)]
pub enum Algorithm {
    #[serde(rename = "gbfs")]
    Gbfs,
    #[serde(rename = "guct")]
    Guct,
    #[serde(rename = "guct-star")]
    GuctStar,
    #[serde(rename = "guct-normal")]
    GuctNormal,
    #[serde(rename = "guct-star-normal")]
    GuctStarNormal,
    #[serde(rename = "guct-normal2")]
    GuctNormal2,
    #[serde(rename = "guct-star-normal2")]
    GuctStarNormal2,
    #[serde(rename = "guct-plus-normal2")]
    GuctPlusNormal2,
    #[serde(rename = "guct-uniform")]
    GuctUniform,
}

/// How interior value estimates are formed from subtree leaf rewards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackupRule {
    /// Mean over live subtree leaves.
    MonteCarlo,
    /// Minimum over live subtree leaves.
    FullBellman,
    /// Gaussian minimum estimate via Clark's moment combination.
    Clark,
    /// Both extremes; the selection center is their midrange.
    MinMax,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Gbfs,
        Algorithm::Guct,
        Algorithm::GuctStar,
        Algorithm::GuctNormal,
        Algorithm::GuctStarNormal,
        Algorithm::GuctNormal2,
        Algorithm::GuctStarNormal2,
        Algorithm::GuctPlusNormal2,
        Algorithm::GuctUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gbfs => "gbfs",
            Algorithm::Guct => "guct",
            Algorithm::GuctStar => "guct-star",
            Algorithm::GuctNormal => "guct-normal",
            Algorithm::GuctStarNormal => "guct-star-normal",
            Algorithm::GuctNormal2 => "guct-normal2",
            Algorithm::GuctStarNormal2 => "guct-star-normal2",
            Algorithm::GuctPlusNormal2 => "guct-plus-normal2",
            Algorithm::GuctUniform => "guct-uniform",
        }
    }

    /// Bandit index family used during selection; None for gbfs.
    pub fn policy_kind(self) -> Option<PolicyKind> {
        match self {
            Algorithm::Gbfs => None,
            Algorithm::Guct | Algorithm::GuctStar => Some(PolicyKind::Ucb1),
            Algorithm::GuctNormal | Algorithm::GuctStarNormal => Some(PolicyKind::Ucb1Normal),
            Algorithm::GuctNormal2
            | Algorithm::GuctStarNormal2
            | Algorithm::GuctPlusNormal2 => Some(PolicyKind::Ucb1Normal2),
            Algorithm::GuctUniform => Some(PolicyKind::Ucb1Uniform),
        }
    }

    /// Backup rule feeding selection centers; None for gbfs.
    pub fn backup_rule(self) -> Option<BackupRule> {
        match self {
            Algorithm::Gbfs => None,
            Algorithm::Guct | Algorithm::GuctNormal | Algorithm::GuctNormal2 => {
                Some(BackupRule::MonteCarlo)
            }
            Algorithm::GuctStar | Algorithm::GuctStarNormal | Algorithm::GuctStarNormal2 => {
                Some(BackupRule::FullBellman)
            }
            Algorithm::GuctPlusNormal2 => Some(BackupRule::Clark),
            Algorithm::GuctUniform => Some(BackupRule::MinMax),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s} (expected one of gbfs, guct, guct-star, guct-normal, guct-star-normal, guct-normal2, guct-star-normal2, guct-plus-normal2, guct-uniform)"))
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize)]
pub enum PreferredMode {
    #[default]
    #[serde(rename = "off")]
    Off,
    #[serde(rename = "boost")]
    Boost,
}

impl std::str::FromStr for PreferredMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(PreferredMode::Off),
            "boost" => Ok(PreferredMode::Boost),
            other => Err(format!("unknown preferred-operator mode {other} (expected off|boost)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub heuristic: HeuristicKind,
    /// Hard cap on heuristic evaluations; exhausting it is an outcome, not
    /// an error.
    pub max_evaluations: u64,
    pub max_expansions: Option<u64>,
    /// Recorded in results and logs. Search itself is deterministic: every
    /// tie is broken by insertion order.
    pub seed: u64,
    pub preferred: PreferredMode,
    /// Exploration rate for the ucb1-family index.
    pub c: f64,
    pub uniform_variant: UniformVariant,
    pub normal_force_pull: bool,
    /// One stderr line per trial.
    pub log_trials: bool,
}

impl SearchConfig {
    pub fn new(algorithm: Algorithm, heuristic: HeuristicKind) -> Self {
        SearchConfig {
            algorithm,
            heuristic,
            max_evaluations: 10_000,
            max_expansions: None,
            seed: 0,
            preferred: PreferredMode::Off,
            c: 1.0,
            uniform_variant: UniformVariant::Growing,
            normal_force_pull: true,
            log_trials: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    /// The reachable space was exhausted without reaching the goal.
    Exhausted,
    BudgetReached,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Solved => "solved",
            Outcome::Exhausted => "exhausted",
            Outcome::BudgetReached => "budget-reached",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub plan: Option<Plan>,
    pub evaluations: u64,
    pub expansions: u64,
    /// Evaluated states with h(s) > h(init), dead ends included.
    pub evaluated_above_init: u64,
    /// evaluated_above_init / evaluations; 0 when nothing was evaluated.
    pub frac_h_above_init: f64,
}

impl SearchResult {
    pub fn solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }
}

/// Shared bookkeeping for both drivers.
pub(crate) struct Counters {
    pub max_evaluations: u64,
    pub evaluations: u64,
    pub expansions: u64,
    pub above_init: u64,
}

impl Counters {
    pub fn new(max_evaluations: u64) -> Self {
        assert!(max_evaluations > 0, "evaluation budget must be positive");
        Counters { max_evaluations, evaluations: 0, expansions: 0, above_init: 0 }
    }

    pub fn exhausted_budget(&self) -> bool {
        self.evaluations >= self.max_evaluations
    }

    pub fn count_eval(&mut self, h: f64, h_init: f64) {
        self.evaluations += 1;
        if h > h_init {
            self.above_init += 1;
        }
    }

    pub fn result(&self, outcome: Outcome, plan: Option<Plan>) -> SearchResult {
        let frac = if self.evaluations == 0 {
            0.0
        } else {
            self.above_init as f64 / self.evaluations as f64
        };
        SearchResult {
            outcome,
            plan,
            evaluations: self.evaluations,
            expansions: self.expansions,
            evaluated_above_init: self.above_init,
            frac_h_above_init: frac,
        }
    }
}

pub fn run_search(task: &GroundTask, config: &SearchConfig) -> SearchResult {
    match config.algorithm {
        Algorithm::Gbfs => gbfs::run(task, config),
        _ => thts::run(task, config),
    }
}
