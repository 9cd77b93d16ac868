//! Benchmark harness: algorithm × heuristic × seed grids over PDDL suites
//! under an evaluation budget, with CSV output and IPC-style scoring.
//!
//! The primary budget is the evaluation count. Wall-clock time is recorded
//! per row; the optional `time_limit_s` is advisory only (a warning, never a
//! changed outcome).

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;

use crate::heuristics::HeuristicKind;
use crate::pddl::{ground, parse_domain, parse_problem, GroundOptions};
use crate::search::{run_search, Algorithm, PreferredMode, SearchConfig};
use crate::task::{format_plan, parse_plan, GroundTask};

#[derive(Clone, Debug, Deserialize)]
pub struct ProblemEntry {
    pub domain: PathBuf,
    pub problem: PathBuf,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_evals() -> u64 {
    10_000
}

fn default_c() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub problems: Vec<ProblemEntry>,
    pub algorithms: Vec<Algorithm>,
    pub heuristics: Vec<HeuristicKind>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_evals")]
    pub evals: u64,
    #[serde(default)]
    pub max_expansions: Option<u64>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub po: PreferredMode,
    #[serde(default)]
    pub uniform_exploration: crate::bandit::UniformVariant,
    #[serde(default = "default_true")]
    pub normal_force_pull: bool,
    #[serde(default)]
    pub unit_costs: bool,
    #[serde(default)]
    pub full_universe: bool,
    /// Zero out wall_time_s in the CSV so reruns compare bit-identically.
    #[serde(default)]
    pub deterministic_timing: bool,
    #[serde(default)]
    pub time_limit_s: Option<f64>,
    #[serde(default)]
    pub plan_dir: Option<PathBuf>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, String> {
        let cfg: SuiteConfig = toml::from_str(s).map_err(|e| format!("bad suite config: {e}"))?;
        if cfg.problems.is_empty() || cfg.algorithms.is_empty() || cfg.heuristics.is_empty() {
            return Err("suite config needs problems, algorithms and heuristics".to_string());
        }
        if cfg.seeds.is_empty() {
            return Err("suite config needs at least one seed".to_string());
        }
        if cfg.evals == 0 {
            return Err("evaluation budget must be positive".to_string());
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::from_toml_str(&text)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub domain: String,
    pub problem: String,
    pub algorithm: Algorithm,
    pub heuristic: HeuristicKind,
    pub seed: u64,
    pub solved: bool,
    pub evaluations: u64,
    pub expansions: u64,
    pub plan_length: u64,
    pub plan_cost: u64,
    pub wall_time_s: f64,
    pub frac_h_above_init: f64,
}

pub struct SuiteReport {
    pub records: Vec<RunRecord>,
    pub csv: String,
}

/// Six significant digits, plain decimal notation.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".to_string();
    }
    let prec = (5 - x.abs().log10().floor() as i32).clamp(0, 17) as usize;
    format!("{x:.prec$}")
}

/// Σ over solved runtimes of (1 − ln t/ln limit), each clamped to [0, 1].
/// Instant solves score 1, solves at or beyond the limit score 0.
pub fn ipc_score(times: &[f64], limit: f64) -> f64 {
    assert!(limit > 1.0, "ipc limit must exceed one second");
    times
        .iter()
        .map(|&t| {
            assert!(t >= 0.0, "runtimes are non-negative");
            (1.0 - t.ln() / limit.ln()).clamp(0.0, 1.0)
        })
        .sum()
}

pub const CSV_HEADER: &str =
    "domain,problem,algorithm,heuristic,seed,solved,evaluations,expansions,plan_length,plan_cost,wall_time_s,frac_h_above_init";

fn csv_row(r: &RunRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.domain,
        r.problem,
        r.algorithm,
        r.heuristic,
        r.seed,
        r.solved as u8,
        r.evaluations,
        r.expansions,
        r.plan_length,
        r.plan_cost,
        fmt_sig6(r.wall_time_s),
        fmt_sig6(r.frac_h_above_init),
    )
}

/// Rows in record order, then one `# summary` comment line per
/// (algorithm, heuristic) pair in config order with arithmetic means over
/// that pair's rows and its IPC score over solved rows.
pub fn build_csv(
    records: &[RunRecord],
    algorithms: &[Algorithm],
    heuristics: &[HeuristicKind],
) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 2));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    for &alg in algorithms {
        for &h in heuristics {
            let rows: Vec<&RunRecord> =
                records.iter().filter(|r| r.algorithm == alg && r.heuristic == h).collect();
            if rows.is_empty() {
                continue;
            }
            let n = rows.len() as f64;
            let mean_solved = rows.iter().filter(|r| r.solved).count() as f64 / n;
            let mean_evals = rows.iter().map(|r| r.evaluations as f64).sum::<f64>() / n;
            let mean_wall = rows.iter().map(|r| r.wall_time_s).sum::<f64>() / n;
            let solved_times: Vec<f64> =
                rows.iter().filter(|r| r.solved).map(|r| r.wall_time_s).collect();
            let ipc = ipc_score(&solved_times, 300.0);
            out.push_str(&format!(
                "# summary algorithm={alg} heuristic={h} mean_solved={} mean_evaluations={} mean_wall_time_s={} ipc_score={}\n",
                fmt_sig6(mean_solved),
                fmt_sig6(mean_evals),
                fmt_sig6(mean_wall),
                fmt_sig6(ipc),
            ));
        }
    }
    out
}

fn file_stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "unknown".into())
}

fn load_task(entry: &ProblemEntry, opts: &GroundOptions) -> Result<GroundTask, String> {
    let dtext = std::fs::read_to_string(&entry.domain)
        .map_err(|e| format!("cannot read {}: {e}", entry.domain.display()))?;
    let ptext = std::fs::read_to_string(&entry.problem)
        .map_err(|e| format!("cannot read {}: {e}", entry.problem.display()))?;
    let dom = parse_domain(&dtext).map_err(|e| format!("{}: {e}", entry.domain.display()))?;
    let prob = parse_problem(&ptext).map_err(|e| format!("{}: {e}", entry.problem.display()))?;
    ground(&dom, &prob, opts).map_err(|e| format!("{}: {e}", entry.problem.display()))
}

fn write_plan_file(
    dir: &Path,
    r: &RunRecord,
    task: &GroundTask,
    plan: &crate::task::Plan,
) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let name = format!("{}_{}_{}_s{}.plan", r.problem, r.algorithm, r.heuristic, r.seed);
    let path = dir.join(name);
    let text = format_plan(task, plan);
    std::fs::write(&path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    // the written file must survive a parse/validate round trip
    let back = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot reread {}: {e}", path.display()))?;
    let reparsed = parse_plan(task, &back).map_err(|e| format!("{}: {e}", path.display()))?;
    task.validate_plan(&reparsed.steps)
        .map_err(|e| format!("{} does not validate: {e}", path.display()))?;
    Ok(())
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let opts = GroundOptions { unit_costs: cfg.unit_costs, full_universe: cfg.full_universe };
    if cfg.po == PreferredMode::Boost && cfg.algorithms.contains(&Algorithm::Gbfs) {
        eprintln!("warning: gbfs ignores preferred operators");
    }
    let mut records = Vec::new();
    for entry in &cfg.problems {
        let task = match load_task(entry, &opts) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("warning: skipping runs for {}: {e}", entry.problem.display());
                None
            }
        };
        for &alg in &cfg.algorithms {
            for &heur in &cfg.heuristics {
                for &seed in &cfg.seeds {
                    let rec = match &task {
                        None => RunRecord {
                            domain: file_stem(&entry.domain),
                            problem: file_stem(&entry.problem),
                            algorithm: alg,
                            heuristic: heur,
                            seed,
                            solved: false,
                            evaluations: 0,
                            expansions: 0,
                            plan_length: 0,
                            plan_cost: 0,
                            wall_time_s: 0.0,
                            frac_h_above_init: 0.0,
                        },
                        Some(task) => {
                            let mut sc = SearchConfig::new(alg, heur);
                            sc.max_evaluations = cfg.evals;
                            sc.max_expansions = cfg.max_expansions;
                            sc.seed = seed;
                            sc.preferred = cfg.po;
                            sc.c = cfg.c;
                            sc.uniform_variant = cfg.uniform_exploration;
                            sc.normal_force_pull = cfg.normal_force_pull;
                            let started = Instant::now();
                            let res = run_search(task, &sc);
                            let wall = started.elapsed().as_secs_f64();
                            if let Some(limit) = cfg.time_limit_s {
                                if wall > limit {
                                    eprintln!(
                                        "warning: {} {alg}/{heur} seed {seed} took {wall:.3}s (limit {limit}s)",
                                        task.problem_name
                                    );
                                }
                            }
                            let rec = RunRecord {
                                domain: task.domain_name.clone(),
                                problem: task.problem_name.clone(),
                                algorithm: alg,
                                heuristic: heur,
                                seed,
                                solved: res.solved(),
                                evaluations: res.evaluations,
                                expansions: res.expansions,
                                plan_length: res.plan.as_ref().map_or(0, |p| p.steps.len() as u64),
                                plan_cost: res.plan.as_ref().map_or(0, |p| p.cost),
                                wall_time_s: if cfg.deterministic_timing { 0.0 } else { wall },
                                frac_h_above_init: res.frac_h_above_init,
                            };
                            if let (Some(dir), Some(plan)) = (&cfg.plan_dir, &res.plan) {
                                if let Err(e) = write_plan_file(dir, &rec, task, plan) {
                                    eprintln!("warning: {e}");
                                }
                            }
                            rec
                        }
                    };
                    records.push(rec);
                }
            }
        }
    }
    let csv = build_csv(&records, &cfg.algorithms, &cfg.heuristics);
    SuiteReport { records, csv }
}
