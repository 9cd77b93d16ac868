//! `thts`: plan a single PDDL problem, sweep a benchmark grid, or measure
//! bandit regret on synthetic arms.
//!
//! Exit codes for `plan`: 0 solved, 1 finished without a plan, 2 usage or
//! input error. `bench` and `bandit-sim` exit 0 unless something is wrong
//! with the inputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thts::task::format_plan;
use thts::{
    ground, parse_domain, parse_problem, run_search, run_suite, simulate, Algorithm, ArmSpec,
    Direction, GroundOptions, GroundTask, HeuristicKind, PolicyConfig, PolicyKind, PreferredMode,
    SearchConfig, SuiteConfig, UniformVariant,
};

#[derive(Parser)]
#[command(name = "thts", version, about = "Trial-based heuristic tree search for STRIPS planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and print the plan found.
    Plan(PlanArgs),
    /// Run an algorithm x heuristic x seed grid described by a config file.
    Bench(BenchArgs),
    /// Measure cumulative regret of a bandit policy on synthetic arms.
    BanditSim(SimArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Domain file.
    domain: PathBuf,
    /// Problem file.
    problem: PathBuf,
    /// Search algorithm: gbfs, guct, guct-star, guct-normal, guct-normal-star,
    /// guct-normal2, guct-normal2-star, guct-plus-normal2, guct-uniform.
    #[arg(long, default_value = "guct-uniform")]
    search: Algorithm,
    /// Heuristic: ff, add, hmax, gc.
    #[arg(long, default_value = "ff")]
    heuristic: HeuristicKind,
    /// Evaluation budget (distinct states handed to the heuristic).
    #[arg(long, default_value_t = 10_000)]
    evals: u64,
    /// Optional expansion budget on top of the evaluation budget.
    #[arg(long)]
    max_expansions: Option<u64>,
    /// Random seed for trial tie-breaking.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Boost actions preferred by the heuristic during selection.
    #[arg(long)]
    po: bool,
    /// Exploration rate for the ucb1 family.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Exploration shape for guct-uniform: paper (range bonus grows with
    /// pulls) or shrinking (conventional decay).
    #[arg(long, default_value = "paper")]
    uniform_exploration: UniformVariant,
    /// Drop the forced resampling floor of the normal policies.
    #[arg(long)]
    no_normal_force_pull: bool,
    /// Treat every action as cost 1 regardless of declared costs.
    #[arg(long)]
    unit_costs: bool,
    /// Ground over the full typed universe instead of relaxed-reachable facts.
    #[arg(long)]
    full_universe: bool,
    /// Log one line per trial to stderr.
    #[arg(long)]
    log_trials: bool,
    /// Write the plan here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Suite description; paths inside are taken relative to this file.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct SimArgs {
    /// Bandit policy: ucb1, ucb1-normal, ucb1-normal2, ucb1-uniform.
    #[arg(long)]
    policy: PolicyKind,
    /// Comma-separated arm list, e.g. "bernoulli(0.9),uniform(0,1),point(0.5)".
    #[arg(long)]
    arms: String,
    /// Steps per run.
    #[arg(long)]
    horizon: u64,
    /// Number of runs; seeds are 0..seeds.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Whether high or low rewards are better: maximize or minimize.
    #[arg(long, default_value = "maximize")]
    direction: Direction,
    /// Exploration rate for ucb1.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Exploration shape for ucb1-uniform: paper or shrinking.
    #[arg(long, default_value = "paper")]
    uniform_exploration: UniformVariant,
    /// Drop the forced resampling floor of the normal policies.
    #[arg(long)]
    no_normal_force_pull: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Plan(args) => cmd_plan(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::BanditSim(args) => cmd_sim(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_task(
    domain: &Path,
    problem: &Path,
    unit_costs: bool,
    full_universe: bool,
) -> Result<GroundTask, String> {
    let read = |p: &Path| {
        fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))
    };
    let d = parse_domain(&read(domain)?)
        .map_err(|e| format!("{}: {e}", domain.display()))?;
    let p = parse_problem(&read(problem)?)
        .map_err(|e| format!("{}: {e}", problem.display()))?;
    let opts = GroundOptions { unit_costs, full_universe };
    ground(&d, &p, &opts).map_err(|e| format!("{}: {e}", problem.display()))
}

fn cmd_plan(args: &PlanArgs) -> Result<ExitCode, String> {
    if args.po && args.search == Algorithm::Gbfs {
        eprintln!("warning: gbfs expands by h-order alone; --po has no effect");
    }
    let task = load_task(&args.domain, &args.problem, args.unit_costs, args.full_universe)?;
    eprintln!(
        "{}: {} facts, {} actions",
        task.problem_name,
        task.num_facts(),
        task.actions.len()
    );

    let mut cfg = SearchConfig::new(args.search, args.heuristic);
    cfg.max_evaluations = args.evals;
    cfg.max_expansions = args.max_expansions;
    cfg.seed = args.seed;
    cfg.preferred = if args.po { PreferredMode::Boost } else { PreferredMode::Off };
    cfg.c = args.c;
    cfg.uniform_variant = args.uniform_exploration;
    cfg.normal_force_pull = !args.no_normal_force_pull;
    cfg.log_trials = args.log_trials;
    let result = run_search(&task, &cfg);

    eprintln!(
        "{} after {} evaluations, {} expansions ({:.3} of states above the initial h)",
        result.outcome, result.evaluations, result.expansions, result.frac_h_above_init
    );
    let Some(plan) = &result.plan else {
        return Ok(ExitCode::from(1));
    };
    let verified = task
        .validate_plan(&plan.steps)
        .map_err(|e| format!("internal: produced an invalid plan: {e}"))?;
    debug_assert_eq!(verified, plan.cost);
    eprintln!("plan: {} steps, cost {}", plan.steps.len(), plan.cost);

    let text = format_plan(&task, plan);
    match &args.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode, String> {
    let mut cfg =
        SuiteConfig::load(&args.config).map_err(|e| format!("{}: {e}", args.config.display()))?;

    // the config names files relative to itself so suites can move around
    let base = args.config.parent().unwrap_or(Path::new("."));
    for entry in &mut cfg.problems {
        entry.domain = base.join(&entry.domain);
        entry.problem = base.join(&entry.problem);
    }
    cfg.plan_dir = cfg.plan_dir.map(|d| base.join(d));
    cfg.output = cfg.output.map(|o| base.join(o));

    let report = run_suite(&cfg);
    match &cfg.output {
        Some(path) => {
            fs::write(path, &report.csv)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!("{} rows -> {}", report.records.len(), path.display());
        }
        None => print!("{}", report.csv),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sim(args: &SimArgs) -> Result<ExitCode, String> {
    let arms: Vec<ArmSpec> = thts::parse_arms(&args.arms)?;
    if args.horizon < arms.len() as u64 {
        return Err(format!(
            "horizon {} cannot cover the {} forced initial pulls",
            args.horizon,
            arms.len()
        ));
    }
    if args.seeds == 0 {
        return Err("need at least one seed".into());
    }
    let mut cfg = PolicyConfig::new(args.policy, args.direction);
    cfg.c = args.c;
    cfg.uniform_variant = args.uniform_exploration;
    cfg.normal_force_pull = !args.no_normal_force_pull;

    let label = thts::format_arms(&arms);
    let mut csv = String::from("policy,arms,seed,T,regret\n");
    for seed in 0..args.seeds {
        let trace = simulate(&arms, &cfg, args.horizon, seed);
        for &(t, regret) in &trace.checkpoints {
            csv.push_str(&format!("{},{},{},{},{:.6}\n", args.policy, label, seed, t, regret));
        }
    }
    match &args.out {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
