//! Synthetic stationary bandit testbed measuring expected cumulative regret
//! of the index policies.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, Uniform};

use crate::bandit::{select_arm, ArmStats, Direction, PolicyConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArmSpec {
    Bernoulli(f64),
    Uniform(f64, f64),
    Gaussian(f64, f64),
    Point(f64),
}

impl ArmSpec {
    pub fn true_mean(&self) -> f64 {
        match *self {
            ArmSpec::Bernoulli(p) => p,
            ArmSpec::Uniform(l, u) => (l + u) / 2.0,
            ArmSpec::Gaussian(mu, _) => mu,
            ArmSpec::Point(v) => v,
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            ArmSpec::Bernoulli(p) => {
                if rng.gen_bool(p) {
                    1.0
                } else {
                    0.0
                }
            }
            ArmSpec::Uniform(l, u) => {
                if l == u {
                    l
                } else {
                    Uniform::new_inclusive(l, u).sample(rng)
                }
            }
            ArmSpec::Gaussian(mu, sigma) => Normal::new(mu, sigma).unwrap().sample(rng),
            ArmSpec::Point(v) => v,
        }
    }

    fn validate(&self) -> Result<(), String> {
        match *self {
            ArmSpec::Bernoulli(p) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(format!("bernoulli probability out of [0,1]: {p}"));
                }
            }
            ArmSpec::Uniform(l, u) => {
                if !(l.is_finite() && u.is_finite() && l <= u) {
                    return Err(format!("uniform bounds must satisfy l <= u: ({l}, {u})"));
                }
            }
            ArmSpec::Gaussian(mu, sigma) => {
                if !(mu.is_finite() && sigma.is_finite() && sigma >= 0.0) {
                    return Err(format!("gaussian needs finite mu and sigma >= 0: ({mu}, {sigma})"));
                }
            }
            ArmSpec::Point(v) => {
                if !v.is_finite() {
                    return Err(format!("point value must be finite: {v}"));
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for ArmSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ArmSpec::Bernoulli(p) => write!(f, "bernoulli({p})"),
            ArmSpec::Uniform(l, u) => write!(f, "uniform({l},{u})"),
            ArmSpec::Gaussian(mu, sigma) => write!(f, "gaussian({mu},{sigma})"),
            ArmSpec::Point(v) => write!(f, "point({v})"),
        }
    }
}

fn parse_one(s: &str) -> Result<ArmSpec, String> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| format!("arm spec without parameters: {s}"))?;
    if !s.ends_with(')') {
        return Err(format!("arm spec without closing parenthesis: {s}"));
    }
    let kind = &s[..open];
    let args: Vec<f64> = s[open + 1..s.len() - 1]
        .split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|e| format!("bad number in {s}: {e}")))
        .collect::<Result<_, _>>()?;
    let spec = match (kind, args.as_slice()) {
        ("bernoulli", [p]) => ArmSpec::Bernoulli(*p),
        ("uniform", [l, u]) => ArmSpec::Uniform(*l, *u),
        ("gaussian", [mu, sigma]) => ArmSpec::Gaussian(*mu, *sigma),
        ("point", [v]) => ArmSpec::Point(*v),
        _ => {
            return Err(format!(
                "unknown arm spec {s} (expected bernoulli(p), uniform(l,u), gaussian(mu,sigma), point(v))"
            ))
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Parses an arm list like `bernoulli(0.9),uniform(0,1)`. Both `,` and `;`
/// separate arms at parenthesis depth zero (the CSV writer uses `;`).
pub fn parse_arms(s: &str) -> Result<Vec<ArmSpec>, String> {
    let mut specs = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1).ok_or("unbalanced parentheses")?,
            ',' | ';' if depth == 0 => {
                specs.push(parse_one(&s[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".to_string());
    }
    let tail = s[start..].trim();
    if !tail.is_empty() {
        specs.push(parse_one(tail)?);
    }
    if specs.is_empty() {
        return Err("empty arm list".to_string());
    }
    Ok(specs)
}

/// Joins arm specs with `;` so the result stays a single CSV field.
pub fn format_arms(arms: &[ArmSpec]) -> String {
    arms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(";")
}

#[derive(Clone, Debug)]
pub struct RegretTrace {
    /// Arm pulled at each step.
    pub pulls: Vec<usize>,
    /// Expected regret increment of each pull (true-mean gap, always ≥ 0).
    pub increments: Vec<f64>,
    /// (T, Δ(T)) at decade checkpoints plus the horizon itself.
    pub checkpoints: Vec<(u64, f64)>,
    /// Δ(horizon).
    pub total: f64,
}

/// True-mean gap of pulling `arm` once (the expected-regret form).
fn gap(arms: &[ArmSpec], arm: usize, direction: Direction) -> f64 {
    let means: Vec<f64> = arms.iter().map(|a| a.true_mean()).collect();
    match direction {
        Direction::Maximize => means.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - means[arm],
        Direction::Minimize => means[arm] - means.iter().cloned().fold(f64::INFINITY, f64::min),
    }
}

fn checkpoint_schedule(horizon: u64) -> Vec<u64> {
    let mut ts: Vec<u64> = [100, 1_000, 10_000, 100_000]
        .into_iter()
        .filter(|&t| t <= horizon)
        .collect();
    if ts.last() != Some(&horizon) {
        ts.push(horizon);
    }
    ts
}

/// Runs one policy for `horizon` pulls. Arm selection goes through the same
/// select_arm as the planner, over the running ArmStats; each arm owns an
/// independent generator stream derived from (seed, arm index), so different
/// policies see the same reward sequence per arm.
pub fn simulate(arms: &[ArmSpec], policy: &PolicyConfig, horizon: u64, seed: u64) -> RegretTrace {
    assert!(arms.len() >= 2, "a bandit needs at least two arms");
    assert!(horizon >= arms.len() as u64, "horizon shorter than the arm count");
    let mut rngs: Vec<ChaCha8Rng> = (0..arms.len())
        .map(|i| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            r.set_stream(i as u64);
            r
        })
        .collect();
    let mut stats = vec![ArmStats::new(); arms.len()];
    let schedule = checkpoint_schedule(horizon);
    let mut trace = RegretTrace {
        pulls: Vec::with_capacity(horizon as usize),
        increments: Vec::with_capacity(horizon as usize),
        checkpoints: Vec::with_capacity(schedule.len()),
        total: 0.0,
    };
    let mut cum = 0.0;
    for step in 1..=horizon {
        // the policy sees the pull total before this step
        let i = select_arm(&stats, step - 1, policy);
        let r = arms[i].sample(&mut rngs[i]);
        stats[i].update(r);
        let inc = gap(arms, i, policy.direction);
        cum += inc;
        trace.pulls.push(i);
        trace.increments.push(inc);
        if schedule.contains(&step) {
            trace.checkpoints.push((step, cum));
        }
    }
    trace.total = cum;
    trace
}

/// Independent recomputation of Δ from the pull sequence; must equal the
/// trace's stored total.
pub fn cumulative_regret(trace: &RegretTrace, arms: &[ArmSpec], direction: Direction) -> f64 {
    trace.pulls.iter().map(|&i| gap(arms, i, direction)).sum()
}
