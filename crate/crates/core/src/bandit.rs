//! Arm statistics, maximum-likelihood estimates, the confidence-bound index
//! family, and the extreme-value utilities (generalized Pareto density,
//! Clark's moment combination) used by the tree backups.

use statrs::function::erf::erfc;

/// Running sufficient statistics of one arm's reward sample.
///
/// Everything downstream (means, variances, bounds) is derived from these
/// five numbers, so merging two disjoint samples is exact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArmStats {
    pub t: u64,
    pub sum: f64,
    pub sumsq: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for ArmStats {
    fn default() -> Self {
        ArmStats::new()
    }
}

impl ArmStats {
    pub fn new() -> Self {
        ArmStats { t: 0, sum: 0.0, sumsq: 0.0, lo: f64::INFINITY, hi: f64::NEG_INFINITY }
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        let mut s = ArmStats::new();
        for &x in xs {
            s.update(x);
        }
        s
    }

    /// Records one reward. Infinite rewards are a caller bug: dead ends must
    /// be removed upstream, never averaged in.
    pub fn update(&mut self, x: f64) {
        assert!(x.is_finite(), "rewards must be finite, got {x}");
        self.t += 1;
        self.sum += x;
        self.sumsq += x * x;
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
    }

    /// Merges another disjoint sample into this one.
    pub fn absorb(&mut self, other: &ArmStats) {
        self.t += other.t;
        self.sum += other.sum;
        self.sumsq += other.sumsq;
        self.lo = self.lo.min(other.lo);
        self.hi = self.hi.max(other.hi);
    }

    pub fn mean(&self) -> f64 {
        assert!(self.t >= 1, "mean of an empty sample");
        self.sum / self.t as f64
    }

    /// Bessel-corrected sample variance, clamped at 0 against rounding.
    pub fn sample_var(&self) -> f64 {
        assert!(self.t >= 2, "sample variance needs at least two samples");
        let m = self.mean();
        ((self.sumsq - self.t as f64 * m * m) / (self.t - 1) as f64).max(0.0)
    }

    pub fn sample_sigma(&self) -> f64 {
        self.sample_var().sqrt()
    }

    /// Sample standard deviation, with the under-sampled convention σ̂ = 0
    /// for t < 2 used by the variance-aware policies.
    pub fn sigma_or_zero(&self) -> f64 {
        if self.t < 2 {
            0.0
        } else {
            self.sample_sigma()
        }
    }

    pub fn midrange(&self) -> f64 {
        assert!(self.t >= 1, "midrange of an empty sample");
        (self.lo + self.hi) / 2.0
    }

    pub fn width(&self) -> f64 {
        assert!(self.t >= 1, "width of an empty sample");
        self.hi - self.lo
    }
}

#[derive(thiserror::Error, Debug, PartialEq)]
pub enum BanditError {
    #[error("estimate needs at least {needed} samples, have {have}")]
    TooFewSamples { needed: u64, have: u64 },
    #[error("scale must be positive, got {sigma}")]
    NonPositiveScale { sigma: f64 },
}

/// MLE of a uniform reward distribution: the sample extremes.
pub fn mle_uniform(s: &ArmStats) -> Result<(f64, f64), BanditError> {
    if s.t < 1 {
        return Err(BanditError::TooFewSamples { needed: 1, have: s.t });
    }
    Ok((s.lo, s.hi))
}

/// Gaussian estimate (μ̂, σ̂) with Bessel-corrected σ̂.
pub fn mle_gaussian(s: &ArmStats) -> Result<(f64, f64), BanditError> {
    if s.t < 2 {
        return Err(BanditError::TooFewSamples { needed: 2, have: s.t });
    }
    Ok((s.mean(), s.sample_sigma()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Sign of the exploration term: UCB for maximization, LCB for
    /// minimization.
    fn sign(self) -> f64 {
        match self {
            Direction::Maximize => 1.0,
            Direction::Minimize => -1.0,
        }
    }

    /// True if `a` is strictly better than `b` in this direction.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minimize" => Ok(Direction::Minimize),
            "maximize" => Ok(Direction::Maximize),
            other => Err(format!("unknown direction {other} (expected minimize|maximize)")),
        }
    }
}

/// Shape of the range-scaled exploration term. `Growing` multiplies by
/// √(6·t·ln T), which commits harder to an arm the more it is pulled;
/// `Shrinking` uses the conventional √(6·ln T / t) decay instead. The CLI
/// names them `paper` and `shrinking`, and `Growing` is the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize)]
pub enum UniformVariant {
    #[default]
    #[serde(rename = "paper")]
    Growing,
    #[serde(rename = "shrinking")]
    Shrinking,
}

impl std::str::FromStr for UniformVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(UniformVariant::Growing),
            "shrinking" => Ok(UniformVariant::Shrinking),
            other => Err(format!(
                "unknown uniform-exploration variant {other} (expected paper|shrinking)"
            )),
        }
    }
}

impl UniformVariant {
    pub fn cli_name(self) -> &'static str {
        match self {
            UniformVariant::Growing => "paper",
            UniformVariant::Shrinking => "shrinking",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    Ucb1,
    Ucb1Normal,
    Ucb1Normal2,
    Ucb1Uniform,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::Ucb1Normal => "ucb1-normal",
            PolicyKind::Ucb1Normal2 => "ucb1-normal2",
            PolicyKind::Ucb1Uniform => "ucb1-uniform",
        }
    }
}

impl std::str::FromStr for PolicyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ucb1" => Ok(PolicyKind::Ucb1),
            "ucb1-normal" => Ok(PolicyKind::Ucb1Normal),
            "ucb1-normal2" => Ok(PolicyKind::Ucb1Normal2),
            "ucb1-uniform" => Ok(PolicyKind::Ucb1Uniform),
            other => Err(format!(
                "unknown policy {other} (expected ucb1|ucb1-normal|ucb1-normal2|ucb1-uniform)"
            )),
        }
    }
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    pub direction: Direction,
    /// Exploration rate; scales the ucb1 bonus only.
    pub c: f64,
    pub uniform_variant: UniformVariant,
    /// Force-pull arms with t < ⌈8 ln T⌉ under ucb1-normal, whose index
    /// presupposes an adequately sampled variance.
    pub normal_force_pull: bool,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind, direction: Direction) -> Self {
        PolicyConfig {
            kind,
            direction,
            c: 1.0,
            uniform_variant: UniformVariant::Growing,
            normal_force_pull: true,
        }
    }
}

impl Default for PolicyConfig {
    fn default() -> Self {
        PolicyConfig::new(PolicyKind::Ucb1, Direction::Maximize)
    }
}

fn ln_total(total: f64) -> f64 {
    assert!(total >= 1.0, "total pull count must be at least 1, got {total}");
    total.ln()
}

pub(crate) fn ucb1_explore(t: u64, total: f64) -> f64 {
    (2.0 * ln_total(total) / t as f64).sqrt()
}

pub(crate) fn normal_explore(t: u64, total: f64) -> f64 {
    (16.0 * ln_total(total) / t as f64).sqrt()
}

pub(crate) fn normal2_explore(total: f64) -> f64 {
    (2.0 * ln_total(total)).sqrt()
}

pub(crate) fn uniform_explore(t: u64, total: f64, variant: UniformVariant) -> f64 {
    match variant {
        UniformVariant::Growing => (6.0 * t as f64 * ln_total(total)).sqrt(),
        UniformVariant::Shrinking => (6.0 * ln_total(total) / t as f64).sqrt(),
    }
}

/// μ̂ ± c·√(2 ln T / t).
pub fn index_ucb1(s: &ArmStats, total: f64, c: f64, direction: Direction) -> f64 {
    assert!(s.t >= 1);
    assert!(c >= 0.0 && c.is_finite(), "exploration rate must be finite and non-negative");
    s.mean() + direction.sign() * c * ucb1_explore(s.t, total)
}

/// μ̂ ± σ̂·√(16 ln T / t), with σ̂ = 0 when t < 2.
pub fn index_ucb1_normal(s: &ArmStats, total: f64, direction: Direction) -> f64 {
    assert!(s.t >= 1);
    s.mean() + direction.sign() * s.sigma_or_zero() * normal_explore(s.t, total)
}

/// μ̂ ± σ̂·√(2 ln T), with σ̂ = 0 when t < 2.
pub fn index_ucb1_normal2(s: &ArmStats, total: f64, direction: Direction) -> f64 {
    assert!(s.t >= 1);
    s.mean() + direction.sign() * s.sigma_or_zero() * normal2_explore(total)
}

/// (û+l̂)/2 ± (û−l̂)·explore(t, T), with the variant choosing the shape of
/// the exploration factor.
pub fn index_ucb1_uniform(
    s: &ArmStats,
    total: f64,
    variant: UniformVariant,
    direction: Direction,
) -> f64 {
    assert!(s.t >= 1);
    s.midrange() + direction.sign() * s.width() * uniform_explore(s.t, total, variant)
}

/// The configured policy's index for one arm. Requires t ≥ 1.
pub fn index(s: &ArmStats, total: f64, cfg: &PolicyConfig) -> f64 {
    match cfg.kind {
        PolicyKind::Ucb1 => index_ucb1(s, total, cfg.c, cfg.direction),
        PolicyKind::Ucb1Normal => index_ucb1_normal(s, total, cfg.direction),
        PolicyKind::Ucb1Normal2 => index_ucb1_normal2(s, total, cfg.direction),
        PolicyKind::Ucb1Uniform => {
            index_ucb1_uniform(s, total, cfg.uniform_variant, cfg.direction)
        }
    }
}

/// Number of pulls below which ucb1-normal force-pulls an arm.
pub(crate) fn normal_pull_floor(total: f64) -> u64 {
    (8.0 * ln_total(total)).ceil() as u64
}

/// Picks the arm to pull. Unvisited arms go first (lowest index); under
/// ucb1-normal with the force-pull rule enabled, under-sampled arms go next;
/// otherwise the best index wins, ties to the lowest arm index.
pub fn select_arm(arms: &[ArmStats], total: u64, cfg: &PolicyConfig) -> usize {
    assert!(!arms.is_empty(), "select_arm over no arms");
    if let Some(i) = arms.iter().position(|a| a.t == 0) {
        return i;
    }
    let total = total as f64;
    if cfg.kind == PolicyKind::Ucb1Normal && cfg.normal_force_pull {
        let floor = normal_pull_floor(total);
        if let Some(i) = arms.iter().position(|a| a.t < floor) {
            return i;
        }
    }
    let mut best = 0;
    let mut best_v = index(&arms[0], total, cfg);
    for (i, a) in arms.iter().enumerate().skip(1) {
        let v = index(a, total, cfg);
        if cfg.direction.better(v, best_v) {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Generalized Pareto location/scale/shape. Support is [θ, θ−σ/ξ] for
/// ξ < 0 and [θ, ∞) otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GpParams {
    pub theta: f64,
    pub sigma: f64,
    pub xi: f64,
}

impl GpParams {
    pub fn new(theta: f64, sigma: f64, xi: f64) -> Result<Self, BanditError> {
        // negated form so NaN is rejected along with the non-positives
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(sigma > 0.0) {
            return Err(BanditError::NonPositiveScale { sigma });
        }
        Ok(GpParams { theta, sigma, xi })
    }
}

/// Generalized Pareto density: (1/σ)·e^(−z) for ξ = 0 and
/// (1/σ)·(1+ξz)^(−(ξ+1)/ξ) otherwise, with z = (x−θ)/σ; zero outside the
/// support. ξ = −1 reduces to the uniform density on [θ, θ+σ], closed
/// upper endpoint included (0⁰ = 1).
pub fn gp_pdf(x: f64, p: &GpParams) -> f64 {
    if x < p.theta {
        return 0.0;
    }
    let z = (x - p.theta) / p.sigma;
    if p.xi == 0.0 {
        (-z).exp() / p.sigma
    } else {
        let w = 1.0 + p.xi * z;
        if w < 0.0 {
            0.0
        } else {
            w.powf(-(p.xi + 1.0) / p.xi) / p.sigma
        }
    }
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn clark_max(m1: (f64, f64), m2: (f64, f64)) -> (f64, f64) {
    let (mu1, s1) = m1;
    let (mu2, s2) = m2;
    let a2 = s1 * s1 + s2 * s2;
    if a2 == 0.0 {
        // both inputs deterministic: the maximum is, too
        return (mu1.max(mu2), 0.0);
    }
    let a = a2.sqrt();
    let alpha = (mu1 - mu2) / a;
    let cdf = std_normal_cdf(alpha);
    let cdf_neg = std_normal_cdf(-alpha);
    let pdf = std_normal_pdf(alpha);
    let mu3 = mu1 * cdf + mu2 * cdf_neg + a * pdf;
    let m2nd = (mu1 * mu1 + s1 * s1) * cdf
        + (mu2 * mu2 + s2 * s2) * cdf_neg
        + (mu1 + mu2) * a * pdf;
    (mu3, (m2nd - mu3 * mu3).max(0.0).sqrt())
}

/// First two moments of max(X₁,X₂) (or min, by negation) for independent
/// Gaussians Xᵢ = N(μᵢ, σᵢ), after Clark 1961. The result is again treated
/// as Gaussian when folded over more than two arms, which is an
/// approximation.
pub fn clark_extreme_moments(m1: (f64, f64), m2: (f64, f64), direction: Direction) -> (f64, f64) {
    assert!(m1.1 >= 0.0 && m2.1 >= 0.0, "standard deviations must be non-negative");
    match direction {
        Direction::Maximize => clark_max(m1, m2),
        Direction::Minimize => {
            let (mu, sigma) = clark_max((-m1.0, m1.1), (-m2.0, m2.1));
            (-mu, sigma)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-12;

    #[test]
    fn armstats_running_moments() {
        let s = ArmStats::from_samples(&[3.0, 5.0, 4.0]);
        assert_eq!(s.t, 3);
        assert_eq!(s.sum, 12.0);
        assert_eq!(s.sumsq, 50.0);
        assert_eq!((s.lo, s.hi), (3.0, 5.0));
        assert_eq!(s.mean(), 4.0);
        assert_abs_diff_eq!(s.sample_var(), 1.0, epsilon = TOL);
        assert_eq!(s.midrange(), 4.0);
        assert_eq!(s.width(), 2.0);
    }

    #[test]
    fn armstats_absorb_matches_pooled_sample() {
        let mut a = ArmStats::from_samples(&[3.0, 5.0]);
        let b = ArmStats::from_samples(&[4.0, 7.0, 1.0]);
        a.absorb(&b);
        let pooled = ArmStats::from_samples(&[3.0, 5.0, 4.0, 7.0, 1.0]);
        assert_eq!(a, pooled);
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn armstats_rejects_infinite_reward() {
        ArmStats::new().update(f64::INFINITY);
    }

    #[test]
    fn gaussian_mle_hand_values() {
        let (mu, sigma) = mle_gaussian(&ArmStats::from_samples(&[3.0, 5.0])).unwrap();
        assert_eq!(mu, 4.0);
        assert_abs_diff_eq!(sigma, 2.0_f64.sqrt(), epsilon = TOL);
        let (mu, sigma) = mle_gaussian(&ArmStats::from_samples(&[3.0, 5.0, 4.0])).unwrap();
        assert_eq!(mu, 4.0);
        assert_abs_diff_eq!(sigma, 1.0, epsilon = TOL);
        // constant sample: variance clamps to exactly 0
        let (mu, sigma) = mle_gaussian(&ArmStats::from_samples(&[4.0, 4.0, 4.0])).unwrap();
        assert_eq!((mu, sigma), (4.0, 0.0));
        assert_eq!(
            mle_gaussian(&ArmStats::from_samples(&[7.0])),
            Err(BanditError::TooFewSamples { needed: 2, have: 1 })
        );
    }

    #[test]
    fn uniform_mle_is_sample_extremes() {
        assert_eq!(mle_uniform(&ArmStats::from_samples(&[3.0, 5.0, 4.0])).unwrap(), (3.0, 5.0));
        assert_eq!(mle_uniform(&ArmStats::from_samples(&[7.0])).unwrap(), (7.0, 7.0));
        assert_eq!(
            mle_uniform(&ArmStats::new()),
            Err(BanditError::TooFewSamples { needed: 1, have: 0 })
        );
    }

    #[test]
    fn ucb1_hand_values() {
        let s = ArmStats::from_samples(&[0.5]);
        let e2 = std::f64::consts::E * std::f64::consts::E;
        assert_abs_diff_eq!(index_ucb1(&s, e2, 1.0, Direction::Maximize), 2.5, epsilon = TOL);
        assert_abs_diff_eq!(index_ucb1(&s, e2, 1.0, Direction::Minimize), -1.5, epsilon = TOL);
        // c = 0 leaves the plain mean
        assert_eq!(index_ucb1(&s, 1000.0, 0.0, Direction::Maximize), 0.5);
    }

    #[test]
    fn normal_hand_values() {
        let s = ArmStats { t: 4, sum: 0.0, sumsq: 3.0, lo: -1.0, hi: 1.0 };
        let e = std::f64::consts::E;
        assert_abs_diff_eq!(index_ucb1_normal(&s, e, Direction::Maximize), 2.0, epsilon = TOL);
        assert_abs_diff_eq!(index_ucb1_normal(&s, e, Direction::Minimize), -2.0, epsilon = TOL);
        // μ̂ = 10, σ̂ = 2, t = 16, T = e⁴
        let s = ArmStats { t: 16, sum: 160.0, sumsq: 1660.0, lo: 7.0, hi: 13.0 };
        assert_abs_diff_eq!(
            index_ucb1_normal(&s, e.powi(4), Direction::Maximize),
            14.0,
            epsilon = TOL
        );
        // single sample: σ̂ convention collapses the index to the mean
        let s = ArmStats::from_samples(&[9.0]);
        assert_eq!(index_ucb1_normal(&s, 100.0, Direction::Minimize), 9.0);
    }

    #[test]
    fn normal2_hand_values() {
        let s = ArmStats { t: 2, sum: 0.0, sumsq: 1.0, lo: -0.8, hi: 0.8 };
        let sqrt_e = std::f64::consts::E.sqrt();
        assert_abs_diff_eq!(index_ucb1_normal2(&s, sqrt_e, Direction::Maximize), 1.0, epsilon = TOL);
        assert_abs_diff_eq!(index_ucb1_normal2(&s, sqrt_e, Direction::Minimize), -1.0, epsilon = TOL);
        // μ̂ = 5, σ̂ = 3, T = e²
        let s = ArmStats { t: 2, sum: 10.0, sumsq: 59.0, lo: 2.0, hi: 8.0 };
        let e2 = std::f64::consts::E * std::f64::consts::E;
        assert_abs_diff_eq!(index_ucb1_normal2(&s, e2, Direction::Maximize), 11.0, epsilon = TOL);
        assert_abs_diff_eq!(index_ucb1_normal2(&s, e2, Direction::Minimize), -1.0, epsilon = TOL);
    }

    #[test]
    #[allow(clippy::excessive_precision)] // pinned values keep their full derivation decimals
    fn uniform_hand_values() {
        let s = ArmStats { t: 2, sum: 10.0, sumsq: 52.0, lo: 4.0, hi: 6.0 };
        let lcb = index_ucb1_uniform(&s, 4.0, UniformVariant::Growing, Direction::Minimize);
        assert_abs_diff_eq!(lcb, -3.15733592135047174, epsilon = TOL);
        let lcb_shrink = index_ucb1_uniform(&s, 4.0, UniformVariant::Shrinking, Direction::Minimize);
        assert_abs_diff_eq!(lcb_shrink, 0.921332039324764129, epsilon = TOL);
        // zero spread degenerates to the sample value for any T
        let s = ArmStats::from_samples(&[7.0, 7.0, 7.0]);
        assert_eq!(index_ucb1_uniform(&s, 1e6, UniformVariant::Growing, Direction::Minimize), 7.0);
        assert_eq!(index_ucb1_uniform(&s, 1e6, UniformVariant::Shrinking, Direction::Maximize), 7.0);
    }

    fn plateau_arm(t: u64) -> ArmStats {
        // t samples spanning [4, 6], mean 5
        let mut s = ArmStats::new();
        for i in 0..t {
            s.update(if i % 2 == 0 { 4.0 } else { 6.0 });
        }
        s
    }

    #[test]
    fn equally_informed_plateaus_prefer_the_more_pulled_arm() {
        let arms = [plateau_arm(10), plateau_arm(5)];
        let cfg = PolicyConfig {
            kind: PolicyKind::Ucb1Uniform,
            direction: Direction::Minimize,
            ..PolicyConfig::default()
        };
        assert_eq!(select_arm(&arms, 16, &cfg), 0);
        let i0 = index(&arms[0], 16.0, &cfg);
        let i1 = index(&arms[1], 16.0, &cfg);
        assert!(i0 < i1, "t = 10 arm must have the strictly smaller LCB: {i0} vs {i1}");
        // the shrinking variant reverses the preference
        let cfg_shrink = PolicyConfig { uniform_variant: UniformVariant::Shrinking, ..cfg };
        assert_eq!(select_arm(&arms, 16, &cfg_shrink), 1);
    }

    #[test]
    fn select_prefers_unvisited_then_lowest_index() {
        let visited = ArmStats::from_samples(&[1.0, 2.0, 3.0]);
        let cfg = PolicyConfig::default();
        assert_eq!(select_arm(&[visited, ArmStats::new()], 3, &cfg), 1);
        assert_eq!(select_arm(&[ArmStats::new(), ArmStats::new()], 1, &cfg), 0);
        assert_eq!(select_arm(&[visited, visited], 6, &cfg), 0);
    }

    #[test]
    fn normal_force_pull_feeds_undersampled_arms_first() {
        let a = ArmStats::from_samples(&[1.0, 2.0]);
        let mut b = ArmStats::new();
        for i in 0..30 {
            b.update(if i % 2 == 0 { 10.0 } else { 12.0 });
        }
        let cfg = PolicyConfig::new(PolicyKind::Ucb1Normal, Direction::Maximize);
        // floor = ⌈8 ln 32⌉ = 28 > 2, so the under-sampled arm 0 is forced
        // even though arm 1's index dominates
        assert_eq!(select_arm(&[a, b], 32, &cfg), 0);
        let cfg_off = PolicyConfig { normal_force_pull: false, ..cfg };
        assert_eq!(select_arm(&[a, b], 32, &cfg_off), 1);
    }

    #[test]
    fn pull_floor_matches_hand_ceiling() {
        assert_eq!(normal_pull_floor(32.0), 28); // 8 ln 32 ≈ 27.7
        assert_eq!(normal_pull_floor(1.0), 0);
        assert_eq!(normal_pull_floor(10.0), 19); // 8 ln 10 ≈ 18.4
    }

    #[test]
    fn gp_density_uniform_and_exponential_branches() {
        let u = GpParams::new(0.0, 1.0, -1.0).unwrap();
        assert_eq!(gp_pdf(0.5, &u), 1.0);
        assert_eq!(gp_pdf(0.0, &u), 1.0);
        assert_eq!(gp_pdf(1.0, &u), 1.0); // closed upper endpoint
        assert_eq!(gp_pdf(1.5, &u), 0.0);
        assert_eq!(gp_pdf(-0.1, &u), 0.0);
        let e = GpParams::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(gp_pdf(0.0, &e), 1.0);
        assert_abs_diff_eq!(gp_pdf(2.0, &e), (-2.0_f64).exp(), epsilon = TOL);
        assert_eq!(gp_pdf(-1e-9, &e), 0.0);
        assert!(GpParams::new(0.0, 0.0, 1.0).is_err());
        assert!(GpParams::new(0.0, -2.0, 1.0).is_err());
    }

    #[test]
    fn gp_density_scales_with_sigma() {
        let p = GpParams::new(3.0, 4.0, -1.0).unwrap();
        assert_eq!(gp_pdf(3.0, &p), 0.25);
        assert_eq!(gp_pdf(7.0, &p), 0.25);
        assert_eq!(gp_pdf(7.0 + 1e-9, &p), 0.0);
    }

    #[test]
    #[allow(clippy::excessive_precision)] // pinned values keep their full derivation decimals
    fn clark_symmetric_standard_pair() {
        let (mu, sigma) = clark_extreme_moments((0.0, 1.0), (0.0, 1.0), Direction::Maximize);
        assert_abs_diff_eq!(mu, 0.564189583547756287, epsilon = TOL); // 1/√π
        assert_abs_diff_eq!(sigma, 0.825645271176556384, epsilon = TOL); // √(1−1/π)
        let (mu_min, sigma_min) = clark_extreme_moments((0.0, 1.0), (0.0, 1.0), Direction::Minimize);
        assert_abs_diff_eq!(mu_min, -0.564189583547756287, epsilon = TOL);
        assert_abs_diff_eq!(sigma_min, sigma, epsilon = TOL);
    }

    #[test]
    fn clark_degenerate_and_dominating_cases() {
        assert_eq!(clark_extreme_moments((1.0, 0.0), (0.0, 0.0), Direction::Maximize), (1.0, 0.0));
        assert_eq!(clark_extreme_moments((3.0, 0.0), (5.0, 0.0), Direction::Minimize), (3.0, 0.0));
        assert_eq!(clark_extreme_moments((2.0, 0.0), (2.0, 0.0), Direction::Maximize), (2.0, 0.0));
        let (mu, sigma) = clark_extreme_moments((100.0, 1.0), (0.0, 1.0), Direction::Maximize);
        assert_abs_diff_eq!(mu, 100.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sigma, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn clark_is_commutative() {
        let (m_a, s_a) = clark_extreme_moments((1.0, 2.0), (3.0, 0.5), Direction::Maximize);
        let (m_b, s_b) = clark_extreme_moments((3.0, 0.5), (1.0, 2.0), Direction::Maximize);
        assert_abs_diff_eq!(m_a, m_b, epsilon = TOL);
        assert_abs_diff_eq!(s_a, s_b, epsilon = TOL);
    }

    #[test]
    fn indices_are_symmetric_about_their_center() {
        let s = ArmStats::from_samples(&[2.0, 9.0, 4.0, 4.5]);
        let t = 40.0;
        for (u, l, center) in [
            (
                index_ucb1(&s, t, 1.3, Direction::Maximize),
                index_ucb1(&s, t, 1.3, Direction::Minimize),
                s.mean(),
            ),
            (
                index_ucb1_normal(&s, t, Direction::Maximize),
                index_ucb1_normal(&s, t, Direction::Minimize),
                s.mean(),
            ),
            (
                index_ucb1_normal2(&s, t, Direction::Maximize),
                index_ucb1_normal2(&s, t, Direction::Minimize),
                s.mean(),
            ),
            (
                index_ucb1_uniform(&s, t, UniformVariant::Growing, Direction::Maximize),
                index_ucb1_uniform(&s, t, UniformVariant::Growing, Direction::Minimize),
                s.midrange(),
            ),
        ] {
            assert_abs_diff_eq!((u + l) / 2.0, center, epsilon = TOL);
            assert!(u >= center && center >= l);
        }
    }
}
