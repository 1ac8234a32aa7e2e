//! Scenario configuration: a JSON document describing a family of hosts, a
//! grid of sizes along it, and the fringe counts to tabulate.

use std::path::Path;

use fringe_core::approx::Regime;
use fringe_core::samplers::power_tail_offspring;
use fringe_core::{DegreeDistribution, DegreeStatistic, PlaneTree};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

/// Default tail exponent of the power-tail offspring law.
pub const DEFAULT_ALPHA: f64 = 1.5;
/// Default largest offspring value of the power-tail law.
pub const DEFAULT_TRUNCATION: u64 = 1_000_000;
/// Default cap on rejected attempts per conditioned Galton–Watson tree.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 100_000_000;
/// Default largest host for which exact moments are attached.
pub const DEFAULT_EXACT_MAX_HOST: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Uniform trees with a prescribed degree statistic.
    FixedStatistic,
    /// Galton–Watson trees conditioned on their size.
    GwConditioned,
}

/// How the host law at every grid point is obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeLaw {
    /// One statistic per grid point, listed explicitly. The grid is their sizes.
    Explicit { statistics: Vec<DegreeStatistic> },
    /// Proportions scaled to each grid size. Degrees `>= 2` are rounded, the
    /// leaves follow from the degree identity and degree 1 takes the rest.
    Proportions { pmf: Vec<(u64, f64)> },
    /// `n(1) = round(b n^{1/3})` unary vertices, the rest on `{0, 2}`.
    Periodic { b: f64 },
    /// The star with `kappa` vertices, the only tree of its statistic.
    Star,
    /// `kappa` unary and binary vertices each, `floor(kappa^{1/2})` hubs of
    /// degree `2 floor(kappa^{3/4}) + 1`, and the leaves this forces.
    Hubs,
    /// Offspring law of a conditioned Galton–Watson tree.
    Offspring { pmf: Vec<(u64, f64)> },
    /// Galton–Watson offspring with `p_i ~ i^{-alpha-1}` up to `truncation`,
    /// scaled to mean one.
    PowerTail {
        #[serde(default = "default_alpha")]
        alpha: f64,
        #[serde(default = "default_truncation")]
        truncation: u64,
    },
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_truncation() -> u64 {
    DEFAULT_TRUNCATION
}

fn default_exponent() -> f64 {
    2.0 / 3.0
}

/// `m(n) = round(a n^exponent) + offset`, rounding to nearest with ties to even.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeRule {
    pub a: f64,
    #[serde(default = "default_exponent")]
    pub exponent: f64,
    #[serde(default)]
    pub offset: i64,
}

impl SizeRule {
    pub fn new(a: f64) -> Self {
        Self {
            a,
            exponent: default_exponent(),
            offset: 0,
        }
    }

    pub fn with_offset(self, offset: i64) -> Self {
        Self { offset, ..self }
    }

    pub fn evaluate(&self, n: u64) -> i64 {
        (self.a * (n as f64).powf(self.exponent)).round_ties_even() as i64 + self.offset
    }

    /// `m / n^exponent`, the effective constant at a grid point.
    pub fn effective_a(&self, n: u64, m: u64) -> f64 {
        m as f64 / (n as f64).powf(self.exponent)
    }
}

/// What is counted on every sampled tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetSpec {
    /// Fringes equal to a fixed tree.
    Tree { tree: PlaneTree },
    /// Fringes with a fixed degree statistic.
    Statistic { statistic: DegreeStatistic },
    /// Fringes with a fixed number of vertices.
    Size { m: u64 },
    /// Fringes whose size follows a rule in the host size.
    SizeRule { rule: SizeRule },
    /// The star with as many vertices as the host.
    HostStar,
    /// `base` below a chain of unary vertices, the chain length chosen so
    /// that `|n| pi` is closest to `lambda` on a log scale. With `statistic`
    /// the count is of the statistic of that tree.
    Chain {
        base: PlaneTree,
        lambda: f64,
        #[serde(default)]
        statistic: bool,
    },
    /// Sum of the first `m(n)` entries of the uniform bridge.
    WindowSum { rule: SizeRule },
}

/// A complete experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub family: Family,
    pub law: DegreeLaw,
    /// Sizes `|n|` (or the index `kappa` for the star and hub families).
    /// Empty for explicit statistics.
    #[serde(default)]
    pub grid: Vec<u64>,
    pub targets: Vec<TargetSpec>,
    pub replicates: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub expectation: Option<Regime>,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
    /// Exact moments are attached only for hosts up to this size.
    #[serde(default = "default_exact_max_host")]
    pub exact_max_host: u64,
}

fn default_max_attempts() -> u64 {
    DEFAULT_MAX_ATTEMPTS
}

fn default_exact_max_host() -> u64 {
    DEFAULT_EXACT_MAX_HOST
}

/// Host law at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub enum Host {
    Uniform(DegreeStatistic),
    Gw { offspring: DegreeDistribution, n: u64 },
}

impl Host {
    pub fn size(&self) -> u64 {
        match self {
            Host::Uniform(bn) => bn.size(),
            Host::Gw { n, .. } => *n,
        }
    }

    /// The degree law entering `|n| pi`: `p(n)` or the offspring law.
    pub fn degree_law(&self) -> DegreeDistribution {
        match self {
            Host::Uniform(bn) => DegreeDistribution::from_statistic(bn),
            Host::Gw { offspring, .. } => offspring.clone(),
        }
    }
}

/// A target with every size-dependent choice made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolvedTarget {
    Tree(PlaneTree),
    Statistic(DegreeStatistic),
    Size(u64),
    WindowSum(u64),
}

impl ResolvedTarget {
    pub fn label(&self) -> String {
        match self {
            ResolvedTarget::Tree(t) => format!("tree={t}"),
            ResolvedTarget::Statistic(bm) => format!("statistic={bm}"),
            ResolvedTarget::Size(m) => format!("size={m}"),
            ResolvedTarget::WindowSum(m) => format!("window={m}"),
        }
    }
}

/// One grid point after resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub kappa: u64,
    pub host: Host,
    pub targets: Vec<ResolvedTarget>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("parse: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs always serialize")
    }

    fn sizes(&self) -> Vec<u64> {
        match &self.law {
            DegreeLaw::Explicit { statistics } => statistics.iter().map(|s| s.size()).collect(),
            _ => self.grid.clone(),
        }
    }

    /// Checks every invariant, including that each size rule lands in
    /// `1..=n` at every grid point.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if self.replicates == 0 {
            return fail("replicates must be at least 1".into());
        }
        if self.targets.is_empty() {
            return fail("at least one target is required".into());
        }
        let explicit = matches!(self.law, DegreeLaw::Explicit { .. });
        if explicit && !self.grid.is_empty() {
            return fail("explicit statistics define the grid; leave `grid` empty".into());
        }
        let sizes = self.sizes();
        if sizes.is_empty() {
            return fail("the grid is empty".into());
        }
        if explicit {
            if sizes.windows(2).any(|w| w[0] > w[1]) {
                return fail("explicit statistics must be listed by nondecreasing size".into());
            }
        } else if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return fail("the grid must be strictly increasing".into());
        }
        let gw_law = matches!(self.law, DegreeLaw::Offspring { .. } | DegreeLaw::PowerTail { .. });
        match (self.family, gw_law) {
            (Family::FixedStatistic, true) => return fail("offspring laws need the gw_conditioned family".into()),
            (Family::GwConditioned, false) => return fail("the gw_conditioned family needs an offspring law".into()),
            _ => {}
        }
        if self.family == Family::GwConditioned
            && self.targets.iter().any(|t| matches!(t, TargetSpec::WindowSum { .. }))
        {
            return fail("window sums are defined for fixed statistics only".into());
        }
        if self.max_attempts == 0 {
            return fail("max_attempts must be at least 1".into());
        }
        self.grid_points().map(|_| ())
    }

    /// Resolves every grid point: builds the host law and fixes each target.
    pub fn grid_points(&self) -> Result<Vec<GridPoint>, HarnessError> {
        let kappas = self.sizes();
        let offspring = match &self.law {
            DegreeLaw::Offspring { pmf } => Some(
                DegreeDistribution::from_f64(pmf.iter().copied())
                    .map_err(|e| HarnessError::Config(format!("offspring law: {e}")))?,
            ),
            DegreeLaw::PowerTail { alpha, truncation } => Some(
                power_tail_offspring(*alpha, *truncation)
                    .map_err(|e| HarnessError::Config(format!("power tail: {e}")))?,
            ),
            _ => None,
        };
        let mut points = Vec::with_capacity(kappas.len());
        for (index, &kappa) in kappas.iter().enumerate() {
            let host = match (&self.law, &offspring) {
                (_, Some(p)) => Host::Gw {
                    offspring: p.clone(),
                    n: kappa,
                },
                (DegreeLaw::Explicit { statistics }, _) => Host::Uniform(statistics[index].clone()),
                (DegreeLaw::Proportions { pmf }, _) => Host::Uniform(scaled_statistic(pmf, kappa)?),
                (DegreeLaw::Periodic { b }, _) => Host::Uniform(periodic_statistic(*b, kappa)?),
                (DegreeLaw::Star, _) => {
                    if kappa < 2 {
                        return Err(HarnessError::Config("star family needs kappa >= 2".into()));
                    }
                    Host::Uniform(DegreeStatistic::star(kappa))
                }
                (DegreeLaw::Hubs, _) => Host::Uniform(hub_statistic(kappa)?),
                _ => unreachable!("offspring laws are handled above"),
            };
            let targets = self
                .targets
                .iter()
                .map(|t| resolve_target(t, &host))
                .collect::<Result<Vec<_>, _>>()?;
            points.push(GridPoint {
                index,
                kappa,
                host,
                targets,
            });
        }
        Ok(points)
    }
}

fn resolve_target(spec: &TargetSpec, host: &Host) -> Result<ResolvedTarget, HarnessError> {
    let n = host.size();
    let in_range = |m: i64, what: &str| -> Result<u64, HarnessError> {
        if m < 1 || m as u64 > n {
            Err(HarnessError::Config(format!("{what} evaluates to {m}, outside 1..={n}")))
        } else {
            Ok(m as u64)
        }
    };
    Ok(match spec {
        TargetSpec::Tree { tree } => ResolvedTarget::Tree(tree.clone()),
        TargetSpec::Statistic { statistic } => ResolvedTarget::Statistic(statistic.clone()),
        TargetSpec::Size { m } => ResolvedTarget::Size(in_range(*m as i64, "size")?),
        TargetSpec::SizeRule { rule } => ResolvedTarget::Size(in_range(rule.evaluate(n), "size rule")?),
        TargetSpec::WindowSum { rule } => ResolvedTarget::WindowSum(in_range(rule.evaluate(n), "window rule")?),
        TargetSpec::HostStar => ResolvedTarget::Tree(PlaneTree::star(n)),
        TargetSpec::Chain { base, lambda, statistic } => {
            let tree = chain_for_mean(base, *lambda, *statistic, host)?;
            if *statistic {
                ResolvedTarget::Statistic(tree.statistic().clone())
            } else {
                ResolvedTarget::Tree(tree)
            }
        }
    })
}

/// `base` with `j` unary vertices stacked above its root.
pub fn chain(base: &PlaneTree, j: u64) -> PlaneTree {
    let mut degrees = vec![1u64; j as usize];
    degrees.extend_from_slice(base.degrees());
    PlaneTree::from_degrees(degrees).expect("a unary chain over a tree is a tree")
}

/// `ln(|n| pi_p(T))`, plus the log class size of `bm` when `statistic`.
pub fn ln_poisson_mean(host: &Host, bm: &DegreeStatistic, statistic: bool) -> f64 {
    let n = host.size() as f64;
    let ln_p = |i: u64| match host {
        Host::Uniform(bn) => (bn.count(i) as f64 / n).ln(),
        Host::Gw { offspring, .. } => offspring.prob(i).ln(),
    };
    let ln_pi: f64 = bm.iter().map(|(i, c)| c as f64 * ln_p(i)).sum();
    n.ln() + ln_pi + if statistic { bm.ln_count_trees() } else { 0.0 }
}

fn chain_for_mean(base: &PlaneTree, lambda: f64, statistic: bool, host: &Host) -> Result<PlaneTree, HarnessError> {
    if !(lambda > 0.0) {
        return Err(HarnessError::Config("chain targets need lambda > 0".into()));
    }
    let n = host.size();
    let target = lambda.ln();
    let mut best: Option<(f64, PlaneTree)> = None;
    let mut j = 0;
    while base.size() + j <= n {
        let t = chain(base, j);
        let ln_mean = ln_poisson_mean(host, t.statistic(), statistic);
        if !ln_mean.is_finite() {
            break;
        }
        let gap = (ln_mean - target).abs();
        if best.as_ref().is_none_or(|(g, _)| gap < *g) {
            best = Some((gap, t));
        }
        if ln_mean < target {
            break;
        }
        j += 1;
    }
    best.map(|(_, t)| t)
        .ok_or_else(|| HarnessError::Config(format!("no chain over {base} fits a host of size {n}")))
}

/// Scales proportions to a statistic of size `n`: `n(i) = round(p_i n)` for
/// `i >= 2`, leaves from the degree identity, degree 1 takes the rest.
pub fn scaled_statistic(pmf: &[(u64, f64)], n: u64) -> Result<DegreeStatistic, HarnessError> {
    let bad = |msg: String| HarnessError::Config(msg);
    if !pmf.iter().any(|&(i, p)| i == 1 && p > 0.0) {
        return Err(bad("scaled proportions need degree 1 in the support".into()));
    }
    let mut counts: Vec<(u64, u64)> = Vec::new();
    let mut leaves: u64 = 1;
    let mut used: u64 = 0;
    for &(i, p) in pmf {
        if !(p >= 0.0) {
            return Err(bad(format!("negative proportion at degree {i}")));
        }
        if i >= 2 {
            let c = (p * n as f64).round_ties_even() as u64;
            leaves += (i - 1) * c;
            used += c;
            counts.push((i, c));
        }
    }
    let rest = n
        .checked_sub(leaves + used)
        .ok_or_else(|| bad(format!("proportions cannot be scaled to size {n}")))?;
    counts.push((0, leaves));
    counts.push((1, rest));
    DegreeStatistic::new(counts).map_err(|e| bad(format!("scaled statistic: {e}")))
}

/// `n(1)` near `b n^{1/3}`, bumped by one when needed so that the remaining
/// vertices split as `n(0) = n(2) + 1`.
pub fn periodic_statistic(b: f64, n: u64) -> Result<DegreeStatistic, HarnessError> {
    let mut unary = (b * (n as f64).cbrt()).round_ties_even() as u64;
    if n < unary + 1 {
        return Err(HarnessError::Config(format!("periodic family does not fit size {n}")));
    }
    if (n - unary) % 2 == 0 {
        unary += 1;
    }
    let binary = (n - unary - 1) / 2;
    DegreeStatistic::new([(0, binary + 1), (1, unary), (2, binary)])
        .map_err(|e| HarnessError::Config(format!("periodic statistic: {e}")))
}

/// The hub family at index `kappa`.
pub fn hub_statistic(kappa: u64) -> Result<DegreeStatistic, HarnessError> {
    if kappa < 1 {
        return Err(HarnessError::Config("hub family needs kappa >= 1".into()));
    }
    let big = 2 * (kappa as f64).powf(0.75).floor() as u64 + 1;
    let hubs = (kappa as f64).sqrt().floor() as u64;
    let leaves = 1 + kappa + (big - 1) * hubs;
    DegreeStatistic::new([(0, leaves), (1, kappa), (2, kappa), (big, hubs)])
        .map_err(|e| HarnessError::Config(format!("hub statistic: {e}")))
}
