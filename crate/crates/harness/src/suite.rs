//! Built-in scenarios, one per limit regime.

use fringe_core::approx::Regime;
use fringe_core::{DegreeStatistic, PlaneTree};

use crate::config::{DegreeLaw, Family, ScenarioConfig, SizeRule, TargetSpec, SCHEMA_VERSION};

/// Proportions `p_0 = p_2 = 1/4`, `p_1 = 1/2`.
pub const BALANCED: [(u64, f64); 3] = [(0, 0.25), (1, 0.5), (2, 0.25)];
/// Proportions `p_0 = 0.55`, `p_1 = 0.2`, `p_2 = 0.15`, `p_5 = 0.1`.
pub const SKEWED: [(u64, f64); 4] = [(0, 0.55), (1, 0.2), (2, 0.15), (5, 0.1)];

fn base(name: &str, description: &str, family: Family, law: DegreeLaw) -> ScenarioConfig {
    ScenarioConfig {
        schema_version: SCHEMA_VERSION,
        name: name.into(),
        description: description.into(),
        family,
        law,
        grid: Vec::new(),
        targets: Vec::new(),
        replicates: 2_000,
        master_seed: 20_240_601,
        expectation: None,
        max_attempts: crate::config::DEFAULT_MAX_ATTEMPTS,
        exact_max_host: crate::config::DEFAULT_EXACT_MAX_HOST,
    }
}

fn chain(base: PlaneTree, lambda: f64, statistic: bool) -> TargetSpec {
    TargetSpec::Chain {
        base,
        lambda,
        statistic,
    }
}

/// Uniform trees on `{0:2, 2:1}`: the cherry occurs exactly once.
pub fn single_tree_class() -> ScenarioConfig {
    let mut c = base(
        "single-tree-class",
        "one tree in the class; the count is a point mass",
        Family::FixedStatistic,
        DegreeLaw::Explicit {
            statistics: vec!["0:2,2:1".parse::<DegreeStatistic>().expect("valid statistic")],
        },
    );
    c.targets = vec![TargetSpec::Tree { tree: PlaneTree::cherry() }];
    c.replicates = 100;
    c
}

/// Growing unary chains with bounded mean, and the cherry with diverging mean.
pub fn the01() -> ScenarioConfig {
    let mut c = base(
        "the01",
        "fixed statistics: Poisson counts for chains with |n| pi near 1, normal counts for the cherry",
        Family::FixedStatistic,
        DegreeLaw::Proportions { pmf: BALANCED.to_vec() },
    );
    c.grid = vec![1_024, 4_096, 16_384, 65_536];
    c.targets = vec![chain(PlaneTree::leaf(), 1.0, false), TargetSpec::Tree { tree: PlaneTree::cherry() }];
    c.replicates = 5_000;
    c
}

/// Statistic counts whose class mean stays near 2.
pub fn thpo2() -> ScenarioConfig {
    let mut c = base(
        "thpo2",
        "fixed statistics: Poisson counts of a growing statistic",
        Family::FixedStatistic,
        DegreeLaw::Proportions { pmf: BALANCED.to_vec() },
    );
    c.grid = vec![1_024, 4_096, 16_384, 65_536];
    c.targets = vec![chain(PlaneTree::cherry(), 2.0, true)];
    c.replicates = 5_000;
    c.expectation = Some(Regime::PoissonFixed);
    c
}

/// Fringes of size about `|n|^{2/3}`.
pub fn ts() -> ScenarioConfig {
    let mut c = base(
        "ts",
        "fixed statistics: fringes of size round(|n|^(2/3))",
        Family::FixedStatistic,
        DegreeLaw::Proportions { pmf: SKEWED.to_vec() },
    );
    c.grid = vec![10_000, 50_000, 250_000];
    c.targets = vec![TargetSpec::SizeRule { rule: SizeRule::new(1.0) }];
    c.expectation = Some(Regime::SizePoisson);
    c
}

/// Finite-variance conditioned Galton–Watson trees.
pub fn gw1_finite() -> ScenarioConfig {
    let mut c = base(
        "gw1-finite",
        "conditioned GW, finite variance: Poisson chains and normal cherries",
        Family::GwConditioned,
        DegreeLaw::Offspring { pmf: BALANCED.to_vec() },
    );
    c.grid = vec![1_000, 10_000, 100_000];
    c.targets = vec![chain(PlaneTree::leaf(), 1.0, false), TargetSpec::Tree { tree: PlaneTree::cherry() }];
    c
}

/// Power-tail offspring in the domain of a stable law of index 1.5.
pub fn gw1_power_tail() -> ScenarioConfig {
    let mut c = base(
        "gw1-power-tail",
        "conditioned GW, infinite variance (alpha = 1.5, truncated at 10^6)",
        Family::GwConditioned,
        DegreeLaw::PowerTail {
            alpha: crate::config::DEFAULT_ALPHA,
            truncation: crate::config::DEFAULT_TRUNCATION,
        },
    );
    c.grid = vec![300, 1_000, 3_000];
    c.targets = vec![chain(PlaneTree::leaf(), 1.0, false), TargetSpec::Tree { tree: PlaneTree::cherry() }];
    c
}

/// Size-`n^{2/3}` fringes of nonlattice conditioned Galton–Watson trees.
pub fn gw2() -> ScenarioConfig {
    let mut c = base(
        "gw2",
        "conditioned GW: fringes of size round(n^(2/3))",
        Family::GwConditioned,
        DegreeLaw::Offspring { pmf: BALANCED.to_vec() },
    );
    c.grid = vec![1_000, 10_000, 100_000];
    c.targets = vec![TargetSpec::SizeRule { rule: SizeRule::new(1.0) }];
    c.expectation = Some(Regime::GWPoisson);
    c
}

/// Stars: `|n| pi` tends to `1/e` while the count is always 1.
pub fn ex1() -> ScenarioConfig {
    let mut c = base(
        "ex1",
        "stars: the only tree of its class, far outside the theorems",
        Family::FixedStatistic,
        DegreeLaw::Star,
    );
    c.grid = vec![10, 100, 1_000, 10_000];
    c.targets = vec![TargetSpec::HostStar];
    c.replicates = 1_000;
    c
}

/// Span-2 limit: adjacent even and odd fringe sizes.
pub fn eperiodic() -> ScenarioConfig {
    let mut c = base(
        "eperiodic",
        "n(1) ~ |n|^(1/3), the rest on {0, 2}: even and odd fringe sizes",
        Family::FixedStatistic,
        DegreeLaw::Periodic { b: 1.0 },
    );
    c.grid = vec![10_000, 100_000];
    c.targets = vec![
        TargetSpec::SizeRule { rule: SizeRule::new(1.0) },
        TargetSpec::SizeRule {
            rule: SizeRule::new(1.0).with_offset(1),
        },
    ];
    c.replicates = 4_000;
    c
}

/// Window sums of uniform bridges against the local normal profile.
pub fn tllt() -> ScenarioConfig {
    let mut c = base(
        "tllt",
        "sums of the first round(|n|^(2/3)) degrees of a uniform bridge",
        Family::FixedStatistic,
        DegreeLaw::Proportions { pmf: SKEWED.to_vec() },
    );
    c.grid = vec![10_000, 50_000, 250_000];
    c.targets = vec![TargetSpec::WindowSum { rule: SizeRule::new(1.0) }];
    c.replicates = 10_000;
    c
}

/// Every built-in scenario.
pub fn builtin_suite() -> Vec<ScenarioConfig> {
    vec![
        single_tree_class(),
        the01(),
        thpo2(),
        ts(),
        gw1_finite(),
        gw1_power_tail(),
        gw2(),
        ex1(),
        eperiodic(),
        tllt(),
    ]
}

pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    builtin_suite().into_iter().find(|c| c.name == name)
}
