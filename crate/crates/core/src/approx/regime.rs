use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{size_expectation_asymptotic, ts_lambda, ApproxError};
use crate::numeric::CompensatedSum;
use crate::treecore::{DegreeDistribution, DegreeStatistic, PlaneTree, Span};

/// Final-grid-point mean above which a diverging family is labelled normal.
pub const NORMAL_THRESHOLD: f64 = 20.0;
/// Products of the smallness condition above this value are flagged.
pub const CONDITION_THRESHOLD: f64 = 0.1;
/// Means below this value are treated as tending to zero.
pub const VANISHING_LAMBDA: f64 = 1e-3;

/// What is counted at every grid point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegimeTarget {
    Tree(PlaneTree),
    Statistic(DegreeStatistic),
    Size(u64),
}

/// A finite grid along a sequence family.
#[derive(Clone, Debug, PartialEq)]
pub enum RegimeScenario {
    /// Uniform trees with prescribed degree statistics.
    Fixed { points: Vec<(DegreeStatistic, RegimeTarget)> },
    /// Conditioned Galton–Watson trees with the given tree sizes.
    Gw {
        offspring: DegreeDistribution,
        points: Vec<(u64, RegimeTarget)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    PoissonFixed,
    NormalDiverging,
    SizePoisson,
    GWPoisson,
    GWNormal,
}

/// Parameters of the predicted limit law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitLaw {
    Poisson { lambda: f64 },
    Normal { mu: f64, sigma: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RegimeFlag {
    /// The smallness product is not small at the last grid point.
    ConditionViolated,
    /// The mean tends to zero, a case the theory leaves open.
    OpenProblem,
    /// The degree law is lattice with span above one.
    Lattice,
    /// The fringe size is close to the host size.
    OutsideSizeRegime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimePrediction {
    pub regime: Regime,
    pub law: LimitLaw,
    pub diagnostics: Vec<(String, f64)>,
    pub flags: Vec<RegimeFlag>,
}

impl RegimePrediction {
    pub fn predicted_lambda(&self) -> Option<f64> {
        match self.law {
            LimitLaw::Poisson { lambda } => Some(lambda),
            LimitLaw::Normal { .. } => None,
        }
    }

    pub fn normal(&self) -> Option<(f64, f64)> {
        match self.law {
            LimitLaw::Normal { mu, sigma } => Some((mu, sigma)),
            LimitLaw::Poisson { .. } => None,
        }
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn has_flag(&self, flag: RegimeFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// Evaluates the governing quantities along the grid and labels the limit
/// suggested by their values at the last point. Nothing is extrapolated.
pub fn classify_regime(scenario: &RegimeScenario) -> Result<RegimePrediction, ApproxError> {
    match scenario {
        RegimeScenario::Fixed { points } => classify_fixed(points),
        RegimeScenario::Gw { offspring, points } => classify_gw(offspring, points),
    }
}

/// `ln(|bn| pi_{p(bn)}(T))` summed over the statistic `n_t`.
fn ln_pi(ln_p: impl Fn(u64) -> f64, n_t: &DegreeStatistic) -> f64 {
    n_t.iter()
        .map(|(i, c)| c as f64 * ln_p(i))
        .collect::<CompensatedSum>()
        .value()
}

/// `sum_{i in D} p_i(n_t)^2 / p_i(host)`.
fn spread(p: impl Fn(u64) -> f64, n_t: &DegreeStatistic) -> f64 {
    let m = n_t.size() as f64;
    n_t.iter()
        .map(|(i, c)| {
            let pt = c as f64 / m;
            pt * pt / p(i)
        })
        .collect::<CompensatedSum>()
        .value()
}

fn offset_variance(p: impl Iterator<Item = (u64, f64)>) -> f64 {
    p.map(|(i, q)| {
        let dev = i as f64 - 1.0;
        dev * dev * q
    })
    .collect::<CompensatedSum>()
    .value()
}

fn classify_fixed(points: &[(DegreeStatistic, RegimeTarget)]) -> Result<RegimePrediction, ApproxError> {
    if points.is_empty() {
        return Err(ApproxError::UnderspecifiedScenario);
    }
    let mut diagnostics = Vec::new();
    let mut flags = Vec::new();
    let mut lambdas = Vec::with_capacity(points.len());
    let mut last_condition = 0.0;
    let mut sizes_only = true;
    let mut last_size = None;

    for (k, (bn, target)) in points.iter().enumerate() {
        let n = bn.size() as f64;
        let p = |i: u64| bn.count(i) as f64 / n;
        let ln_p = |i: u64| {
            let c = bn.count(i);
            if c == 0 {
                f64::NEG_INFINITY
            } else {
                libm::log(c as f64 / n)
            }
        };
        match target {
            RegimeTarget::Size(m) => {
                let sigma2 = offset_variance(bn.iter().map(|(i, c)| (i, c as f64 / n)));
                let a = *m as f64 / libm::pow(n, 2.0 / 3.0);
                let lambda = ts_lambda(a, sigma2)?;
                let finite = size_expectation_asymptotic(bn.size(), *m, sigma2)?;
                diagnostics.push((format!("a[{k}]"), a));
                diagnostics.push((format!("sigma2[{k}]"), sigma2));
                diagnostics.push((format!("lambda[{k}]"), lambda));
                diagnostics.push((format!("size_expectation[{k}]"), finite.value));
                lambdas.push(lambda);
                last_size = Some((DegreeDistribution::from_statistic(bn).span(), finite.outside_regime));
            }
            RegimeTarget::Tree(_) | RegimeTarget::Statistic(_) => {
                let (n_t, class_ln) = match target {
                    RegimeTarget::Tree(t) => (t.statistic(), 0.0),
                    RegimeTarget::Statistic(bm) => (bm, bm.ln_count_trees()),
                    RegimeTarget::Size(_) => unreachable!(),
                };
                sizes_only = false;
                let ln_pi_t = ln_pi(ln_p, n_t) + class_ln;
                let lambda = libm::exp(libm::log(n) + ln_pi_t);
                let m = n_t.size() as f64;
                let feasible = n_t.iter().all(|(i, _)| bn.count(i) > 0);
                let condition = if feasible {
                    m * m * libm::exp(ln_pi_t) * spread(p, n_t)
                } else {
                    0.0
                };
                diagnostics.push((format!("lambda[{k}]"), lambda));
                diagnostics.push((format!("condition[{k}]"), condition));
                lambdas.push(lambda);
                last_condition = condition;
            }
        }
    }

    let last = *lambdas.last().unwrap();
    if let Some((span, outside)) = last_size {
        if !sizes_only {
            return Err(ApproxError::UnderspecifiedScenario);
        }
        if span != Span::Finite(1) {
            flags.push(RegimeFlag::Lattice);
        }
        if outside {
            flags.push(RegimeFlag::OutsideSizeRegime);
        }
        return Ok(RegimePrediction {
            regime: Regime::SizePoisson,
            law: LimitLaw::Poisson { lambda: last },
            diagnostics,
            flags,
        });
    }

    if last_condition >= CONDITION_THRESHOLD {
        flags.push(RegimeFlag::ConditionViolated);
    }
    if last < VANISHING_LAMBDA {
        flags.push(RegimeFlag::OpenProblem);
    }
    let (regime, law) = if diverging(&lambdas) {
        (
            Regime::NormalDiverging,
            LimitLaw::Normal {
                mu: last,
                sigma: libm::sqrt(last),
            },
        )
    } else {
        (Regime::PoissonFixed, LimitLaw::Poisson { lambda: last })
    };
    Ok(RegimePrediction {
        regime,
        law,
        diagnostics,
        flags,
    })
}

fn diverging(lambdas: &[f64]) -> bool {
    let last = *lambdas.last().unwrap();
    last >= NORMAL_THRESHOLD && lambdas[0] <= last
}

fn classify_gw(p: &DegreeDistribution, points: &[(u64, RegimeTarget)]) -> Result<RegimePrediction, ApproxError> {
    if points.is_empty() {
        return Err(ApproxError::UnderspecifiedScenario);
    }
    let ln_p = |i: u64| {
        let q = p.prob(i);
        if q > 0.0 {
            libm::log(q)
        } else {
            f64::NEG_INFINITY
        }
    };
    let sigma2 = offset_variance(p.pmf().iter().copied());
    let mut diagnostics = Vec::new();
    let mut flags = Vec::new();
    let mut lambdas = Vec::with_capacity(points.len());
    let mut any_size = false;
    let mut any_tree = false;

    for (k, (n, target)) in points.iter().enumerate() {
        let nf = *n as f64;
        let lambda = match target {
            RegimeTarget::Tree(t) => {
                any_tree = true;
                libm::exp(libm::log(nf) + ln_pi(ln_p, t.statistic()))
            }
            RegimeTarget::Statistic(bm) => {
                any_tree = true;
                libm::exp(libm::log(nf) + ln_pi(ln_p, bm) + bm.ln_count_trees())
            }
            RegimeTarget::Size(m) => {
                any_size = true;
                let a = *m as f64 / libm::pow(nf, 2.0 / 3.0);
                diagnostics.push((format!("a[{k}]"), a));
                ts_lambda(a, sigma2)?
            }
        };
        diagnostics.push((format!("lambda[{k}]"), lambda));
        lambdas.push(lambda);
    }
    if any_size && any_tree {
        return Err(ApproxError::UnderspecifiedScenario);
    }
    diagnostics.push((String::from("sigma2"), sigma2));
    diagnostics.push((String::from("mean"), p.mean()));
    if p.span() != Span::Finite(1) {
        flags.push(RegimeFlag::Lattice);
    }
    let last = *lambdas.last().unwrap();
    if last < VANISHING_LAMBDA && !any_size {
        flags.push(RegimeFlag::OpenProblem);
    }
    let (regime, law) = if !any_size && diverging(&lambdas) {
        (
            Regime::GWNormal,
            LimitLaw::Normal {
                mu: last,
                sigma: libm::sqrt(last),
            },
        )
    } else {
        (Regime::GWPoisson, LimitLaw::Poisson { lambda: last })
    };
    Ok(RegimePrediction {
        regime,
        law,
        diagnostics,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn star_point(k: u64) -> (DegreeStatistic, RegimeTarget) {
        let t = PlaneTree::star(k);
        (t.statistic().clone(), RegimeTarget::Tree(t))
    }

    #[test]
    fn star_family() {
        let points: Vec<_> = [10u64, 100, 1000, 10_000].into_iter().map(star_point).collect();
        let r = classify_regime(&RegimeScenario::Fixed { points }).unwrap();
        assert_eq!(r.regime, Regime::PoissonFixed);
        let lambda = r.predicted_lambda().unwrap();
        assert!((lambda - libm::pow(1.0 - 1e-4, 9999.0)).abs() < 1e-10);
        assert!((lambda - libm::exp(-1.0)).abs() < 1e-4);
        assert!(r.has_flag(RegimeFlag::ConditionViolated));
        assert!(r.normal().is_none());
    }

    #[test]
    fn two_vertex_star() {
        let r = classify_regime(&RegimeScenario::Fixed {
            points: vec![star_point(2)],
        })
        .unwrap();
        assert!((r.predicted_lambda().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn leaf_diverges() {
        let points: Vec<_> = [10u64, 100, 1000]
            .into_iter()
            .map(|k| {
                let bn = DegreeStatistic::new([(0, k + 1), (1, k), (2, k)]).unwrap();
                (bn, RegimeTarget::Tree(PlaneTree::leaf()))
            })
            .collect();
        let r = classify_regime(&RegimeScenario::Fixed { points }).unwrap();
        assert_eq!(r.regime, Regime::NormalDiverging);
        let (mu, sigma) = r.normal().unwrap();
        assert!((mu - 1001.0).abs() < 1e-9);
        assert!((sigma - libm::sqrt(1001.0)).abs() < 1e-9);
        assert!((r.diagnostic("lambda[0]").unwrap() - 11.0).abs() < 1e-12);
    }

    #[test]
    fn size_and_gw() {
        let bn = DegreeStatistic::new([(0, 30_001), (1, 20_000), (2, 30_000)]).unwrap();
        let r = classify_regime(&RegimeScenario::Fixed {
            points: vec![(bn, RegimeTarget::Size(2154))],
        })
        .unwrap();
        assert_eq!(r.regime, Regime::SizePoisson);
        assert!(r.predicted_lambda().unwrap() > 0.0);
        assert!(!r.has_flag(RegimeFlag::Lattice));

        let binary = DegreeDistribution::from_fractions([(0, 1, 2), (2, 1, 2)]).unwrap();
        let r = classify_regime(&RegimeScenario::Gw {
            offspring: binary,
            points: vec![(1001, RegimeTarget::Size(101))],
        })
        .unwrap();
        assert_eq!(r.regime, Regime::GWPoisson);
        assert!(r.has_flag(RegimeFlag::Lattice));
    }

    #[test]
    fn empty_scenario() {
        assert_eq!(
            classify_regime(&RegimeScenario::Fixed { points: vec![] }),
            Err(ApproxError::UnderspecifiedScenario)
        );
    }
}
