//! Seeded parallel execution of a scenario.

use std::time::Instant;

use fringe_core::approx::{
    cai_devroye_bound, classify_regime, ks_p_value, ks_statistic, lindeberg_diagnostic, poisson_pmf,
    size_expectation_asymptotic, standard_normal_cdf, statistic_tv_bound, stein_delta, ts_lambda, tv_distance,
    Histogram, RegimeFlag, RegimeScenario, RegimeTarget, VANISHING_LAMBDA,
};
use fringe_core::exactstats::{
    expected_count_size, factorial_moment_size, factorial_moment_statistic, factorial_moment_tree,
    variance_from_factorial, ExactError,
};
use fringe_core::oracle::OracleError;
use fringe_core::samplers::{sample_uniform_bridge, GwSampler, RandomStream};
use fringe_core::treecore::FringeIndex;
use fringe_core::{DegreeStatistic, ExactScalar, PlaneTree, SignedScalar};
use rand::RngCore;
use rayon::prelude::*;

use crate::config::{ln_poisson_mean, Family, GridPoint, Host, ResolvedTarget, ScenarioConfig};
use crate::diagnostics::condition_diagnostics;
use crate::llt::llt_comparison;
use crate::report::{ExperimentReport, PointReport, SeedProvenance, TargetRegime, TargetReport};
use crate::HarnessError;

/// Lindeberg threshold `eps` reported for size and window targets.
pub const LINDEBERG_EPS: f64 = 0.1;
/// Half-width, in standard deviations, of the local limit comparison.
pub const LLT_WIDTH: f64 = 6.0;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    /// Store wall times in the report.
    pub record_timing: bool,
}

/// Seed of grid point `index`, drawn from a stream reserved for seeding.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    let mut seeder = RandomStream::new(master_seed, u64::MAX);
    let mut seed = seeder.next_u64();
    for _ in 0..index {
        seed = seeder.next_u64();
    }
    seed
}

/// Runs every grid point of a validated scenario.
pub fn run_scenario(config: &ScenarioConfig, options: &RunOptions) -> Result<ExperimentReport, HarnessError> {
    config.validate()?;
    let points = config.grid_points()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;

    let mut reports = Vec::with_capacity(points.len());
    for point in &points {
        let start = Instant::now();
        let seed = point_seed(config.master_seed, point.index);
        let sample = pool.install(|| sample_point(config, point, seed))?;
        let targets = point
            .targets
            .iter()
            .zip(sample.histograms.iter())
            .map(|(t, h)| summarize_target(config, point, t, h))
            .collect();
        reports.push(PointReport {
            index: point.index,
            kappa: point.kappa,
            size: point.host.size(),
            host: match &point.host {
                Host::Uniform(bn) => Some(bn.to_string()),
                Host::Gw { .. } => None,
            },
            seed: SeedProvenance {
                master_seed: config.master_seed,
                point_seed: seed,
                streams: config.replicates,
            },
            replicates: config.replicates,
            gw_attempts: sample.attempts,
            targets,
            wall_time_ms: options.record_timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        });
    }

    let conditions = match config.family {
        Family::FixedStatistic => {
            let stats: Vec<DegreeStatistic> = points
                .iter()
                .map(|p| match &p.host {
                    Host::Uniform(bn) => bn.clone(),
                    Host::Gw { .. } => unreachable!("fixed families have uniform hosts"),
                })
                .collect();
            condition_diagnostics(&stats)
        }
        Family::GwConditioned => Vec::new(),
    };
    let regimes = (0..config.targets.len()).map(|k| regime_of(config, &points, k)).collect();
    Ok(ExperimentReport {
        schema_version: crate::SCHEMA_VERSION,
        scenario: config.name.clone(),
        config: config.clone(),
        rounding: "nearest, ties to even".into(),
        notes: scenario_notes(config),
        points: reports,
        conditions,
        regimes,
    })
}

fn scenario_notes(config: &ScenarioConfig) -> Vec<String> {
    let mut notes = vec![format!(
        "replicate r uses stream r of the point seed; {} replicates per point",
        config.replicates
    )];
    if let crate::config::DegreeLaw::PowerTail { alpha, truncation } = &config.law {
        notes.push(format!("power tail alpha = {alpha}, truncation = {truncation}"));
    }
    if config.family == Family::GwConditioned {
        notes.push("exact moments are not attached to Galton–Watson hosts".into());
    }
    notes
}

struct PointSample {
    histograms: Vec<Histogram>,
    attempts: Option<u64>,
}

fn sample_point(config: &ScenarioConfig, point: &GridPoint, seed: u64) -> Result<PointSample, HarnessError> {
    let k = point.targets.len();
    let gw = match &point.host {
        Host::Gw { offspring, n } => Some(GwSampler::new(offspring, *n)?),
        Host::Uniform(_) => None,
    };
    let needs_tree = point.targets.iter().any(|t| !matches!(t, ResolvedTarget::WindowSum(_)));
    let one = |r: u64| -> Result<(Vec<i64>, u64), HarnessError> {
        let mut rng = RandomStream::new(seed, r);
        let (tree, bridge, attempts) = match (&point.host, &gw) {
            (Host::Uniform(bn), _) => {
                let bridge = sample_uniform_bridge(bn, &mut rng);
                let tree = needs_tree
                    .then(|| PlaneTree::from_bridge(&bridge))
                    .transpose()
                    .map_err(|e| HarnessError::Config(e.to_string()))?;
                (tree, Some(bridge), 0)
            }
            (Host::Gw { .. }, Some(sampler)) => {
                let (tree, attempts) = sampler.sample_counted(&mut rng, config.max_attempts)?;
                (Some(tree), None, attempts)
            }
            (Host::Gw { .. }, None) => unreachable!(),
        };
        let index = tree.as_ref().map(FringeIndex::new);
        let counts = point
            .targets
            .iter()
            .map(|t| {
                let idx = index.as_ref();
                match t {
                    ResolvedTarget::Tree(t) => idx.unwrap().count_tree(t) as i64,
                    ResolvedTarget::Statistic(bm) => idx.unwrap().count_statistic(bm) as i64,
                    ResolvedTarget::Size(m) => idx.unwrap().count_size(*m) as i64,
                    ResolvedTarget::WindowSum(m) => {
                        bridge.as_ref().unwrap()[..*m as usize].iter().sum::<u64>() as i64
                    }
                }
            })
            .collect();
        Ok((counts, attempts))
    };
    let empty = || (vec![Histogram::new(); k], 0u64);
    let (histograms, attempts) = (0..config.replicates)
        .into_par_iter()
        .map(one)
        .try_fold(empty, |(mut hs, total), item| {
            let (counts, attempts) = item?;
            for (h, c) in hs.iter_mut().zip(counts) {
                h.add(c);
            }
            Ok::<_, HarnessError>((hs, total + attempts))
        })
        .try_reduce(empty, |(mut a, ta), (b, tb)| {
            for (x, y) in a.iter_mut().zip(b.iter()) {
                x.merge(y);
            }
            Ok((a, ta + tb))
        })?;
    Ok(PointSample {
        histograms,
        attempts: gw.is_some().then_some(attempts),
    })
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Exact mean and variance, or the flag explaining their absence.
struct ExactMoments {
    mean: Option<ExactScalar>,
    variance: Option<SignedScalar>,
    flags: Vec<String>,
}

fn exact_flag(e: &ExactError) -> String {
    match e {
        ExactError::Oracle(OracleError::BudgetExceeded { .. } | OracleError::LimitExceeded { .. }) => {
            "exact-budget-exceeded".into()
        }
        ExactError::PrecisionLoss => "exact-precision-loss".into(),
        other => format!("exact-error: {other}"),
    }
}

fn exact_moments(config: &ScenarioConfig, host: &Host, target: &ResolvedTarget) -> ExactMoments {
    let mut out = ExactMoments {
        mean: None,
        variance: None,
        flags: Vec::new(),
    };
    let bn = match host {
        Host::Gw { .. } => {
            out.flags.push("exact-unavailable-gw".into());
            return out;
        }
        Host::Uniform(bn) => bn,
    };
    if bn.size() > config.exact_max_host {
        out.flags.push("exact-skipped-host-size".into());
        return out;
    }
    let moments: Result<(ExactScalar, Option<ExactScalar>), ExactError> = match target {
        ResolvedTarget::Tree(t) => factorial_moment_tree(bn, t, 1).and_then(|m1| {
            let m2 = factorial_moment_tree(bn, t, 2)?;
            Ok((m1.value, Some(m2.value)))
        }),
        ResolvedTarget::Statistic(bm) => factorial_moment_statistic(bn, bm, 1).and_then(|m1| {
            let m2 = factorial_moment_statistic(bn, bm, 2)?;
            Ok((m1.value, Some(m2.value)))
        }),
        ResolvedTarget::Size(m) => expected_count_size(bn, *m).and_then(|m1| {
            if 2 * m > bn.size() {
                // at most one fringe of this size fits
                Ok((m1, Some(ExactScalar::zero())))
            } else {
                match factorial_moment_size(bn, *m, 2) {
                    Ok(m2) => Ok((m1, Some(m2.value))),
                    Err(e) => {
                        out.flags.push(format!("variance: {}", exact_flag(&e)));
                        Ok((m1, None))
                    }
                }
            }
        }),
        ResolvedTarget::WindowSum(_) => return out,
    };
    match moments {
        Ok((m1, m2)) => {
            if let Some(m2) = m2 {
                match variance_from_factorial(&m1, &m2) {
                    Ok(v) => out.variance = Some(v),
                    Err(e) => out.flags.push(format!("variance: {}", exact_flag(&e))),
                }
            }
            out.mean = Some(m1);
        }
        Err(e) => out.flags.push(exact_flag(&e)),
    }
    out
}

fn degree_values(bn: &DegreeStatistic) -> Vec<i64> {
    bn.multiset().into_iter().map(|d| d as i64).collect()
}

fn offset_variance(host: &Host) -> f64 {
    match host {
        Host::Uniform(bn) => {
            let n = bn.size() as f64;
            bn.iter().map(|(i, c)| (i as f64 - 1.0).powi(2) * c as f64 / n).sum()
        }
        Host::Gw { offspring, .. } => offspring.pmf().iter().map(|&(i, p)| (i as f64 - 1.0).powi(2) * p).sum(),
    }
}

fn summarize_target(config: &ScenarioConfig, point: &GridPoint, target: &ResolvedTarget, h: &Histogram) -> TargetReport {
    let host = &point.host;
    let n = host.size();
    let exact = exact_moments(config, host, target);
    let mut flags = exact.flags;
    let exact_mean = exact.mean.as_ref().map(|m| m.to_f64()).and_then(finite);
    let exact_variance = exact.variance.as_ref().map(|v| v.to_f64()).and_then(finite);

    let mut predicted_lambda = None;
    let mut normal = None;
    let mut delta = None;
    let mut luc4 = None;
    let mut rny2 = None;
    let mut lindeberg = None;
    let mut llt_sup_error = None;
    let mut size_asymptotic = None;
    let mut exact_window = None;

    match target {
        ResolvedTarget::Tree(_) | ResolvedTarget::Statistic(_) => {
            let (bm, is_stat) = match target {
                ResolvedTarget::Tree(t) => (t.statistic().clone(), false),
                ResolvedTarget::Statistic(bm) => (bm.clone(), true),
                _ => unreachable!(),
            };
            let ln_mean = ln_poisson_mean(host, &bm, is_stat);
            let lambda = ln_mean.exp();
            predicted_lambda = finite(lambda);
            normal = finite(lambda).map(|l| (l, l.sqrt()));
            if lambda < VANISHING_LAMBDA {
                flags.push("open-problem".into());
            }
            // |T|^2 pi sum_i p_i(n_T)^2 / p_i(n)
            let law = host.degree_law();
            let m = bm.size() as f64;
            let spread: f64 = bm
                .iter()
                .map(|(i, c)| {
                    let pt = c as f64 / m;
                    pt * pt / law.prob(i)
                })
                .sum();
            rny2 = finite(m * m * (ln_mean - (n as f64).ln()).exp() * spread);
            if let Host::Uniform(bn) = host {
                if n <= config.exact_max_host {
                    let bound = match target {
                        ResolvedTarget::Tree(t) => stein_delta(bn, t),
                        _ => statistic_tv_bound(bn, &bm),
                    };
                    match bound {
                        Ok(b) => {
                            delta = finite(b.delta.to_f64());
                            luc4 = finite(b.cai_devroye.bound);
                            if b.vacuous {
                                flags.push("delta-vacuous".into());
                            }
                        }
                        Err(e) => {
                            flags.push(format!("bounds: {e}"));
                            if let ResolvedTarget::Tree(t) = target {
                                luc4 = cai_devroye_bound(bn, t).ok().and_then(|c| finite(c.bound));
                            }
                        }
                    }
                }
            }
        }
        ResolvedTarget::Size(m) => {
            let sigma2 = offset_variance(host);
            let a = *m as f64 / (n as f64).powf(2.0 / 3.0);
            predicted_lambda = ts_lambda(a, sigma2).ok().and_then(finite);
            normal = predicted_lambda.map(|l| (l, l.sqrt()));
            size_asymptotic = size_expectation_asymptotic(n, *m, sigma2).ok().and_then(|s| {
                if s.outside_regime {
                    flags.push("outside-size-regime".into());
                }
                finite(s.value)
            });
            if let Host::Uniform(bn) = host {
                lindeberg = lindeberg_diagnostic(&degree_values(bn), *m, LINDEBERG_EPS).ok().and_then(finite);
            }
        }
        ResolvedTarget::WindowSum(m) => {
            if let Host::Uniform(bn) = host {
                let d = degree_values(bn);
                let nf = n as f64;
                let mf = *m as f64;
                let mean = mf * (nf - 1.0) / nf;
                let q: f64 = d.iter().map(|&x| (x as f64 - (nf - 1.0) / nf).powi(2)).sum();
                let var = if n > 1 { mf * (nf - mf) * q / (nf * (nf - 1.0)) } else { 0.0 };
                exact_window = Some((mean, var));
                lindeberg = lindeberg_diagnostic(&d, *m, LINDEBERG_EPS).ok().and_then(finite);
                if let Ok(p) = fringe_core::approx::llt_prediction(&d, *m, 0) {
                    normal = Some((p.mu_hat, p.sigma_hat2.sqrt()));
                }
                if n <= config.exact_max_host {
                    match llt_comparison(&d, *m, LLT_WIDTH) {
                        Ok(c) => llt_sup_error = finite(c.sup_error),
                        Err(e) => flags.push(format!("llt: {e}")),
                    }
                }
            }
        }
    }

    let (exact_mean, exact_variance) = match exact_window {
        Some((m, v)) => (Some(m), Some(v)),
        None => (exact_mean, exact_variance),
    };
    let counts_target = !matches!(target, ResolvedTarget::WindowSum(_));
    let tv_poisson = predicted_lambda
        .filter(|_| counts_target)
        .and_then(|l| tv_distance(h, |k| poisson_pmf(l, k)).ok());
    let tv_poisson_exact_mean = exact_mean
        .filter(|_| counts_target)
        .and_then(|l| tv_distance(h, |k| poisson_pmf(l, k)).ok());
    let standardizer = match (exact_mean, exact_variance) {
        (Some(m), Some(v)) if v > 0.0 => Some((m, v.sqrt())),
        _ => normal.filter(|&(_, s)| s > 0.0),
    };
    let (ks_normal, ks_p) = match standardizer {
        Some((mu, sd)) => {
            let sample: Vec<f64> = h
                .iter()
                .flat_map(|(k, c)| std::iter::repeat_n((k as f64 - mu) / sd, c as usize))
                .collect();
            let d = ks_statistic(&sample, standard_normal_cdf);
            (finite(d), finite(ks_p_value(d, sample.len())))
        }
        None => (None, None),
    };

    TargetReport {
        label: target.label(),
        histogram: h.iter().collect(),
        empirical_mean: h.mean(),
        empirical_variance: h.variance(),
        exact_mean,
        exact_mean_rational: exact.mean.as_ref().and_then(|m| m.rational_string()),
        exact_variance,
        exact_variance_rational: exact.variance.as_ref().and_then(|v| v.rational_string()),
        predicted_lambda,
        normal_mean: normal.map(|(m, _)| m),
        normal_sd: normal.map(|(_, s)| s),
        tv_poisson,
        tv_poisson_exact_mean,
        ks_normal,
        ks_p_value: ks_p,
        delta,
        luc4,
        rny2,
        lindeberg,
        llt_sup_error,
        size_asymptotic,
        flags,
    }
}

fn regime_of(config: &ScenarioConfig, points: &[GridPoint], k: usize) -> TargetRegime {
    let mut out = TargetRegime {
        target: k,
        regime: None,
        flags: Vec::new(),
        predicted_lambda: None,
        expectation_met: None,
        diagnostics: Vec::new(),
        notes: Vec::new(),
    };
    let as_regime = |t: &ResolvedTarget| match t {
        ResolvedTarget::Tree(t) => Some(RegimeTarget::Tree(t.clone())),
        ResolvedTarget::Statistic(bm) => Some(RegimeTarget::Statistic(bm.clone())),
        ResolvedTarget::Size(m) => Some(RegimeTarget::Size(*m)),
        ResolvedTarget::WindowSum(_) => None,
    };
    let targets: Option<Vec<RegimeTarget>> = points.iter().map(|p| as_regime(&p.targets[k])).collect();
    let Some(targets) = targets else {
        out.notes.push("window sums have no fringe regime".into());
        return out;
    };
    let scenario = match &points[0].host {
        Host::Uniform(_) => RegimeScenario::Fixed {
            points: points
                .iter()
                .zip(targets)
                .map(|(p, t)| match &p.host {
                    Host::Uniform(bn) => (bn.clone(), t),
                    Host::Gw { .. } => unreachable!(),
                })
                .collect(),
        },
        Host::Gw { offspring, .. } => RegimeScenario::Gw {
            offspring: offspring.clone(),
            points: points.iter().map(|p| p.host.size()).zip(targets).collect(),
        },
    };
    match classify_regime(&scenario) {
        Ok(pred) => {
            out.regime = Some(pred.regime);
            out.predicted_lambda = pred.predicted_lambda().and_then(finite);
            out.diagnostics = pred.diagnostics.into_iter().filter(|(_, v)| v.is_finite()).collect();
            out.flags = pred.flags;
            let open = out.flags.contains(&RegimeFlag::OpenProblem);
            if open {
                out.notes.push("open-problem: the mean tends to zero; no verdict".into());
            }
            out.expectation_met = match config.expectation {
                Some(e) if !open => Some(e == pred.regime),
                _ => None,
            };
        }
        Err(e) => out.notes.push(format!("regime: {e}")),
    }
    out
}
