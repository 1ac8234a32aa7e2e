mod common;

use common::{arb_statistic, rat, stat, statistics_of_size};
use fringe_core::approx::{
    cai_devroye_bound, classify_regime, lindeberg_diagnostic, llt_prediction, normal_density_cdf,
    poisson_pmf, size_expectation_asymptotic, statistic_tv_bound, stein_delta, ts_lambda, tv_distance,
    tv_distance_pmfs, Histogram, Regime, RegimeFlag, RegimeScenario, RegimeTarget,
};
use fringe_core::exactstats::{expected_count_size, expected_count_tree};
use fringe_core::oracle::{enumerate_trees_of_size, swor_sum_pmf_f64};
use fringe_core::{DegreeStatistic, PlaneTree};
use num_rational::BigRational;
use proptest::prelude::*;

/// `Phi(x)` from the Taylor series of `erf`, summed with enough terms for
/// `|x| <= 4`.
fn series_normal_cdf(x: f64) -> f64 {
    let z = x / std::f64::consts::SQRT_2;
    let mut term = z;
    let mut sum = z;
    for n in 1..200 {
        term *= -z * z / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    0.5 * (1.0 + 2.0 / std::f64::consts::PI.sqrt() * sum)
}

#[test]
fn normal_cdf_matches_series() {
    for i in -40..=40 {
        let x = i as f64 / 10.0;
        let (_, cdf) = normal_density_cdf(0.0, 1.0, x).unwrap();
        assert!((cdf - series_normal_cdf(x)).abs() < 1e-12, "x={x}");
    }
    let (_, c) = normal_density_cdf(0.0, 1.0, 1.96).unwrap();
    assert!((c - 0.9750).abs() < 1e-4);
}

#[test]
fn poisson_mass_is_one() {
    for &lambda in &[0.0, 0.01, 0.5, 1.0, 3.7, 20.0, 150.0, 1000.0] {
        let top = (lambda + 12.0 * f64::sqrt(lambda) + 20.0) as u64;
        let total: f64 = (0..=top).map(|k| poisson_pmf(lambda, k)).sum();
        assert!((total - 1.0).abs() < 1e-9, "lambda={lambda}");
    }
}

#[test]
fn delta_examples() {
    let r = stein_delta(&stat("0:4,2:3"), &PlaneTree::cherry()).unwrap();
    assert_eq!(r.lambda.rational().unwrap(), &rat(6, 5));
    assert_eq!(r.delta.rational().unwrap(), &rat(8, 5));
    let r = statistic_tv_bound(&stat("0:4,2:3"), &stat("0:4,2:3")).unwrap();
    assert!(r.vacuous);
    assert_eq!(r.lambda.rational().unwrap(), &rat(1, 1));
}

#[test]
fn cai_devroye_uses_exact_variance() {
    // N_cherry on {0:4,2:3}: P(N=1)=4/5, P(N=2)=1/5, so Var = 4/25 and
    // (Var - E)/E = (4/25 - 6/5)/(6/5) = -13/15.
    let cd = cai_devroye_bound(&stat("0:4,2:3"), &PlaneTree::cherry()).unwrap();
    assert_eq!(cd.radicand.rational().unwrap(), &-rat(13, 15));
    assert!(cd.clamped);
    assert_eq!(cd.bound, 2.0);
    let leaf = cai_devroye_bound(&stat("0:5,1:2,2:2,3:1"), &PlaneTree::leaf()).unwrap();
    // N_leaf = 5 always: (0 - 5)/5 = -1, clamped
    assert_eq!(leaf.radicand.rational().unwrap(), &-rat(1, 1));
    assert_eq!(leaf.bound, 2.0);
}

#[test]
fn spread_exceeds_one_eighth_everywhere_small() {
    let eighth = rat(1, 8);
    for n in 1..=9 {
        let shapes: Vec<PlaneTree> = (1..=n).flat_map(enumerate_trees_of_size).collect();
        for bn in statistics_of_size(n) {
            for t in shapes.iter().filter(|t| bn.dominates(t.statistic())) {
                let r = stein_delta(&bn, t).unwrap();
                assert!(r.spread.as_ref().unwrap().rational().unwrap() > &eighth);
                assert_eq!(r.delta, r.delta_alt);
            }
        }
    }
}

#[test]
fn lm1_against_exact_expectation() {
    // 1000 vertices with offspring 0, 1, 2 in proportion 1/4, 1/2, 1/4: sigma^2 = 1/2
    let bn = DegreeStatistic::new([(0, 251), (1, 499), (2, 250)]).unwrap();
    let n = bn.size();
    let sigma2 = bn
        .iter()
        .map(|(i, c)| (i as f64 - 1.0).powi(2) * c as f64 / n as f64)
        .sum::<f64>();
    let m = 100;
    let exact = expected_count_size(&bn, m).unwrap().to_f64();
    let asym = size_expectation_asymptotic(n, m, sigma2).unwrap().value;
    assert!((asym / exact - 1.0).abs() < 0.1, "{asym} vs {exact}");
}

#[test]
fn lm1_approaches_ts() {
    let a = 0.5;
    for n in [10_000u64, 100_000, 1_000_000] {
        let m = (a * (n as f64).powf(2.0 / 3.0)) as u64;
        let a_eff = m as f64 / (n as f64).powf(2.0 / 3.0);
        let ratio = size_expectation_asymptotic(n, m, 1.5).unwrap().value / ts_lambda(a_eff, 1.5).unwrap();
        assert!((ratio - 1.0).abs() < 0.02, "n={n} ratio={ratio}");
    }
}

/// Sequence of the lattice counterexample: 0, +1, -1 each `k` times and
/// `+-2 floor(k^{3/4})` each `floor(k^{1/2})` times.
fn counterexample(k: u64) -> Vec<i64> {
    let big = 2 * (k as f64).powf(0.75).floor() as i64;
    let reps = (k as f64).sqrt().floor() as usize;
    let mut d = Vec::new();
    for _ in 0..k {
        d.extend([0, 1, -1]);
    }
    for _ in 0..reps {
        d.extend([big, -big]);
    }
    d
}

#[test]
fn lindeberg_holds_on_counterexample() {
    let mut values = Vec::new();
    for k in [100u64, 1_000, 10_000, 100_000] {
        let d = counterexample(k);
        assert_eq!(d.len() as u64, 3 * k + 2 * (k as f64).sqrt().floor() as u64);
        let m = d.len() as u64 / 2;
        values.push(lindeberg_diagnostic(&d, m, 0.1).unwrap());
        let p = llt_prediction(&d, m, 0).unwrap();
        assert!(p.mu_hat.abs() < 1e-9);
    }
    // the large values sit in the tail for small k and leave it once
    // 2 k^{3/4} < 0.1 sigma_hat ~ 0.14 k
    assert!(values[0] > 0.9, "{values:?}");
    assert_eq!(values[3], 0.0, "{values:?}");
}

#[test]
fn local_limit_fails_on_counterexample() {
    let mut previous = f64::INFINITY;
    for k in [16u64, 64, 100] {
        let d = counterexample(k);
        let m = d.len() as u64 / 2;
        let target = (k as f64).powf(0.75).floor() as i64;
        let exact = swor_sum_pmf_f64(&d, m, None).unwrap().prob(target);
        let predicted = llt_prediction(&d, m, target).unwrap().prob;
        let ratio = exact / predicted;
        assert!(ratio < previous / 5.0, "k={k}: {ratio}");
        previous = ratio;
    }
    assert!(previous < 1e-3);
}

#[test]
fn regime_examples() {
    let star = |k: u64| {
        let t = PlaneTree::star(k);
        (t.statistic().clone(), RegimeTarget::Tree(t))
    };
    let r = classify_regime(&RegimeScenario::Fixed { points: vec![star(2)] }).unwrap();
    assert_eq!(r.predicted_lambda(), Some(0.5));
    let r = classify_regime(&RegimeScenario::Fixed {
        points: (1..=4).map(|e| star(10u64.pow(e))).collect(),
    })
    .unwrap();
    assert_eq!(r.regime, Regime::PoissonFixed);
    assert!((r.predicted_lambda().unwrap() - (-1f64).exp()).abs() < 2e-5);
    assert!(r.has_flag(RegimeFlag::ConditionViolated));
    // exact E N = 1 on the star class
    let bn = PlaneTree::star(50).statistic().clone();
    let e = expected_count_tree(&bn, &PlaneTree::star(50)).unwrap();
    assert_eq!(e.rational().unwrap(), &BigRational::from_integer(1.into()));
}

fn arb_pmf() -> impl Strategy<Value = Vec<(i64, f64)>> {
    proptest::collection::vec(0.0f64..1.0, 1..8).prop_map(|w| {
        let s: f64 = w.iter().sum::<f64>().max(1e-12);
        w.iter().enumerate().map(|(k, x)| (k as i64, x / s)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tv_is_a_metric(a in arb_pmf(), b in arb_pmf(), c in arb_pmf()) {
        let ab = tv_distance_pmfs(&a, &b);
        prop_assert!((ab - tv_distance_pmfs(&b, &a)).abs() < 1e-15);
        prop_assert!(tv_distance_pmfs(&a, &a) < 1e-15);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(ab <= tv_distance_pmfs(&a, &c) + tv_distance_pmfs(&c, &b) + 1e-12);
    }

    #[test]
    fn histogram_tv_agrees_with_pmf_tv(samples in proptest::collection::vec(0i64..6, 1..200), lambda in 0.1f64..4.0) {
        let h: Histogram = samples.iter().copied().collect();
        let d = tv_distance(&h, |k| poisson_pmf(lambda, k)).unwrap();
        let target: Vec<(i64, f64)> = (0..80).map(|k| (k, poisson_pmf(lambda, k as u64))).collect();
        let emp: Vec<(i64, f64)> = h.frequencies();
        prop_assert!((d - tv_distance_pmfs(&emp, &target)).abs() < 1e-9);
    }

    #[test]
    fn spread_and_delta_identities(bn in arb_statistic(4, 30), target in arb_statistic(3, 3)) {
        prop_assume!(bn.dominates(&target));
        let t = PlaneTree::canonical(&target);
        let r = stein_delta(&bn, &t).unwrap();
        prop_assert!(r.spread.unwrap().rational().unwrap() > &rat(1, 8));
        prop_assert_eq!(&r.delta, &r.delta_alt);
        let s = statistic_tv_bound(&bn, &target).unwrap();
        prop_assert_eq!(&s.delta, &s.delta_alt);
    }

    #[test]
    fn llt_total_mass(values in proptest::collection::vec(-4i64..8, 400..1200), frac in 0.2f64..0.8) {
        let m = ((values.len() as f64) * frac) as u64;
        let Ok(first) = llt_prediction(&values, m, 0) else { return Ok(()); };
        let sigma = first.sigma_hat2.sqrt();
        prop_assume!(sigma >= 5.0);
        let lo = (first.mu_hat - 8.0 * sigma).ceil() as i64;
        let hi = (first.mu_hat + 8.0 * sigma).floor() as i64;
        let mass: f64 = (lo..=hi).map(|k| llt_prediction(&values, m, k).unwrap().prob).sum();
        prop_assert!((0.99..=1.01).contains(&mass), "mass {}", mass);
    }
}
