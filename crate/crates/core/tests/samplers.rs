mod common;

use std::collections::{BTreeMap, HashMap};

use common::{stat, statistics_of_size};
use fringe_core::oracle::enumerate_trees;
use fringe_core::samplers::{
    exchangeable_pair_step, sample_conditioned_gw, sample_swor_sum, sample_uniform_bridge,
    sample_uniform_tree, stein_coupled_pair, window_matches, Chooser, ExhaustiveChooser, GwSampler,
    RandomStream,
};
use fringe_core::{DegreeDistribution, DegreeStatistic, PlaneTree};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn tv<K: std::hash::Hash + Eq + Clone>(a: &HashMap<K, f64>, b: &HashMap<K, f64>) -> f64 {
    let mut keys: Vec<&K> = a.keys().chain(b.keys()).collect();
    keys.sort_by_key(|k| a.get(*k).copied().unwrap_or(0.0).to_bits());
    let mut seen = std::collections::HashSet::new();
    let mut d = 0.0;
    for k in keys {
        if seen.insert(k) {
            d += (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs();
        }
    }
    0.5 * d
}

#[test]
fn uniform_tree_law() {
    let draws = 100_000u64;
    let mut checked = 0;
    for n in 2..=9 {
        for bn in statistics_of_size(n) {
            let count = bn.count_trees().to_u64().unwrap();
            if count > 30 || count < 2 {
                continue;
            }
            checked += 1;
            let all = enumerate_trees(&bn, 100).unwrap().trees;
            let mut rng = RandomStream::new(2024, checked);
            let mut hist: HashMap<PlaneTree, u64> = HashMap::new();
            for _ in 0..draws {
                *hist.entry(sample_uniform_tree(&bn, &mut rng)).or_insert(0) += 1;
            }
            assert!(hist.keys().all(|t| all.contains(t)));
            let expected = draws as f64 / count as f64;
            let chi2: f64 = all
                .iter()
                .map(|t| {
                    let o = hist.get(t).copied().unwrap_or(0) as f64;
                    (o - expected).powi(2) / expected
                })
                .sum();
            let quantile = ChiSquared::new((count - 1) as f64).unwrap().inverse_cdf(0.999);
            assert!(chi2 < quantile, "{bn}: chi2 {chi2} >= {quantile}");
            let emp: HashMap<PlaneTree, f64> = hist.iter().map(|(t, &c)| (t.clone(), c as f64 / draws as f64)).collect();
            let uni: HashMap<PlaneTree, f64> = all.iter().map(|t| (t.clone(), 1.0 / count as f64)).collect();
            assert!(tv(&emp, &uni) <= 0.02, "{bn}");
        }
    }
    assert!(checked >= 10);
}

#[test]
fn swor_moments() {
    let d: Vec<i64> = (0..60).map(|i| (i * 7 % 11) as i64 - 3).collect();
    let n = d.len() as f64;
    let m = 23u64;
    let mean_d = d.iter().sum::<i64>() as f64 / n;
    let q: f64 = d.iter().map(|&x| (x as f64 - mean_d).powi(2)).sum();
    let var = m as f64 * (n - m as f64) / (n * (n - 1.0)) * q;
    let reps = 200_000;
    let mut rng = RandomStream::new(5, 0);
    let xs: Vec<f64> = (0..reps).map(|_| sample_swor_sum(&d, m, &mut rng).unwrap() as f64).collect();
    let mean = xs.iter().sum::<f64>() / reps as f64;
    let s2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
    let se_mean = (var / reps as f64).sqrt();
    assert!((mean - m as f64 * mean_d).abs() < 4.0 * se_mean);
    // the sum is close to normal, so the variance estimate has sd about var * sqrt(2 / reps)
    assert!((s2 - var).abs() < 4.0 * var * (2.0 / reps as f64).sqrt(), "{s2} vs {var}");
}

#[test]
fn binary_gw_on_five_vertices() {
    let p = DegreeDistribution::from_fractions([(0, 1, 2), (2, 1, 2)]).unwrap();
    let mut rng = RandomStream::new(77, 0);
    let draws = 100_000;
    let mut hist: HashMap<PlaneTree, f64> = HashMap::new();
    for _ in 0..draws {
        *hist.entry(sample_conditioned_gw(&p, 5, &mut rng, 10_000).unwrap()).or_insert(0.0) += 1.0 / draws as f64;
    }
    let shapes = enumerate_trees(&stat("0:3,2:2"), 10).unwrap().trees;
    assert_eq!(shapes.len(), 2);
    let uni: HashMap<PlaneTree, f64> = shapes.iter().map(|t| (t.clone(), 0.5)).collect();
    assert!(tv(&hist, &uni) <= 0.02);
}

#[test]
fn gw_tree_law_matches_product_weights() {
    // offspring 0,1,3 with probabilities 1/2, 1/6, 1/3 (mean 7/6 is fine for conditioning)
    let p = DegreeDistribution::from_fractions([(0, 1, 2), (1, 1, 6), (3, 1, 3)]).unwrap();
    let sampler = GwSampler::new(&p, 7).unwrap();
    let shapes: Vec<PlaneTree> = fringe_core::oracle::enumerate_trees_of_size(7)
        .into_iter()
        .filter(|t| t.degrees().iter().all(|&d| d == 0 || d == 1 || d == 3))
        .collect();
    let weight = |t: &PlaneTree| -> f64 { t.degrees().iter().map(|&d| p.prob(d)).product() };
    let total: f64 = shapes.iter().map(weight).sum();
    let target: HashMap<PlaneTree, f64> = shapes.iter().map(|t| (t.clone(), weight(t) / total)).collect();
    let mut rng = RandomStream::new(3, 9);
    let draws = 200_000;
    let mut hist: HashMap<PlaneTree, f64> = HashMap::new();
    for _ in 0..draws {
        *hist.entry(sampler.sample(&mut rng, 100_000).unwrap()).or_insert(0.0) += 1.0 / draws as f64;
    }
    assert!(tv(&hist, &target) <= 0.01);
}

/// Exact law of `f(chooser)` over every path of choices.
fn exact_law<K: Ord, F: FnMut(&mut ExhaustiveChooser) -> K>(mut f: F) -> BTreeMap<K, BigRational> {
    let mut ex = ExhaustiveChooser::new();
    let mut law: BTreeMap<K, BigRational> = BTreeMap::new();
    loop {
        let key = f(&mut ex);
        let (num, den) = ex.path_weight();
        *law.entry(key).or_insert_with(BigRational::zero) +=
            BigRational::new(BigUint::from(num).into(), BigUint::from(den).into());
        if !ex.advance() {
            break;
        }
    }
    law
}

/// Uniform law on arrangements of `bn` whose window at `anchor` spells `t`.
fn conditional_bridge_law(bn: &DegreeStatistic, t: &PlaneTree, anchor: usize) -> BTreeMap<Vec<u64>, BigRational> {
    let all = exact_law(|ex| sample_uniform_bridge(bn, ex));
    let kept: Vec<(Vec<u64>, BigRational)> = all
        .into_iter()
        .filter(|(d, _)| window_matches(d, anchor, t.degrees()))
        .collect();
    let mass: BigRational = kept.iter().map(|(_, p)| p.clone()).sum();
    kept.into_iter().map(|(d, p)| (d, p / &mass)).collect()
}

#[test]
fn coupling_law_is_exactly_conditional() {
    let cases = [
        ("0:3,1:1,3:1", "1,0", 0usize),
        ("0:3,2:2", "2,0,0", 3),
        ("0:4,1:1,2:1,3:1", "1,0", 4),
        ("0:4,2:3", "2,0,0", 5),
        ("0:3,1:1,2:2", "0", 2),
        ("0:3,1:2,3:1", "1,1,0", 1),
    ];
    for (bn, t, anchor) in cases {
        let bn = stat(bn);
        let t: PlaneTree = t.parse().unwrap();
        let coupled = exact_law(|ex| stein_coupled_pair(&bn, &t, anchor, ex).unwrap().coupled.into_vec());
        let want = conditional_bridge_law(&bn, &t, anchor);
        assert_eq!(coupled, want, "{bn} {t} at {anchor}");
    }
}

#[test]
fn coupling_law_sampled() {
    let bn = stat("0:4,1:1,2:1,3:1");
    let t: PlaneTree = "2,0,0".parse().unwrap();
    let anchor = 2;
    let want = conditional_bridge_law(&bn, &t, anchor);
    let mut rng = RandomStream::new(123, 0);
    let draws = 1_000_000;
    let mut hist: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for _ in 0..draws {
        let pair = stein_coupled_pair(&bn, &t, anchor, &mut rng).unwrap();
        *hist.entry(pair.coupled.into_vec()).or_insert(0) += 1;
    }
    let mut d = 0.0;
    for (k, p) in &want {
        d += (hist.get(k).copied().unwrap_or(0) as f64 / draws as f64 - p.to_f64().unwrap()).abs();
    }
    d += hist.keys().filter(|k| !want.contains_key(*k)).map(|k| hist[k] as f64 / draws as f64).sum::<f64>();
    assert!(0.5 * d <= 0.01, "{}", 0.5 * d);
}

#[test]
fn exchangeable_pair_is_symmetric_exactly() {
    for (bn, target) in [("0:4,1:1,2:1,3:1", "0:2,1:1,2:1"), ("0:4,1:2,2:3", "0:2,2:1"), ("0:3,1:2,2:2", "0:2,1:1,2:1")] {
        let bn = stat(bn);
        let target = stat(target);
        let law = exact_law(|ex| {
            let host = sample_uniform_tree(&bn, ex);
            let out = exchangeable_pair_step(&host, &target, ex);
            (host, out)
        });
        for ((a, b), p) in &law {
            let back = law.get(&(b.clone(), a.clone())).cloned().unwrap_or_else(BigRational::zero);
            assert_eq!(&back, p, "{bn}");
        }
        let total: BigRational = law.values().cloned().sum();
        assert_eq!(total, BigRational::one());
    }
}

#[test]
fn exchangeable_pair_is_symmetric_sampled() {
    let bn = stat("0:5,1:2,2:2,3:1");
    let target = stat("0:2,1:1,2:1");
    let mut rng = RandomStream::new(99, 4);
    let draws = 1_000_000;
    let mut hist: HashMap<(PlaneTree, PlaneTree), f64> = HashMap::new();
    for _ in 0..draws {
        let host = sample_uniform_tree(&bn, &mut rng);
        let out = exchangeable_pair_step(&host, &target, &mut rng);
        *hist.entry((host, out)).or_insert(0.0) += 1.0 / draws as f64;
    }
    let swapped: HashMap<(PlaneTree, PlaneTree), f64> =
        hist.iter().map(|((a, b), &p)| ((b.clone(), a.clone()), p)).collect();
    assert!(tv(&hist, &swapped) <= 0.01);
}

#[test]
fn streams_are_reproducible() {
    let bn = stat("0:24,1:10,2:9,3:5,5:1");
    let run = |seed: u64, stream: u64| {
        let mut rng = RandomStream::new(seed, stream);
        let trees: Vec<PlaneTree> = (0..20).map(|_| sample_uniform_tree(&bn, &mut rng)).collect();
        (trees, rng.next_u64(), rng.below(1000))
    };
    assert_eq!(run(1, 2), run(1, 2));
    assert_ne!(run(1, 2).0, run(1, 3).0);
    assert_ne!(run(1, 2).0, run(2, 2).0);
}
