mod common;

use common::{arb_statistic, catalan, statistics_of_size, stat};
use fringe_core::oracle::{enumerate_trees, enumerate_trees_of_size};
use fringe_core::samplers::{sample_uniform_bridge, shuffle, RandomStream};
use fringe_core::treecore::{
    fringe_count_size, fringe_count_statistic, fringe_count_tree, DegreeSequence, FringeIndex,
};
use fringe_core::{DegreeStatistic, PlaneTree};
use num_bigint::BigUint;
use proptest::prelude::*;
use std::collections::BTreeMap;

#[test]
fn count_examples() {
    assert_eq!(stat("0:2,2:1").count_trees(), BigUint::from(1u32));
    assert_eq!(stat("0:1").count_trees(), BigUint::from(1u32));
    assert_eq!(stat("0:3,1:1,3:1").count_trees(), BigUint::from(4u32));
    assert!(DegreeStatistic::new([(0, 3), (2, 3)]).is_err());
}

#[test]
fn enumeration_matches_count_up_to_nine() {
    for m in 1..=9 {
        for bn in statistics_of_size(m) {
            let all = enumerate_trees(&bn, 1 << 20).unwrap();
            assert_eq!(BigUint::from(all.cardinality()), bn.count_trees(), "{bn}");
            for t in &all.trees {
                assert_eq!(t.statistic(), &bn);
            }
            let mut sorted = all.trees.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), all.trees.len());
        }
    }
}

#[test]
fn catalan_totals() {
    for m in 1..=10u64 {
        let total: BigUint = statistics_of_size(m).iter().map(|bn| bn.count_trees()).sum();
        assert_eq!(total, catalan(m - 1), "m={m}");
        assert_eq!(BigUint::from(enumerate_trees_of_size(m).len()), catalan(m - 1));
    }
}

#[test]
fn counters_agree_on_all_small_hosts() {
    for n in 1..=9u64 {
        let shapes_by_size: BTreeMap<u64, Vec<PlaneTree>> =
            (1..=n).map(|m| (m, enumerate_trees_of_size(m))).collect();
        for host in enumerate_trees_of_size(n) {
            let idx = FringeIndex::new(&host);
            for m in 1..=n {
                let by_size = fringe_count_size(&host, m);
                let by_stat: u64 = statistics_of_size(m)
                    .iter()
                    .map(|bm| fringe_count_statistic(&host, bm))
                    .sum();
                let by_tree: u64 = shapes_by_size[&m].iter().map(|t| fringe_count_tree(&host, t)).sum();
                assert_eq!(by_size, by_stat);
                assert_eq!(by_size, by_tree);
                assert_eq!(idx.count_size(m), by_size);
            }
            assert_eq!(fringe_count_tree(&host, &PlaneTree::leaf()), host.statistic().count(0));
            assert_eq!(fringe_count_size(&host, n), 1);
        }
    }
}

#[test]
fn fringe_examples() {
    let host = PlaneTree::path(5);
    assert_eq!(fringe_count_tree(&host, &PlaneTree::path(2)), 1);
    assert_eq!(fringe_count_size(&host, 3), 1);
    let host: PlaneTree = "2,2,0,0,2,0,0".parse().unwrap();
    assert_eq!(fringe_count_tree(&host, &PlaneTree::cherry()), 2);
    assert_eq!(fringe_count_tree(&host, &PlaneTree::leaf()), 4);
}

#[test]
fn cycle_lemma_exhaustive_small() {
    for m in 1..=7 {
        for bn in statistics_of_size(m) {
            let d = bn.multiset();
            let mut perm = d.clone();
            permutations(&mut perm, 0, &mut |p| {
                let seq = DegreeSequence::new(p.to_vec());
                assert_eq!(seq.valid_rotation_count(), 1);
                assert!(seq.cycle_rotate().unwrap().is_valid_tree_encoding());
            });
        }
    }
}

fn permutations(v: &mut Vec<u64>, k: usize, f: &mut dyn FnMut(&[u64])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cycle_lemma_unique_rotation(bn in arb_statistic(5, 6), seed in any::<u64>()) {
        let mut rng = RandomStream::new(seed, 0);
        let bridge = DegreeSequence::new(sample_uniform_bridge(&bn, &mut rng));
        prop_assert!(bridge.is_bridge());
        let valid: Vec<usize> = (0..bridge.len())
            .filter(|&s| bridge.rotated(s).is_valid_tree_encoding())
            .collect();
        prop_assert_eq!(valid.len(), 1);
        prop_assert_eq!(bridge.cycle_rotate().unwrap(), bridge.rotated(valid[0]));
    }

    #[test]
    fn round_trips(bn in arb_statistic(4, 8), seed in any::<u64>()) {
        let mut rng = RandomStream::new(seed, 1);
        let mut d = bn.multiset();
        shuffle(&mut d, &mut rng);
        let tree = PlaneTree::from_bridge(&d).unwrap();
        let seq = tree.degree_sequence().clone();
        let again = PlaneTree::from_degree_sequence(seq.clone()).unwrap();
        prop_assert_eq!(again.degree_sequence(), &seq);
        prop_assert_eq!(&again, &tree);
        let text = tree.to_string();
        prop_assert_eq!(text.parse::<PlaneTree>().unwrap(), tree.clone());
        prop_assert_eq!(bn.to_string().parse::<DegreeStatistic>().unwrap(), bn.clone());
        prop_assert_eq!(tree.statistic(), &bn);
    }

    #[test]
    fn fringes_are_trees_and_nest(bn in arb_statistic(3, 10), seed in any::<u64>()) {
        let mut rng = RandomStream::new(seed, 2);
        let tree = PlaneTree::from_bridge(&sample_uniform_bridge(&bn, &mut rng)).unwrap();
        let sizes = tree.fringe_sizes();
        prop_assert_eq!(sizes[0], tree.size());
        for v in 0..tree.degrees().len() {
            let f = tree.fringe_at(v);
            prop_assert_eq!(f.size(), sizes[v]);
            prop_assert!(bn.dominates(f.statistic()));
            prop_assert!(fringe_count_tree(&tree, &f) >= 1);
        }
        prop_assert_eq!(fringe_count_tree(&tree, &PlaneTree::leaf()), bn.count(0));
    }
}
