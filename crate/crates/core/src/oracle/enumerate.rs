use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{ExactPmf, OracleError};
use crate::numeric;
use crate::treecore::{DegreeStatistic, FringeIndex, PlaneTree};

/// All trees with a given degree statistic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub statistic: DegreeStatistic,
    /// Lexicographic in the depth-first degree sequence.
    pub trees: Vec<PlaneTree>,
}

impl EnumerationResult {
    pub fn cardinality(&self) -> usize {
        self.trees.len()
    }
}

/// Every element of `T_bn`, in lexicographic order of degree sequences.
pub fn enumerate_trees(bn: &DegreeStatistic, limit: u128) -> Result<EnumerationResult, OracleError> {
    let count = bn.count_trees();
    let count_u = count.to_u128().unwrap_or(u128::MAX);
    if count_u > limit {
        return Err(OracleError::LimitExceeded { count: count_u, limit });
    }
    let mut remaining: Vec<(u64, u64)> = bn.iter().collect();
    let n = bn.size() as usize;
    let mut prefix = Vec::with_capacity(n);
    let mut trees = Vec::with_capacity(count_u as usize);
    extend(&mut remaining, &mut prefix, 0, n, &mut trees);
    debug_assert_eq!(BigUint::from(trees.len()), count);
    Ok(EnumerationResult {
        statistic: bn.clone(),
        trees,
    })
}

/// Backtracking over the multiset; `excess` is the running sum of `d_i - 1`,
/// which must stay nonnegative before the last position.
fn extend(
    remaining: &mut [(u64, u64)],
    prefix: &mut Vec<u64>,
    excess: i64,
    n: usize,
    out: &mut Vec<PlaneTree>,
) {
    if prefix.len() == n {
        out.push(PlaneTree::from_degrees(prefix.clone()).expect("pruned to valid encodings"));
        return;
    }
    let last = prefix.len() + 1 == n;
    for ix in 0..remaining.len() {
        let (deg, left) = remaining[ix];
        if left == 0 {
            continue;
        }
        let next = excess + deg as i64 - 1;
        if next < 0 && !last {
            continue;
        }
        remaining[ix].1 -= 1;
        prefix.push(deg);
        extend(remaining, prefix, next, n, out);
        prefix.pop();
        remaining[ix].1 += 1;
    }
}

/// Every plane tree with `m` vertices (there are `Catalan(m - 1)`), in
/// lexicographic order.
pub fn enumerate_trees_of_size(m: u64) -> Vec<PlaneTree> {
    assert!(m >= 1);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m as usize);
    all_shapes(&mut prefix, 0, m as usize, &mut out);
    out
}

fn all_shapes(prefix: &mut Vec<u64>, excess: i64, n: usize, out: &mut Vec<PlaneTree>) {
    let pos = prefix.len();
    if pos == n {
        if excess == -1 {
            out.push(PlaneTree::from_degrees(prefix.clone()).unwrap());
        }
        return;
    }
    let slots_after = (n - pos - 1) as i64;
    for deg in 0..n as u64 {
        let next = excess + deg as i64 - 1;
        // the remaining positions can lower the excess by at most one each
        if next - slots_after > -1 {
            break;
        }
        if next < 0 && pos + 1 < n {
            continue;
        }
        prefix.push(deg);
        all_shapes(prefix, next, n, out);
        prefix.pop();
    }
}

/// Which fringe count to tabulate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counter {
    Tree(PlaneTree),
    Statistic(DegreeStatistic),
    Size(u64),
}

impl Counter {
    pub fn count(&self, host: &PlaneTree) -> u64 {
        let idx = FringeIndex::new(host);
        match self {
            Counter::Tree(t) => idx.count_tree(t),
            Counter::Statistic(bm) => idx.count_statistic(bm),
            Counter::Size(m) => idx.count_size(*m),
        }
    }
}

/// Exact law of a fringe count over uniform `T_bn`.
pub fn exact_count_distribution(
    bn: &DegreeStatistic,
    counter: &Counter,
    limit: u128,
) -> Result<ExactPmf, OracleError> {
    let all = enumerate_trees(bn, limit)?;
    Ok(exact_count_distribution_over(&all.trees, counter))
}

/// Exact law of a fringe count over a uniformly chosen element of `trees`.
pub fn exact_count_distribution_over(trees: &[PlaneTree], counter: &Counter) -> ExactPmf {
    let total = trees.len() as u64;
    let mut tally: alloc::collections::BTreeMap<i64, u64> = Default::default();
    for t in trees {
        *tally.entry(counter.count(t) as i64).or_insert(0) += 1;
    }
    ExactPmf::from_pairs(
        tally
            .into_iter()
            .map(|(k, c)| (k, numeric::rational_from_u64(c, total))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stat(s: &str) -> DegreeStatistic {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let r = enumerate_trees(&stat("0:2,2:1"), 100).unwrap();
        assert_eq!(r.trees, [PlaneTree::cherry()]);
        let r = enumerate_trees(&stat("0:1"), 100).unwrap();
        assert_eq!(r.trees, [PlaneTree::leaf()]);
        let r = enumerate_trees(&stat("0:3,1:1,3:1"), 100).unwrap();
        let texts: Vec<_> = r.trees.iter().map(|t| alloc::string::ToString::to_string(t)).collect();
        assert_eq!(texts, ["1,3,0,0,0", "3,0,0,1,0", "3,0,1,0,0", "3,1,0,0,0"]);
        assert!(matches!(
            enumerate_trees(&stat("0:3,1:1,3:1"), 3),
            Err(OracleError::LimitExceeded { count: 4, limit: 3 })
        ));
    }

    #[test]
    fn catalan_counts() {
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (m, &c) in catalan.iter().enumerate() {
            assert_eq!(enumerate_trees_of_size(m as u64 + 1).len(), c);
        }
    }

    #[test]
    fn count_distribution_examples() {
        let pmf = exact_count_distribution(&stat("0:2,2:1"), &Counter::Tree(PlaneTree::cherry()), 10).unwrap();
        assert_eq!(pmf, ExactPmf::point_mass(1));
        let bn = stat("0:4,2:3");
        let pmf = exact_count_distribution(&bn, &Counter::Tree(PlaneTree::leaf()), 10).unwrap();
        assert_eq!(pmf, ExactPmf::point_mass(4));
        let pmf = exact_count_distribution(&bn, &Counter::Tree(PlaneTree::cherry()), 10).unwrap();
        assert_eq!(pmf.mean(), numeric::rational_from_u64(6, 5));
        assert_eq!(pmf.total(), numeric::rational_from_u64(1, 1));
    }
}
