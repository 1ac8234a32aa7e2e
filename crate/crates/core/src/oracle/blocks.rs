use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{swor_point_exact, Groups, OracleError};
use crate::exactstats::ExactScalar;
use crate::numeric;
use crate::treecore::DegreeStatistic;

pub const MAX_BLOCKS: u64 = 3;
pub const MAX_DISTINCT_VALUES: usize = 12;

/// Probability that each of `r` fixed disjoint windows of length `m` of a
/// uniform arrangement of the degrees of `bn` sums to `m - 1`.
///
/// Blocks are conditioned one at a time: every value profile of the first
/// block is enumerated with its multivariate hypergeometric weight and the
/// rest is evaluated on the depleted multiset.
pub fn joint_block_probability(
    bn: &DegreeStatistic,
    m: u64,
    r: u64,
    budget: u128,
) -> Result<ExactScalar, OracleError> {
    assert!(m >= 1 && r >= 1, "block length and count must be positive");
    if r.saturating_mul(m) > bn.size() {
        return Err(OracleError::CountOutOfRange {
            m: r.saturating_mul(m),
            len: bn.size(),
        });
    }
    let distinct = bn.iter().count();
    if r > MAX_BLOCKS || distinct > MAX_DISTINCT_VALUES {
        return Err(OracleError::BudgetExceeded {
            work: u128::MAX,
            budget,
        });
    }
    let counts: Vec<(u64, u64)> = bn.iter().collect();
    let mut spent = 0u128;
    let p = blocks(&counts, m, r, budget, &mut spent)?;
    Ok(ExactScalar::from_rational(p))
}

fn blocks(
    counts: &[(u64, u64)],
    m: u64,
    r: u64,
    budget: u128,
    spent: &mut u128,
) -> Result<BigRational, OracleError> {
    if r == 1 {
        let groups = Groups::from_counts(counts.iter().copied());
        let k = m as i64 - 1;
        let remaining = budget.saturating_sub(*spent);
        *spent += groups.work_estimate(m, Some(m - 1));
        return swor_point_exact(&groups, m, k, remaining);
    }
    let total: u64 = counts.iter().map(|&(_, c)| c).sum();
    let denom = numeric::binomial(total, m);
    let mut profiles = Vec::new();
    let mut current = Vec::with_capacity(counts.len());
    let limit = budget.saturating_sub(*spent);
    let complete = collect_profiles(counts, m, m - 1, limit, &mut current, &mut profiles);
    let inner = Groups::from_counts(counts.iter().copied()).work_estimate(m, Some(m - 1));
    *spent = spent.saturating_add((profiles.len() as u128).saturating_mul(inner.max(1)));
    if !complete || *spent > budget {
        return Err(OracleError::BudgetExceeded {
            work: *spent,
            budget,
        });
    }
    let mut acc = BigRational::zero();
    for profile in profiles {
        let mut ways = BigUint::one();
        let mut depleted = counts.to_vec();
        for (slot, &j) in depleted.iter_mut().zip(&profile) {
            ways *= numeric::binomial(slot.1, j);
            slot.1 -= j;
        }
        let rest = blocks(&depleted, m, r - 1, budget, spent)?;
        acc += numeric::rational_from_biguint(ways) * rest;
    }
    Ok(acc / numeric::rational_from_biguint(denom))
}

/// Multiplicity vectors drawing `items` values summing to `target`; stops
/// with `false` once the search visits more than `limit` nodes.
fn collect_profiles(
    counts: &[(u64, u64)],
    items: u64,
    target: u64,
    limit: u128,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> bool {
    let mut visits = 0u128;
    search(counts, items, target, limit, &mut visits, current, out)
}

fn search(
    counts: &[(u64, u64)],
    items: u64,
    target: u64,
    limit: u128,
    visits: &mut u128,
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> bool {
    *visits += 1;
    if *visits > limit {
        return false;
    }
    let k = current.len();
    if k == counts.len() {
        if items == 0 && target == 0 {
            out.push(current.clone());
        }
        return true;
    }
    let (v, c) = counts[k];
    if k + 1 == counts.len() {
        if items <= c && v * items == target {
            current.push(items);
            out.push(current.clone());
            current.pop();
        }
        return true;
    }
    for j in 0..=c.min(items) {
        if v * j > target {
            break;
        }
        current.push(j);
        let ok = search(counts, items - j, target - v * j, limit, visits, current, out);
        current.pop();
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::swor_sum_probability;

    fn stat(s: &str) -> DegreeStatistic {
        s.parse().unwrap()
    }

    #[test]
    fn single_block_reduces_to_swor() {
        let bn = stat("0:5,1:2,2:2,3:1");
        let d: Vec<i64> = bn.multiset().into_iter().map(|x| x as i64).collect();
        for m in 1..=bn.size() {
            let joint = joint_block_probability(&bn, m, 1, u128::MAX).unwrap();
            let direct = swor_sum_probability(&d, m, m as i64 - 1, u128::MAX).unwrap();
            assert_eq!(joint.rational().unwrap(), &direct);
        }
    }

    #[test]
    fn two_leaf_blocks() {
        let bn = stat("0:5,1:2,2:2,3:1");
        let p = joint_block_probability(&bn, 1, 2, u128::MAX).unwrap();
        assert_eq!(p.rational().unwrap(), &numeric::rational_from_u64(5 * 4, 10 * 9));
    }

    #[test]
    fn impossible_window() {
        let p = joint_block_probability(&stat("0:2,2:1"), 2, 1, u128::MAX).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn caps() {
        assert!(matches!(
            joint_block_probability(&stat("0:5,1:2,2:2,3:1"), 1, 4, u128::MAX),
            Err(OracleError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            joint_block_probability(&stat("0:2,2:1"), 2, 2, u128::MAX),
            Err(OracleError::CountOutOfRange { .. })
        ));
    }
}
