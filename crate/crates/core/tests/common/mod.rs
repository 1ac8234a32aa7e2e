#![allow(dead_code)]

use fringe_core::DegreeStatistic;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

/// Every degree statistic on `m` vertices: partitions of `m - 1` edges into
/// parts `i >= 1`, completed by leaves.
pub fn statistics_of_size(m: u64) -> Vec<DegreeStatistic> {
    fn go(rest: u64, max_part: u64, parts: &mut Vec<u64>, m: u64, out: &mut Vec<DegreeStatistic>) {
        if rest == 0 {
            let internal = parts.len() as u64;
            if internal >= m {
                return;
            }
            let mut counts: Vec<(u64, u64)> = vec![(0, m - internal)];
            for &p in parts.iter() {
                match counts.iter_mut().find(|(d, _)| *d == p) {
                    Some(entry) => entry.1 += 1,
                    None => counts.push((p, 1)),
                }
            }
            out.push(DegreeStatistic::new(counts).unwrap());
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            parts.push(p);
            go(rest - p, p, parts, m, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    go(m - 1, m - 1, &mut Vec::new(), m, &mut out);
    out
}

pub fn catalan(k: u64) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn stat(s: &str) -> DegreeStatistic {
    s.parse().unwrap()
}

/// Random valid statistic: counts of degrees `1..=max_degree`, leaves fixed
/// by the vertex/edge identity.
pub fn arb_statistic(max_degree: u64, max_count: u64) -> impl Strategy<Value = DegreeStatistic> {
    proptest::collection::vec(0..=max_count, max_degree as usize).prop_map(|counts| {
        let mut leaves = 1u64;
        let mut pairs = Vec::new();
        for (ix, &c) in counts.iter().enumerate() {
            let deg = ix as u64 + 1;
            leaves += (deg - 1) * c;
            if c > 0 {
                pairs.push((deg, c));
            }
        }
        pairs.push((0, leaves));
        DegreeStatistic::new(pairs).unwrap()
    })
}

/// Random statistic with at most `max_size` vertices.
pub fn arb_small_statistic(max_size: u64) -> impl Strategy<Value = DegreeStatistic> {
    let all: Vec<DegreeStatistic> = (1..=max_size).flat_map(statistics_of_size).collect();
    proptest::sample::select(all)
}
