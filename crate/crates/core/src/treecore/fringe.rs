//! Fringe subtree counters.
//!
//! In a depth-first encoding the fringe subtree of vertex `v` is the window
//! starting at `v` whose length is the fringe size, so one right-to-left
//! stack pass yields every fringe. Fringes of equal size are disjoint, which
//! keeps every counter below linear in the host size.

use alloc::vec::Vec;

use super::statistic::tally;
use super::{DegreeStatistic, PlaneTree};

/// Fringe sizes of a depth-first encoding, in depth-first order.
///
/// The input must be a valid encoding.
pub(crate) fn fringe_sizes_of(d: &[u64]) -> Vec<u64> {
    let mut sizes = alloc::vec![0u64; d.len()];
    let mut stack: Vec<u64> = Vec::new();
    for (v, &deg) in d.iter().enumerate().rev() {
        let mut size = 1u64;
        for _ in 0..deg {
            size += stack.pop().expect("valid encoding");
        }
        sizes[v] = size;
        stack.push(size);
    }
    sizes
}

pub fn fringe_sizes(host: &PlaneTree) -> Vec<u64> {
    fringe_sizes_of(host.degrees())
}

/// Precomputed fringe sizes of a host tree, for repeated queries.
#[derive(Clone, Debug)]
pub struct FringeIndex<'a> {
    degrees: &'a [u64],
    sizes: Vec<u64>,
}

impl<'a> FringeIndex<'a> {
    pub fn new(host: &'a PlaneTree) -> Self {
        Self {
            degrees: host.degrees(),
            sizes: fringe_sizes_of(host.degrees()),
        }
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    fn windows(&self, m: u64) -> impl Iterator<Item = (usize, &'a [u64])> + '_ {
        let d = self.degrees;
        self.sizes
            .iter()
            .enumerate()
            .filter(move |&(_, &s)| s == m)
            .map(move |(v, &s)| (v, &d[v..v + s as usize]))
    }

    /// `N_m`: vertices whose fringe has exactly `m` vertices.
    pub fn count_size(&self, m: u64) -> u64 {
        self.sizes.iter().filter(|&&s| s == m).count() as u64
    }

    /// `N_T`: fringes equal to `target`.
    pub fn count_tree(&self, target: &PlaneTree) -> u64 {
        let t = target.degrees();
        self.windows(t.len() as u64).filter(|(_, w)| *w == t).count() as u64
    }

    /// `N_bm`: fringes whose degree statistic is `bm`.
    pub fn count_statistic(&self, bm: &DegreeStatistic) -> u64 {
        let mut hits = 0;
        for (_, w) in self.windows(bm.size()) {
            let tallied = tally(w);
            if tallied.len() == bm.iter().count()
                && tallied.iter().all(|(&d, &c)| bm.count(d) == c)
            {
                hits += 1;
            }
        }
        hits
    }

    /// Histogram of fringe sizes: entry `m` is `N_m`.
    pub fn size_histogram(&self) -> Vec<u64> {
        let mut h = alloc::vec![0u64; self.degrees.len() + 1];
        for &s in &self.sizes {
            h[s as usize] += 1;
        }
        h
    }
}

pub fn fringe_count_tree(host: &PlaneTree, target: &PlaneTree) -> u64 {
    if target.size() > host.size() {
        return 0;
    }
    FringeIndex::new(host).count_tree(target)
}

pub fn fringe_count_statistic(host: &PlaneTree, bm: &DegreeStatistic) -> u64 {
    if bm.size() > host.size() {
        return 0;
    }
    FringeIndex::new(host).count_statistic(bm)
}

pub fn fringe_count_size(host: &PlaneTree, m: u64) -> u64 {
    FringeIndex::new(host).count_size(m)
}

/// One vertex of a fringe decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FringeEntry {
    pub vertex: usize,
    pub size: u64,
    pub statistic: DegreeStatistic,
}

/// Every vertex with its fringe size and fringe statistic, in depth-first
/// order. Quadratic in the worst case.
pub fn fringe_decomposition(host: &PlaneTree) -> Vec<FringeEntry> {
    let d = host.degrees();
    fringe_sizes_of(d)
        .into_iter()
        .enumerate()
        .map(|(v, size)| FringeEntry {
            vertex: v,
            size,
            statistic: DegreeStatistic::of_degrees(&d[v..v + size as usize])
                .expect("fringe windows are trees"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_examples() {
        let cherry = PlaneTree::cherry();
        assert_eq!(fringe_count_tree(&cherry, &PlaneTree::leaf()), 2);
        assert_eq!(fringe_count_tree(&cherry, &cherry), 1);
        assert_eq!(fringe_count_tree(&PlaneTree::path(5), &PlaneTree::path(2)), 1);
        assert_eq!(fringe_count_tree(&PlaneTree::leaf(), &cherry), 0);

        let leaf_stat: DegreeStatistic = "0:1".parse().unwrap();
        assert_eq!(fringe_count_statistic(&cherry, &leaf_stat), 2);
        let edge: DegreeStatistic = "0:1,1:1".parse().unwrap();
        assert_eq!(fringe_count_statistic(&PlaneTree::path(3), &edge), 1);

        for m in 1..=6 {
            assert_eq!(fringe_count_size(&PlaneTree::path(6), m), 1);
        }
        assert_eq!(fringe_count_size(&cherry, 2), 0);
        assert_eq!(fringe_count_size(&cherry, 1), 2);
    }

    #[test]
    fn decomposition_examples() {
        let single = fringe_decomposition(&PlaneTree::leaf());
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].size, 1);
        assert_eq!(single[0].statistic.to_string(), "0:1");

        let cherry = fringe_decomposition(&PlaneTree::cherry());
        assert_eq!(cherry[0].size, 3);
        assert_eq!(cherry[0].statistic.to_string(), "0:2,2:1");
        assert_eq!(cherry[1].size, 1);
        assert_eq!(cherry[2].size, 1);

        let sizes: Vec<u64> = fringe_decomposition(&PlaneTree::path(3))
            .iter()
            .map(|e| e.size)
            .collect();
        assert_eq!(sizes, [3, 2, 1]);
    }

    #[test]
    fn histogram_matches_counts() {
        let t: PlaneTree = "2,1,0,2,0,0".parse().unwrap();
        let idx = FringeIndex::new(&t);
        let h = idx.size_histogram();
        for m in 1..=6u64 {
            assert_eq!(h[m as usize], idx.count_size(m));
        }
        assert_eq!(h.iter().sum::<u64>(), 6);
    }
}
