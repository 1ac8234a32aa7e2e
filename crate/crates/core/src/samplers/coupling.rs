use alloc::vec;
use alloc::vec::Vec;

use super::{sample_uniform_bridge, shuffle, Chooser, SamplerError};
use crate::treecore::{DegreeSequence, DegreeStatistic, PlaneTree};

/// A uniform bridge together with a perturbed copy whose window at `anchor`
/// spells the target tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupledPair {
    pub base: DegreeSequence,
    pub coupled: DegreeSequence,
    /// 0-based start of the window, read cyclically.
    pub anchor: usize,
    /// Positions in `base` of the degrees moved into the window, sorted.
    pub marked: Vec<usize>,
}

/// Whether the cyclic window of `d` starting at `k` equals `target`.
pub fn window_matches(d: &[u64], k: usize, target: &[u64]) -> bool {
    let n = d.len();
    target.len() <= n && target.iter().enumerate().all(|(i, &t)| d[(k + i) % n] == t)
}

/// Builds a uniform `base` in `B_bn` and the coupled sequence whose law is
/// that of `base` conditioned on the window at `anchor` equalling the
/// degree sequence of `t`:
///
/// 1. mark, for each degree `i`, `n_T(i)` uniformly chosen entries of value `i`;
/// 2. move the window contents to storage;
/// 3. write the marked degrees into the window in the order of `t`;
/// 4. return the unmarked stored degrees, uniformly shuffled, to the
///    positions vacated by marked entries outside the window.
///
/// Equal marked values are assigned to window slots in order of their
/// original index; every such assignment gives the same sequence.
pub fn stein_coupled_pair<C: Chooser + ?Sized>(
    bn: &DegreeStatistic,
    t: &PlaneTree,
    anchor: usize,
    chooser: &mut C,
) -> Result<CoupledPair, SamplerError> {
    let n = bn.size() as usize;
    if anchor >= n {
        return Err(SamplerError::AnchorOutOfRange { anchor, len: n });
    }
    if !bn.dominates(t.statistic()) {
        return Err(SamplerError::InfeasibleTarget);
    }
    let base = sample_uniform_bridge(bn, chooser);
    let (coupled, marked) = couple(&base, t, anchor, chooser);
    Ok(CoupledPair {
        base: DegreeSequence::new(base),
        coupled: DegreeSequence::new(coupled),
        anchor,
        marked,
    })
}

fn couple<C: Chooser + ?Sized>(
    base: &[u64],
    t: &PlaneTree,
    anchor: usize,
    chooser: &mut C,
) -> (Vec<u64>, Vec<usize>) {
    let n = base.len();
    let size = t.degrees().len();
    let in_window = |pos: usize| (pos + n - anchor) % n < size;

    // step 1
    let mut marked = Vec::with_capacity(size);
    for (value, need) in t.statistic().iter() {
        let mut slots: Vec<usize> = (0..n).filter(|&p| base[p] == value).collect();
        for i in 0..need as usize {
            let j = i + chooser.below((slots.len() - i) as u64) as usize;
            slots.swap(i, j);
        }
        marked.extend_from_slice(&slots[..need as usize]);
    }
    marked.sort_unstable();

    let mut is_marked = vec![false; n];
    for &p in &marked {
        is_marked[p] = true;
    }

    // step 2: unmarked window contents go back later
    let mut storage: Vec<u64> = (0..size)
        .map(|i| (anchor + i) % n)
        .filter(|&p| !is_marked[p])
        .map(|p| base[p])
        .collect();

    // step 3
    let mut coupled = base.to_vec();
    for (i, &deg) in t.degrees().iter().enumerate() {
        coupled[(anchor + i) % n] = deg;
    }

    // step 4
    let vacated: Vec<usize> = marked.iter().copied().filter(|&p| !in_window(p)).collect();
    debug_assert_eq!(vacated.len(), storage.len());
    shuffle(&mut storage, chooser);
    for (&p, &deg) in vacated.iter().zip(&storage) {
        coupled[p] = deg;
    }
    (coupled, marked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{ExhaustiveChooser, RandomStream};

    fn stat(s: &str) -> DegreeStatistic {
        s.parse().unwrap()
    }

    #[test]
    fn cherry_on_three_vertices() {
        let mut ex = ExhaustiveChooser::new();
        loop {
            let pair = stein_coupled_pair(&stat("0:2,2:1"), &PlaneTree::cherry(), 0, &mut ex).unwrap();
            assert_eq!(pair.coupled.as_slice(), &[2, 0, 0]);
            if !ex.advance() {
                break;
            }
        }
    }

    #[test]
    fn leaf_moves_one_zero() {
        let bn = stat("0:5,1:2,2:2,3:1");
        let mut rng = RandomStream::new(4, 0);
        for k in 0..10 {
            let pair = stein_coupled_pair(&bn, &PlaneTree::leaf(), k, &mut rng).unwrap();
            assert_eq!(pair.coupled.as_slice()[k], 0);
            let diff = (0..10)
                .filter(|&p| pair.base.as_slice()[p] != pair.coupled.as_slice()[p])
                .count();
            assert!(diff == 0 || diff == 2);
        }
    }

    #[test]
    fn structural_invariants() {
        let bn = stat("0:6,1:2,2:3,3:1");
        let t: PlaneTree = "2,1,0,0".parse().unwrap();
        let mut rng = RandomStream::new(8, 2);
        for trial in 0..200 {
            let k = trial % 12;
            let pair = stein_coupled_pair(&bn, &t, k, &mut rng).unwrap();
            let (b, c) = (pair.base.as_slice(), pair.coupled.as_slice());
            assert!(window_matches(c, k, t.degrees()));
            assert!(pair.coupled.is_bridge());
            assert_eq!(DegreeStatistic::of_degrees(c).unwrap(), bn);
            for p in 0..12 {
                let touched = (p + 12 - k) % 12 < 4 || pair.marked.contains(&p);
                if !touched {
                    assert_eq!(b[p], c[p]);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let mut rng = RandomStream::new(0, 0);
        assert_eq!(
            stein_coupled_pair(&stat("0:2,2:1"), &PlaneTree::path(2), 0, &mut rng),
            Err(SamplerError::InfeasibleTarget)
        );
        assert_eq!(
            stein_coupled_pair(&stat("0:2,2:1"), &PlaneTree::leaf(), 3, &mut rng),
            Err(SamplerError::AnchorOutOfRange { anchor: 3, len: 3 })
        );
    }
}
