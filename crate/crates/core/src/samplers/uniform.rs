use alloc::vec::Vec;

use super::{shuffle, Chooser, SamplerError};
use crate::treecore::{DegreeStatistic, PlaneTree};

/// Uniform arrangement of the degree multiset of `bn`: a uniform element of
/// `B_bn`.
pub fn sample_uniform_bridge<C: Chooser + ?Sized>(bn: &DegreeStatistic, chooser: &mut C) -> Vec<u64> {
    let mut d = bn.multiset();
    shuffle(&mut d, chooser);
    d
}

/// Uniform element of `T_bn`: shuffle the degrees and rotate the bridge.
pub fn sample_uniform_tree<C: Chooser + ?Sized>(bn: &DegreeStatistic, chooser: &mut C) -> PlaneTree {
    let d = sample_uniform_bridge(bn, chooser);
    PlaneTree::from_bridge(&d).expect("a shuffled statistic is a bridge")
}

/// Sum of `m` entries of `d` drawn without replacement.
pub fn sample_swor_sum<C: Chooser + ?Sized>(d: &[i64], m: u64, chooser: &mut C) -> Result<i64, SamplerError> {
    let len = d.len() as u64;
    if m > len {
        return Err(SamplerError::CountOutOfRange { m, len });
    }
    let mut pool = d.to_vec();
    let mut sum = 0i64;
    for i in 0..m as usize {
        let j = i + chooser.below(len - i as u64) as usize;
        pool.swap(i, j);
        sum += pool[i];
    }
    Ok(sum)
}

/// One move of the exchangeable pair: pick a uniform vertex and, if its
/// fringe has statistic `target`, replace that fringe by a fresh uniform tree
/// with the same statistic.
pub fn exchangeable_pair_step<C: Chooser + ?Sized>(
    host: &PlaneTree,
    target: &DegreeStatistic,
    chooser: &mut C,
) -> PlaneTree {
    let v = chooser.below(host.size()) as usize;
    let size = fringe_size_at(host.degrees(), v);
    if size as u64 != target.size() {
        return host.clone();
    }
    let window = &host.degrees()[v..v + size];
    if DegreeStatistic::of_degrees(window).ok().as_ref() != Some(target) {
        return host.clone();
    }
    let fresh = sample_uniform_tree(target, chooser);
    host.splice(v, size, &fresh)
}

/// Length of the fringe window starting at `v`, scanning forward.
fn fringe_size_at(d: &[u64], v: usize) -> usize {
    let mut need = 1i64;
    let mut len = 0;
    while need > 0 {
        need += d[v + len] as i64 - 1;
        len += 1;
    }
    len
}
