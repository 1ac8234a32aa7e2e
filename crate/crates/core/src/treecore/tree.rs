use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::fringe::fringe_sizes_of;
use super::sequence::is_valid_encoding;
use super::{DegreeSequence, DegreeStatistic, TreeError};

/// Rooted plane tree stored as its depth-first degree sequence.
#[derive(Clone, Debug)]
pub struct PlaneTree {
    dfs: DegreeSequence,
    statistic: DegreeStatistic,
}

impl PartialEq for PlaneTree {
    fn eq(&self, other: &Self) -> bool {
        self.dfs == other.dfs
    }
}

impl Eq for PlaneTree {}

impl core::hash::Hash for PlaneTree {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.dfs.hash(state);
    }
}

impl PartialOrd for PlaneTree {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PlaneTree {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.dfs.cmp(&other.dfs)
    }
}

impl PlaneTree {
    /// Decodes a depth-first degree sequence.
    pub fn from_degree_sequence(d: DegreeSequence) -> Result<Self, TreeError> {
        if !d.is_valid_tree_encoding() {
            return Err(TreeError::InvalidEncoding);
        }
        let statistic = DegreeStatistic::of_degrees(d.as_slice())
            .expect("valid encodings satisfy the tree identity");
        Ok(Self { dfs: d, statistic })
    }

    pub fn from_degrees(degrees: Vec<u64>) -> Result<Self, TreeError> {
        Self::from_degree_sequence(DegreeSequence::new(degrees))
    }

    /// Cycle-rotates a bridge and decodes the result.
    pub fn from_bridge(bridge: &[u64]) -> Result<Self, TreeError> {
        let start = super::sequence::rotation_start(bridge)?;
        let mut v = bridge.to_vec();
        v.rotate_left(start);
        debug_assert!(is_valid_encoding(&v));
        Self::from_degrees(v)
    }

    pub fn degree_sequence(&self) -> &DegreeSequence {
        &self.dfs
    }

    pub fn degrees(&self) -> &[u64] {
        self.dfs.as_slice()
    }

    pub fn statistic(&self) -> &DegreeStatistic {
        &self.statistic
    }

    /// Number of vertices `|T|`.
    pub fn size(&self) -> u64 {
        self.dfs.len() as u64
    }

    /// The single-vertex tree.
    pub fn leaf() -> Self {
        Self::from_degrees(vec![0]).unwrap()
    }

    /// Path with `k` vertices.
    pub fn path(k: u64) -> Self {
        assert!(k >= 1);
        let mut v = vec![1u64; k as usize];
        v[k as usize - 1] = 0;
        Self::from_degrees(v).unwrap()
    }

    /// Root with `k - 1` leaf children.
    pub fn star(k: u64) -> Self {
        assert!(k >= 1);
        let mut v = vec![0u64; k as usize];
        v[0] = k - 1;
        Self::from_degrees(v).unwrap()
    }

    /// Root with two leaf children.
    pub fn cherry() -> Self {
        Self::star(3)
    }

    /// A fixed representative of `T_bm`: the degrees in descending order.
    pub fn canonical(bm: &DegreeStatistic) -> Self {
        let mut v = bm.multiset();
        v.reverse();
        Self::from_degrees(v).expect("descending order is always a valid encoding")
    }

    /// Children of every vertex, indexed in depth-first order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let parents = self.parents();
        let mut out = vec![Vec::new(); parents.len()];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = p {
                out[*p].push(v);
            }
        }
        out
    }

    /// Parent of every vertex, indexed in depth-first order; `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let d = self.degrees();
        let mut parents = vec![None; d.len()];
        // stack of (vertex, children still to attach)
        let mut stack: Vec<(usize, u64)> = Vec::new();
        for (v, &deg) in d.iter().enumerate() {
            if let Some(top) = stack.last_mut() {
                parents[v] = Some(top.0);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if deg > 0 {
                stack.push((v, deg));
            }
        }
        parents
    }

    /// Sizes of all fringe subtrees, in depth-first order.
    pub fn fringe_sizes(&self) -> Vec<u64> {
        fringe_sizes_of(self.degrees())
    }

    /// The fringe subtree rooted at depth-first index `v`.
    pub fn fringe_at(&self, v: usize) -> PlaneTree {
        let size = self.fringe_sizes()[v] as usize;
        Self::from_degrees(self.degrees()[v..v + size].to_vec())
            .expect("fringe windows are valid encodings")
    }

    /// Replaces the fringe at `v` (of size `size`) by `replacement`.
    pub(crate) fn splice(&self, v: usize, size: usize, replacement: &PlaneTree) -> PlaneTree {
        let d = self.degrees();
        let mut out = Vec::with_capacity(d.len() - size + replacement.degrees().len());
        out.extend_from_slice(&d[..v]);
        out.extend_from_slice(replacement.degrees());
        out.extend_from_slice(&d[v + size..]);
        Self::from_degrees(out).expect("splicing a tree into a fringe slot keeps validity")
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.dfs.fmt(f)
    }
}

impl FromStr for PlaneTree {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_degree_sequence(s.parse()?)
    }
}

impl From<PlaneTree> for DegreeSequence {
    fn from(t: PlaneTree) -> Self {
        t.dfs
    }
}

impl From<PlaneTree> for String {
    fn from(t: PlaneTree) -> String {
        t.dfs.into()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PlaneTree {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for PlaneTree {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
