use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::TreeError;

/// Ordered list of out-degrees, indexed cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u64>) -> Self {
        Self { degrees }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.degrees
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Entry at cyclic index `l mod n`.
    pub fn at(&self, l: usize) -> u64 {
        self.degrees[l % self.degrees.len()]
    }

    pub fn sum(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).sum()
    }

    /// Membership in `B_n`: the entries sum to `n - 1`.
    pub fn is_bridge(&self) -> bool {
        !self.degrees.is_empty() && self.sum() + 1 == self.degrees.len() as u128
    }

    /// Membership in `D_n`: a bridge whose proper prefix sums satisfy
    /// `d_1 + ... + d_k >= k`.
    pub fn is_valid_tree_encoding(&self) -> bool {
        is_valid_encoding(&self.degrees)
    }

    /// The cyclic shift starting at index `start`.
    pub fn rotated(&self, start: usize) -> Self {
        let mut v = self.degrees.clone();
        if !v.is_empty() {
            let len = v.len();
            v.rotate_left(start % len);
        }
        Self::new(v)
    }

    /// The unique cyclic shift of a bridge that lies in `D_n`.
    pub fn cycle_rotate(&self) -> Result<Self, TreeError> {
        let start = rotation_start(&self.degrees)?;
        let out = self.rotated(start);
        assert!(
            out.is_valid_tree_encoding(),
            "cycle lemma rotation produced an invalid encoding"
        );
        Ok(out)
    }

    /// Number of cyclic shifts lying in `D_n` (brute force, quadratic).
    pub fn valid_rotation_count(&self) -> usize {
        (0..self.len())
            .filter(|&s| self.rotated(s).is_valid_tree_encoding())
            .count()
    }
}

pub(crate) fn is_valid_encoding(d: &[u64]) -> bool {
    if d.is_empty() {
        return false;
    }
    let n = d.len();
    // running value of sum_{i<=k} (d_i - 1)
    let mut excess: i128 = 0;
    for (k, &deg) in d.iter().enumerate() {
        excess += deg as i128 - 1;
        if k + 1 < n && excess < 0 {
            return false;
        }
    }
    excess == -1
}

/// Start index of the valid rotation: one past the first minimum of the
/// partial sums of `d_i - 1`.
pub(crate) fn rotation_start(d: &[u64]) -> Result<usize, TreeError> {
    let n = d.len();
    let sum: u128 = d.iter().map(|&x| x as u128).sum();
    if n == 0 || sum + 1 != n as u128 {
        return Err(TreeError::NotABridge {
            len: n,
            sum: sum as u64,
            expected: (n as u64).saturating_sub(1),
        });
    }
    let mut excess: i128 = 0;
    let mut best = i128::MAX;
    let mut arg = 0usize;
    for (k, &deg) in d.iter().enumerate() {
        excess += deg as i128 - 1;
        if excess < best {
            best = excess;
            arg = k;
        }
    }
    Ok((arg + 1) % n)
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DegreeSequence {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let degrees = s
            .split(',')
            .map(str::trim)
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|e| TreeError::Parse(format!("degree {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(degrees))
    }
}

impl From<Vec<u64>> for DegreeSequence {
    fn from(v: Vec<u64>) -> Self {
        Self::new(v)
    }
}

impl From<DegreeSequence> for String {
    fn from(s: DegreeSequence) -> String {
        s.to_string()
    }
}
