use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;

use super::{DegreeDistribution, TreeError};
use crate::numeric::{self, LnFactorials};

/// Multiset of out-degrees satisfying `sum n(i) = 1 + sum i n(i)`.
///
/// Only positive multiplicities are stored, keyed by ascending degree, so
/// equality and hashing are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeStatistic {
    counts: BTreeMap<u64, u64>,
    size: u64,
}

impl DegreeStatistic {
    /// Validates a degree → multiplicity map. Repeated degrees are summed and
    /// zero multiplicities dropped.
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(counts: I) -> Result<Self, TreeError> {
        let mut map = BTreeMap::new();
        for (deg, mult) in counts {
            if mult > 0 {
                *map.entry(deg).or_insert(0u64) += mult;
            }
        }
        Self::from_map(map)
    }

    fn from_map(counts: BTreeMap<u64, u64>) -> Result<Self, TreeError> {
        if counts.is_empty() {
            return Err(TreeError::EmptyInput);
        }
        let vertices: u128 = counts.values().map(|&c| c as u128).sum();
        let edges: u128 = counts.iter().map(|(&d, &c)| d as u128 * c as u128).sum();
        if vertices != edges + 1 {
            return Err(TreeError::IdentityViolation {
                vertices: vertices as u64,
                edges: edges as u64,
            });
        }
        Ok(Self {
            counts,
            size: vertices as u64,
        })
    }

    /// Statistic of a degree list (a tree encoding or any bridge).
    pub fn of_degrees(degrees: &[u64]) -> Result<Self, TreeError> {
        Self::from_map(tally(degrees))
    }

    /// Total number of vertices `|n|`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Multiplicity `n(i)`; zero for absent degrees.
    pub fn count(&self, degree: u64) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// `(degree, multiplicity)` pairs in ascending degree order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    /// The degrees with positive multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().copied()
    }

    pub fn max_degree(&self) -> u64 {
        *self.counts.keys().next_back().expect("statistics are nonempty")
    }

    /// `true` if `other` fits inside `self`, i.e. `other(i) <= self(i)` for all `i`.
    pub fn dominates(&self, other: &DegreeStatistic) -> bool {
        other.iter().all(|(d, c)| c <= self.count(d))
    }

    /// The degree multiset laid out in ascending order (`n(0)` zeros, then
    /// `n(1)` ones, ...).
    pub fn multiset(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.size as usize);
        for (d, c) in self.iter() {
            out.extend(core::iter::repeat(d).take(c as usize));
        }
        out
    }

    /// Empirical degree distribution `p_i = n(i) / |n|`.
    pub fn empirical_distribution(&self) -> DegreeDistribution {
        DegreeDistribution::from_statistic(self)
    }

    /// `p_i(n)` as an exact rational.
    pub fn proportion(&self, degree: u64) -> BigRational {
        numeric::rational_from_u64(self.count(degree), self.size)
    }

    /// Number of plane trees with this statistic, `(|n|-1)! / prod n(i)!`.
    pub fn count_trees(&self) -> BigUint {
        // multinomial(|n|; n(i)) / |n|, built as a product of binomials
        let mut acc = BigUint::from(1u32);
        let mut placed = 0u64;
        for (_, c) in self.iter() {
            placed += c;
            acc *= numeric::binomial(placed, c);
        }
        acc / BigUint::from(self.size)
    }

    /// Natural log of [`count_trees`](Self::count_trees) without big integers.
    pub fn ln_count_trees(&self) -> f64 {
        let table = LnFactorials::up_to(self.size);
        let mut v = table.ln_factorial(self.size - 1);
        for (_, c) in self.iter() {
            v -= table.ln_factorial(c);
        }
        v
    }

    /// Statistic of the star with `k` vertices: a root with `k - 1` leaf children.
    pub fn star(k: u64) -> Self {
        assert!(k >= 1);
        if k == 1 {
            return Self::new([(0, 1)]).unwrap();
        }
        Self::new([(0, k - 1), (k - 1, 1)]).unwrap()
    }
}

pub(crate) fn tally(degrees: &[u64]) -> BTreeMap<u64, u64> {
    let mut map = BTreeMap::new();
    for &d in degrees {
        *map.entry(d).or_insert(0u64) += 1;
    }
    map
}

impl fmt::Display for DegreeStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{d}:{c}")?;
        }
        Ok(())
    }
}

impl FromStr for DegreeStatistic {
    type Err = TreeError;

    /// Parses the canonical `deg:count,deg:count` encoding.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (d, c) = item
                .split_once(':')
                .ok_or_else(|| TreeError::Parse(format!("expected deg:count, got {item:?}")))?;
            let d = d
                .trim()
                .parse::<u64>()
                .map_err(|e| TreeError::Parse(format!("degree {d:?}: {e}")))?;
            let c = c
                .trim()
                .parse::<u64>()
                .map_err(|e| TreeError::Parse(format!("count {c:?}: {e}")))?;
            pairs.push((d, c));
        }
        Self::new(pairs)
    }
}

impl From<DegreeStatistic> for String {
    fn from(s: DegreeStatistic) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for DegreeStatistic {
    type Error = TreeError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for DegreeStatistic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for DegreeStatistic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
