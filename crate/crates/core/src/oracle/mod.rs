//! Brute-force ground truth: exhaustive enumeration of `T_bn`, exact laws of
//! fringe counts, and exact laws of sums drawn without replacement.

mod blocks;
mod enumerate;
mod swor;

pub use blocks::{joint_block_probability, MAX_BLOCKS, MAX_DISTINCT_VALUES};
pub use enumerate::{
    enumerate_trees, enumerate_trees_of_size, exact_count_distribution,
    exact_count_distribution_over, Counter, EnumerationResult,
};
pub use swor::{swor_sum_pmf, swor_sum_pmf_f64, swor_sum_probability, SumPmf};
pub(crate) use swor::{swor_float, swor_point_exact, Groups};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numeric;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{count} trees exceed the enumeration limit {limit}")]
    LimitExceeded { count: u128, limit: u128 },
    #[error("dynamic programme needs about {work} steps, budget is {budget}")]
    BudgetExceeded { work: u128, budget: u128 },
    #[error("cannot draw {m} items from {len}")]
    CountOutOfRange { m: u64, len: u64 },
}

/// Exact law on the integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactPmf {
    probs: BTreeMap<i64, BigRational>,
}

impl ExactPmf {
    pub fn from_pairs<I: IntoIterator<Item = (i64, BigRational)>>(pairs: I) -> Self {
        let mut probs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (k, p) in pairs {
            if p.is_zero() {
                continue;
            }
            *probs.entry(k).or_insert_with(BigRational::zero) += p;
        }
        Self { probs }
    }

    pub fn point_mass(k: i64) -> Self {
        Self::from_pairs([(k, BigRational::one())])
    }

    pub fn prob(&self, k: i64) -> BigRational {
        self.probs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.probs.iter().map(|(&k, p)| (k, p))
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().cloned().sum()
    }

    pub fn mean(&self) -> BigRational {
        self.probs
            .iter()
            .map(|(&k, p)| p * BigRational::from_integer(k.into()))
            .sum()
    }

    /// `E (X)_q`.
    pub fn factorial_moment(&self, q: u64) -> BigRational {
        self.probs
            .iter()
            .map(|(&k, p)| {
                let mut ff = BigRational::one();
                for j in 0..q as i64 {
                    ff *= BigRational::from_integer((k - j).into());
                }
                p * ff
            })
            .sum()
    }

    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        self.probs
            .iter()
            .map(|(&k, p)| {
                let dev = BigRational::from_integer(k.into()) - &mean;
                &dev * &dev * p
            })
            .sum()
    }

    /// `(k, probability)` pairs as floats.
    pub fn to_f64(&self) -> Vec<(i64, f64)> {
        self.probs
            .iter()
            .map(|(&k, p)| (k, numeric::rational_to_f64(p)))
            .collect()
    }
}
