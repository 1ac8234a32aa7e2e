//! Exact expectations and factorial moments of fringe counts in a uniform
//! tree with a given degree statistic, Galton–Watson tree probabilities and
//! the relations between tree counts and statistic counts.
//!
//! Values come back as [`ExactScalar`]s. Under [`Arithmetic::Auto`] the
//! rational companion is computed when `|bn| <= 10^4` and `q|T| <= 10^3`;
//! larger inputs are evaluated in log space only.

mod formulas;
mod scalar;

pub use formulas::{
    degree_moments, expected_count_size, expected_count_size_with, expected_count_tree,
    expected_count_tree_upper, expected_count_tree_with, factorial_moment_size,
    factorial_moment_statistic, factorial_moment_statistic_with, factorial_moment_tree,
    factorial_moment_tree_with, pi_p_statistic, pi_p_tree, size_moment_budget,
    variance_from_factorial, variance_relation_statistic, DegreeMoments, VarianceRelation,
};
pub use scalar::{ExactScalar, Mode, SignedScalar};

use alloc::string::String;
use thiserror::Error;

use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("target has {target} vertices but the host statistic only {host}")]
    TargetTooLarge { target: u64, host: u64 },
    #[error("moment order must be at least 1")]
    InvalidOrder,
    #[error("size {m} with {r} blocks does not fit in {host} vertices")]
    SizeOutOfRange { m: u64, r: u64, host: u64 },
    #[error("catastrophic cancellation: exact arithmetic required")]
    PrecisionLoss,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Choice between exact rational and log-space evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    #[default]
    Auto,
    Rational,
    Log,
}

impl Arithmetic {
    pub const RATIONAL_MAX_HOST: u64 = 10_000;
    pub const RATIONAL_MAX_WORK: u64 = 1_000;

    /// Whether a formula over a host of `host_size` vertices with `q|T| = work`
    /// is evaluated exactly.
    pub fn rational_for(self, host_size: u64, work: u64) -> bool {
        match self {
            Arithmetic::Rational => true,
            Arithmetic::Log => false,
            Arithmetic::Auto => {
                host_size <= Self::RATIONAL_MAX_HOST && work <= Self::RATIONAL_MAX_WORK
            }
        }
    }
}

/// Which identity produced a [`MomentReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Formula {
    /// Factorial moment of a tree count.
    TreeFactorialMoment,
    /// Factorial moment of a statistic count, as a power of the class size
    /// times the tree moment.
    StatisticFactorialMoment,
    /// Expected number of fringes of a given size via one window sum.
    SizeExpectation,
    /// Factorial moment of a size count via `r` disjoint windows.
    SizeFactorialMoment,
}

/// A factorial moment together with the inputs it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub order: u64,
    pub value: ExactScalar,
    /// Canonical text of the host statistic.
    pub host: String,
    /// Canonical text of the target (tree, statistic or `size=m`).
    pub target: String,
    pub formula: Formula,
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Flat {
        order: u64,
        value: f64,
        value_rational: Option<String>,
        value_log: Option<f64>,
        host: String,
        target: String,
        formula: Formula,
    }

    impl Serialize for MomentReport {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let ln = self.value.ln();
            Flat {
                order: self.order,
                value: self.value.to_f64(),
                value_rational: self.value.rational_string(),
                value_log: ln.is_finite().then_some(ln),
                host: self.host.clone(),
                target: self.target.clone(),
                formula: self.formula,
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for MomentReport {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let flat = Flat::deserialize(d)?;
            let value = match flat.value_rational {
                Some(text) => {
                    let r: num_rational::BigRational =
                        text.parse().map_err(serde::de::Error::custom)?;
                    ExactScalar::from_rational(r)
                }
                None => ExactScalar::from_ln(flat.value_log.unwrap_or(f64::NEG_INFINITY)),
            };
            Ok(MomentReport {
                order: flat.order,
                value,
                host: flat.host,
                target: flat.target,
                formula: flat.formula,
            })
        }
    }
}
