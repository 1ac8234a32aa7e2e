//! Degree statistics, depth-first degree sequences, plane trees and fringe
//! subtree counters.
//!
//! A plane tree is identified with its depth-first degree sequence, so tree
//! equality is sequence equality. A sequence summing to `n - 1` (a *bridge*)
//! has exactly one cyclic shift that encodes a tree; [`DegreeSequence::cycle_rotate`]
//! finds it in linear time.

mod distribution;
mod fringe;
mod sequence;
mod statistic;
mod tree;

pub use distribution::{span_of, DegreeDistribution, Span};
pub use fringe::{
    fringe_count_size, fringe_count_statistic, fringe_count_tree, fringe_decomposition,
    fringe_sizes, FringeEntry, FringeIndex,
};
pub use sequence::DegreeSequence;
pub use statistic::DegreeStatistic;
pub use tree::PlaneTree;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("empty degree statistic")]
    EmptyInput,
    #[error("degree counts violate the tree identity: {vertices} vertices but 1 + {edges} expected")]
    IdentityViolation { vertices: u64, edges: u64 },
    #[error("sequence sums to {sum}, a bridge of length {len} must sum to {expected}")]
    NotABridge { len: usize, sum: u64, expected: u64 },
    #[error("not a depth-first degree sequence of a plane tree")]
    InvalidEncoding,
    #[error("malformed encoding: {0}")]
    Parse(alloc::string::String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(&'static str),
}
