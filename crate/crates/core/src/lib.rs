//! Fringe subtree statistics for uniformly random plane trees with a given
//! degree statistic.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`treecore`]: degree statistics, depth-first degree sequences, the cycle
//!   lemma rotation, plane trees and linear-time fringe counters.
//! * [`exactstats`]: exact expectations and factorial moments of fringe counts,
//!   Galton–Watson tree probabilities and the variance identities relating
//!   tree counts and statistic counts.
//! * [`oracle`]: brute-force ground truth (tree enumeration, exact count laws,
//!   exact laws of sums drawn without replacement).
//! * [`approx`]: limit laws, distances, Stein/Cai–Devroye style bounds and
//!   asymptotic predictions.
//! * [`samplers`]: reproducible random streams, uniform trees, conditioned
//!   Galton–Watson trees, the Stein coupling and the exchangeable pair.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod approx;
pub mod exactstats;
pub mod numeric;
pub mod oracle;
pub mod samplers;
pub mod treecore;

pub use exactstats::{ExactScalar, MomentReport, SignedScalar};
pub use treecore::{DegreeDistribution, DegreeSequence, DegreeStatistic, PlaneTree, Span};
