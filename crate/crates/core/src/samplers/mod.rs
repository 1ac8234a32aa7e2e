//! Random constructions on plane trees and degree sequences.
//!
//! All samplers take an explicit [`Chooser`]; a [`RandomStream`] for Monte
//! Carlo work, or an [`ExhaustiveChooser`] to obtain exact laws on small
//! instances.

mod coupling;
mod gw;
mod stream;
mod uniform;

pub use coupling::{stein_coupled_pair, window_matches, CoupledPair};
pub use gw::{power_tail_offspring, sample_conditioned_gw, GwSampler};
pub use stream::{shuffle, Chooser, ExhaustiveChooser, RandomStream};
pub use uniform::{exchangeable_pair_step, sample_swor_sum, sample_uniform_bridge, sample_uniform_tree};

use thiserror::Error;

use crate::treecore::{Span, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("no tree with {n} vertices has positive probability (span {span})")]
    IncompatibleSize { n: u64, span: Span },
    #[error("no acceptance after {attempts} attempts")]
    AttemptsExhausted { attempts: u64 },
    #[error("cannot draw {m} items from {len}")]
    CountOutOfRange { m: u64, len: u64 },
    #[error("target needs more vertices of some degree than the host provides")]
    InfeasibleTarget,
    #[error("anchor {anchor} outside 0..{len}")]
    AnchorOutOfRange { anchor: usize, len: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}
