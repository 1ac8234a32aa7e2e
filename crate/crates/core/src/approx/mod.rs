//! Limit laws, distances and the closed-form predictions and bounds for
//! fringe counts: Stein quantities, the Cai–Devroye bound, size asymptotics,
//! the local limit approximation for sums drawn without replacement and a
//! regime classifier for sequence families.

mod asymptotics;
mod bounds;
mod laws;
mod regime;

pub use asymptotics::{
    lindeberg_diagnostic, llt_prediction, size_expectation_asymptotic, spread_of, ts_lambda,
    LltPrediction, SizeAsymptotic,
};
pub use bounds::{cai_devroye_bound, statistic_tv_bound, stein_delta, CaiDevroye, TVBoundReport};
pub use laws::{
    kolmogorov_survival, ks_p_value, ks_statistic, normal_density_cdf, poisson_pmf,
    standard_normal_cdf, tv_distance, tv_distance_pmfs, Histogram, TAIL_MASS,
};
pub use regime::{
    classify_regime, LimitLaw, Regime, RegimeFlag, RegimePrediction, RegimeScenario, RegimeTarget,
    CONDITION_THRESHOLD, NORMAL_THRESHOLD, VANISHING_LAMBDA,
};

use thiserror::Error;

use crate::exactstats::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("standard deviation must be positive")]
    NonpositiveSigma,
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("need 0 < m < n")]
    DegenerateRange,
    #[error("inputs must be positive")]
    NonpositiveInput,
    #[error("all values are equal")]
    DegenerateSpread,
    #[error("scenario has no grid points or mixes target kinds")]
    UnderspecifiedScenario,
    #[error(transparent)]
    Exact(#[from] ExactError),
}
