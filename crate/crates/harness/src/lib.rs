//! Monte Carlo experiments on fringe subtree counts: scenario files, a
//! seeded parallel runner, condition diagnostics and JSON/CSV reports.
//!
//! ```
//! use fringe_harness::{run_scenario, suite, RunOptions};
//!
//! let mut config = suite::single_tree_class();
//! config.replicates = 20;
//! let report = run_scenario(&config, &RunOptions::default()).unwrap();
//! assert_eq!(report.points[0].targets[0].histogram, vec![(1, 20)]);
//! ```

use fringe_core::exactstats::ExactError;
use fringe_core::oracle::OracleError;
use fringe_core::samplers::SamplerError;
use thiserror::Error;

pub mod config;
pub mod diagnostics;
pub mod llt;
pub mod report;
pub mod runner;
pub mod suite;

pub use config::{DegreeLaw, Family, ScenarioConfig, SizeRule, TargetSpec, SCHEMA_VERSION};
pub use diagnostics::{condition_diagnostics, ConditionRow};
pub use llt::{llt_comparison, LltComparison};
pub use report::{emit_report, ExperimentReport, Format, PointReport, TargetReport, CSV_HEADER};
pub use runner::{run_scenario, RunOptions};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("sampler error: {0}")]
    Sampler(SamplerError),
}

impl HarnessError {
    /// Process exit code: 2 configuration, 3 budget, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Budget(_) => 3,
            HarnessError::Io(_) => 4,
            HarnessError::Sampler(SamplerError::AttemptsExhausted { .. }) => 3,
            HarnessError::Sampler(_) => 2,
        }
    }
}

impl From<SamplerError> for HarnessError {
    fn from(e: SamplerError) -> Self {
        HarnessError::Sampler(e)
    }
}

impl From<OracleError> for HarnessError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::LimitExceeded { .. } | OracleError::BudgetExceeded { .. } => HarnessError::Budget(e.to_string()),
            OracleError::CountOutOfRange { .. } => HarnessError::Config(e.to_string()),
        }
    }
}

impl From<ExactError> for HarnessError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Oracle(o) => o.into(),
            other => HarnessError::Config(other.to_string()),
        }
    }
}
