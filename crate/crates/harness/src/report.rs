//! Experiment reports and their JSON and CSV forms.

use std::io::Write;

use fringe_core::approx::{Regime, RegimeFlag};
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::diagnostics::ConditionRow;
use crate::HarnessError;

/// Column order of the CSV form, one row per (grid point, target).
pub const CSV_HEADER: &str = "scenario,point,kappa,size,target,replicates,histogram,empirical_mean,\
empirical_variance,exact_mean,exact_variance,predicted_lambda,normal_mean,normal_sd,tv_poisson,\
tv_poisson_exact_mean,ks_normal,ks_p_value,delta,luc4,rny2,lindeberg,llt_sup_error,size_asymptotic,\
sup_delta,degree_variance,span,limit_span,master_seed,point_seed,flags";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub scenario: String,
    pub config: ScenarioConfig,
    /// Rounding used by size rules.
    pub rounding: String,
    pub notes: Vec<String>,
    pub points: Vec<PointReport>,
    pub conditions: Vec<ConditionRow>,
    pub regimes: Vec<TargetRegime>,
}

/// Where the randomness of a grid point came from: replicate `r` used
/// stream `r` of `point_seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProvenance {
    pub master_seed: u64,
    pub point_seed: u64,
    pub streams: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub index: usize,
    pub kappa: u64,
    pub size: u64,
    /// Host statistic, absent for Galton–Watson hosts.
    pub host: Option<String>,
    pub seed: SeedProvenance,
    pub replicates: u64,
    /// Total rejection attempts over all Galton–Watson replicates.
    pub gw_attempts: Option<u64>,
    pub targets: Vec<TargetReport>,
    /// Wall time; present only when timing was requested.
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub label: String,
    /// `(value, count)` pairs by increasing value; counts sum to the replicates.
    pub histogram: Vec<(i64, u64)>,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    pub exact_mean: Option<f64>,
    pub exact_mean_rational: Option<String>,
    pub exact_variance: Option<f64>,
    pub exact_variance_rational: Option<String>,
    pub predicted_lambda: Option<f64>,
    pub normal_mean: Option<f64>,
    pub normal_sd: Option<f64>,
    /// TV distance of the empirical law to `Po(predicted_lambda)`.
    pub tv_poisson: Option<f64>,
    /// TV distance of the empirical law to `Po(exact_mean)`.
    pub tv_poisson_exact_mean: Option<f64>,
    /// KS distance of the standardized counts to the standard normal.
    pub ks_normal: Option<f64>,
    pub ks_p_value: Option<f64>,
    pub delta: Option<f64>,
    pub luc4: Option<f64>,
    /// `|T|^2 pi sum_i p_i(n_T)^2 / p_i(n)` with `pi` taken over the class.
    pub rny2: Option<f64>,
    pub lindeberg: Option<f64>,
    pub llt_sup_error: Option<f64>,
    /// Finite-size expected count of fringes of the target size.
    pub size_asymptotic: Option<f64>,
    pub flags: Vec<String>,
}

/// Regime label of one target along the whole grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetRegime {
    pub target: usize,
    pub regime: Option<Regime>,
    pub flags: Vec<RegimeFlag>,
    pub predicted_lambda: Option<f64>,
    /// Whether the declared expectation matches; absent when nothing was
    /// declared or the regime is an open problem.
    pub expectation_met: Option<bool>,
    pub diagnostics: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold finite numbers only")
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("report: {e}")))
    }

    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut out = Vec::new();
        self.write_csv(&mut out)?;
        Ok(String::from_utf8(out).expect("csv output is utf-8"))
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<(), HarnessError> {
        let io = |e: csv::Error| HarnessError::Io(e.to_string());
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
        w.write_record(CSV_HEADER.split(',')).map_err(io)?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for p in &self.points {
            let cond = self.conditions.get(p.index);
            for t in &p.targets {
                let record = vec![
                    self.scenario.clone(),
                    p.index.to_string(),
                    p.kappa.to_string(),
                    p.size.to_string(),
                    t.label.clone(),
                    p.replicates.to_string(),
                    histogram_text(&t.histogram),
                    t.empirical_mean.to_string(),
                    t.empirical_variance.to_string(),
                    opt(t.exact_mean),
                    opt(t.exact_variance),
                    opt(t.predicted_lambda),
                    opt(t.normal_mean),
                    opt(t.normal_sd),
                    opt(t.tv_poisson),
                    opt(t.tv_poisson_exact_mean),
                    opt(t.ks_normal),
                    opt(t.ks_p_value),
                    opt(t.delta),
                    opt(t.luc4),
                    opt(t.rny2),
                    opt(t.lindeberg),
                    opt(t.llt_sup_error),
                    opt(t.size_asymptotic),
                    opt(cond.map(|c| c.sup_delta)),
                    opt(cond.map(|c| c.variance)),
                    cond.and_then(|c| c.span).map(|s| s.to_string()).unwrap_or_default(),
                    cond.and_then(|c| c.limit_span).map(|s| s.to_string()).unwrap_or_default(),
                    p.seed.master_seed.to_string(),
                    p.seed.point_seed.to_string(),
                    t.flags.join(";"),
                ];
                w.write_record(&record).map_err(io)?;
            }
        }
        w.flush().map_err(|e| HarnessError::Io(e.to_string()))
    }
}

/// `"k:count;k:count"`.
pub fn histogram_text(h: &[(i64, u64)]) -> String {
    h.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(";")
}

/// Writes the report in the chosen format to `sink`.
pub fn emit_report<W: Write>(report: &ExperimentReport, format: Format, mut sink: W) -> Result<(), HarnessError> {
    match format {
        Format::Json => {
            sink.write_all(report.to_json().as_bytes())
                .and_then(|_| sink.write_all(b"\n"))
                .map_err(|e| HarnessError::Io(e.to_string()))
        }
        Format::Csv => report.write_csv(sink),
    }
}
