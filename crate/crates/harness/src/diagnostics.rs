//! Finite-grid proxies for the convergence conditions on a sequence of
//! degree statistics.

use fringe_core::numeric;
use fringe_core::DegreeStatistic;
use serde::{Deserialize, Serialize};

/// One row of the condition table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub size: u64,
    /// `sup_i |p_i(n_k) - p_i(n_last)|`.
    pub sup_delta: f64,
    /// `sum_i i^2 p_i(n_k)`.
    pub second_moment: f64,
    /// `sum_i (i - 1)^2 p_i(n_k)`, the variance of a uniform vertex degree.
    pub variance: f64,
    /// Span of `p(n_k)`; absent when the support is a single point.
    pub span: Option<u64>,
    /// Span of the degrees with `p_i(n_k) >= |n_k|^{-1/2}`, a proxy for the
    /// span of the limit law once vanishing degrees are dropped.
    pub limit_span: Option<u64>,
    pub max_probability: f64,
    /// `max_i p_i(n_k) <= 1 - delta` with `delta` from the last row.
    pub below_threshold: bool,
}

/// Condition table of a sequence of statistics. The threshold `1 - delta`
/// uses `delta = (1 - max_i p_i(n_last)) / 2`.
pub fn condition_diagnostics(statistics: &[DegreeStatistic]) -> Vec<ConditionRow> {
    let Some(last) = statistics.last() else {
        return Vec::new();
    };
    let last_n = last.size() as f64;
    let last_max = last.iter().map(|(_, c)| c as f64 / last_n).fold(0.0, f64::max);
    let delta = (1.0 - last_max) / 2.0;
    statistics
        .iter()
        .map(|bn| {
            let n = bn.size() as f64;
            let p = |i: u64| bn.count(i) as f64 / n;
            let q = |i: u64| last.count(i) as f64 / last_n;
            let sup_delta = bn.support().chain(last.support()).map(|i| (p(i) - q(i)).abs()).fold(0.0, f64::max);
            let second_moment = bn.iter().map(|(i, c)| (i * i) as f64 * c as f64 / n).sum();
            let variance = bn.iter().map(|(i, c)| (i as f64 - 1.0).powi(2) * c as f64 / n).sum();
            let max_probability = bn.iter().map(|(_, c)| c as f64 / n).fold(0.0, f64::max);
            let span = span_of(bn.support());
            let floor = 1.0 / n.sqrt();
            let limit_span = span_of(bn.support().filter(|&i| p(i) >= floor));
            ConditionRow {
                size: bn.size(),
                sup_delta,
                second_moment,
                variance,
                span,
                limit_span,
                max_probability,
                below_threshold: max_probability <= 1.0 - delta,
            }
        })
        .collect()
}

/// gcd of the differences between support points; absent for one point.
fn span_of(support: impl Iterator<Item = u64>) -> Option<u64> {
    let mut first = None;
    let mut g = 0u64;
    for v in support {
        match first {
            None => first = Some(v),
            Some(f) => g = numeric::gcd(g, v.abs_diff(f)),
        }
    }
    (g > 0).then_some(g)
}
