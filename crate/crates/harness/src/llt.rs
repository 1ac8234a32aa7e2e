//! Exact window-sum probabilities against the normal local approximation.

use fringe_core::approx::llt_prediction;
use fringe_core::oracle::swor_sum_pmf_f64;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// `sqrt(2 pi sigma_hat^2) P(S_m = k)` next to `exp(-(k - m d_bar)^2 / (2 sigma_hat^2))`
/// for every `k` within `width` standard deviations of the centre.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LltComparison {
    pub m: u64,
    pub mu_hat: f64,
    pub sigma_hat2: f64,
    /// `(k, scaled exact probability, normal profile)`.
    pub rows: Vec<(i64, f64, f64)>,
    pub sup_error: f64,
    pub argmax: i64,
}

pub fn llt_comparison(values: &[i64], m: u64, width: f64) -> Result<LltComparison, HarnessError> {
    let centre = llt_prediction(values, m, 0).map_err(|e| HarnessError::Config(e.to_string()))?;
    let sigma = centre.sigma_hat2.sqrt();
    let lo = (centre.mu_hat - width * sigma).ceil() as i64;
    let hi = (centre.mu_hat + width * sigma).floor() as i64;
    let pmf = swor_sum_pmf_f64(values, m, None)?;
    let scale = (2.0 * std::f64::consts::PI * centre.sigma_hat2).sqrt();
    let mut rows = Vec::with_capacity((hi - lo + 1).max(0) as usize);
    let (mut sup_error, mut argmax) = (0.0f64, lo);
    for k in lo..=hi {
        let exact = scale * pmf.prob(k);
        let z = k as f64 - centre.mu_hat;
        let normal = (-z * z / (2.0 * centre.sigma_hat2)).exp();
        let err = (exact - normal).abs();
        if err > sup_error {
            sup_error = err;
            argmax = k;
        }
        rows.push((k, exact, normal));
    }
    Ok(LltComparison {
        m,
        mu_hat: centre.mu_hat,
        sigma_hat2: centre.sigma_hat2,
        rows,
        sup_error,
        argmax,
    })
}
