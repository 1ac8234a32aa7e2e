use super::ApproxError;
use crate::numeric::CompensatedSum;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Large-`n` expected number of fringes of size `m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeAsymptotic {
    pub value: f64,
    /// `n - m <= sqrt(n)`: the host is not much larger than the fringe.
    pub outside_regime: bool,
}

/// `n / (sqrt(2 pi) sigma (1 - m/n)^{1/2} m^{3/2})`.
pub fn size_expectation_asymptotic(n: u64, m: u64, sigma2: f64) -> Result<SizeAsymptotic, ApproxError> {
    if m < 1 || m >= n {
        return Err(ApproxError::DegenerateRange);
    }
    if !(sigma2 > 0.0) {
        return Err(ApproxError::NonpositiveInput);
    }
    let (nf, mf) = (n as f64, m as f64);
    let value = nf / (libm::sqrt(TWO_PI * sigma2) * libm::sqrt(1.0 - mf / nf) * mf * libm::sqrt(mf));
    Ok(SizeAsymptotic {
        value,
        outside_regime: ((n - m) as f64) <= libm::sqrt(nf),
    })
}

/// `(2 pi sigma^2 a^3)^{-1/2}`.
pub fn ts_lambda(a: f64, sigma2: f64) -> Result<f64, ApproxError> {
    if !(a > 0.0) || !(sigma2 > 0.0) {
        return Err(ApproxError::NonpositiveInput);
    }
    Ok(1.0 / libm::sqrt(TWO_PI * sigma2 * a * a * a))
}

/// Mean `d_bar` and centred sum of squares `Q` of a finite list.
pub fn spread_of(d: &[i64]) -> (f64, f64) {
    let n = d.len() as f64;
    let mean = d.iter().map(|&x| x as f64).collect::<CompensatedSum>().value() / n;
    let q = d
        .iter()
        .map(|&x| {
            let dev = x as f64 - mean;
            dev * dev
        })
        .collect::<CompensatedSum>()
        .value();
    (mean, q)
}

/// Normal local approximation to `P(S_m = k)` for the sum of `m` entries of
/// `d` drawn without replacement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LltPrediction {
    pub prob: f64,
    /// `m * d_bar`.
    pub mu_hat: f64,
    /// `(m/n)(1 - m/n) Q`.
    pub sigma_hat2: f64,
}

pub fn llt_prediction(d: &[i64], m: u64, k: i64) -> Result<LltPrediction, ApproxError> {
    let n = d.len() as u64;
    if m == 0 || m >= n {
        return Err(ApproxError::DegenerateRange);
    }
    let (mean, q) = spread_of(d);
    if !(q > 0.0) {
        return Err(ApproxError::DegenerateSpread);
    }
    let frac = m as f64 / n as f64;
    let sigma_hat2 = frac * (1.0 - frac) * q;
    let mu_hat = m as f64 * mean;
    let z = k as f64 - mu_hat;
    Ok(LltPrediction {
        prob: libm::exp(-z * z / (2.0 * sigma_hat2)) / libm::sqrt(TWO_PI * sigma_hat2),
        mu_hat,
        sigma_hat2,
    })
}

/// `(1/Q) sum_{|d_i - d_bar| > eps sigma_hat} (d_i - d_bar)^2`.
pub fn lindeberg_diagnostic(d: &[i64], m: u64, eps: f64) -> Result<f64, ApproxError> {
    let n = d.len() as u64;
    if m == 0 || m >= n {
        return Err(ApproxError::DegenerateRange);
    }
    if !(eps > 0.0) {
        return Err(ApproxError::NonpositiveInput);
    }
    let (mean, q) = spread_of(d);
    if !(q > 0.0) {
        return Err(ApproxError::DegenerateSpread);
    }
    let frac = m as f64 / n as f64;
    let cut = eps * libm::sqrt(frac * (1.0 - frac) * q);
    let tail = d
        .iter()
        .map(|&x| x as f64 - mean)
        .filter(|dev| dev.abs() > cut)
        .map(|dev| dev * dev)
        .collect::<CompensatedSum>()
        .value();
    Ok(tail / q)
}
