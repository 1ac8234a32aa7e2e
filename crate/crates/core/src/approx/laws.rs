use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::ApproxError;
use crate::numeric::CompensatedSum;

/// Target mass covered before the tail of an infinite-support law is folded
/// into a distance.
pub const TAIL_MASS: f64 = 1e-12;

/// `e^{-lambda} lambda^k / k!`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    assert!(lambda >= 0.0, "Poisson mean must be nonnegative");
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    libm::exp(kf * libm::log(lambda) - lambda - libm::lgamma(kf + 1.0))
}

/// Density and distribution function of `N(mu, sigma^2)` at `x`.
pub fn normal_density_cdf(mu: f64, sigma: f64, x: f64) -> Result<(f64, f64), ApproxError> {
    if !(sigma > 0.0) {
        return Err(ApproxError::NonpositiveSigma);
    }
    let z = (x - mu) / sigma;
    let pdf = libm::exp(-0.5 * z * z) / (sigma * libm::sqrt(2.0 * core::f64::consts::PI));
    Ok((pdf, standard_normal_cdf(z)))
}

pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / core::f64::consts::SQRT_2)
}

/// Integer-valued sample counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    counts: BTreeMap<i64, u64>,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: i64) {
        *self.counts.entry(k).or_insert(0) += 1;
    }

    pub fn add_many(&mut self, k: i64, times: u64) {
        if times > 0 {
            *self.counts.entry(k).or_insert(0) += times;
        }
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&k, &c) in &other.counts {
            self.add_many(k, c);
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, k: i64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn mean(&self) -> f64 {
        let n = self.total() as f64;
        self.iter()
            .map(|(k, c)| k as f64 * c as f64)
            .collect::<CompensatedSum>()
            .value()
            / n
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let n = self.total() as f64;
        if n < 2.0 {
            return 0.0;
        }
        let mean = self.mean();
        self.iter()
            .map(|(k, c)| {
                let dev = k as f64 - mean;
                dev * dev * c as f64
            })
            .collect::<CompensatedSum>()
            .value()
            / (n - 1.0)
    }

    /// Empirical law as `(k, frequency)` pairs.
    pub fn frequencies(&self) -> Vec<(i64, f64)> {
        let n = self.total() as f64;
        self.iter().map(|(k, c)| (k, c as f64 / n)).collect()
    }
}

impl FromIterator<i64> for Histogram {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for k in iter {
            h.add(k);
        }
        h
    }
}

/// `k:count;k:count`, ascending.
impl fmt::Display for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{k}:{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Histogram {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut h = Histogram::new();
        for item in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, c) = item
                .split_once(':')
                .ok_or_else(|| format!("expected k:count, got {item:?}"))?;
            let k = k.trim().parse::<i64>().map_err(|e| format!("{k:?}: {e}"))?;
            let c = c.trim().parse::<u64>().map_err(|e| format!("{c:?}: {e}"))?;
            h.add_many(k, c);
        }
        Ok(h)
    }
}

/// Total variation distance between an empirical histogram and a law on the
/// nonnegative integers. The target is summed until its mass reaches
/// `1 - TAIL_MASS` (and past the largest observation); the remaining tail
/// is added as unmatched mass.
pub fn tv_distance<F: Fn(u64) -> f64>(empirical: &Histogram, target: F) -> Result<f64, ApproxError> {
    let n = empirical.total();
    if n == 0 {
        return Err(ApproxError::EmptyHistogram);
    }
    let n = n as f64;
    let mut l1 = CompensatedSum::new();
    // empirical mass on negative integers has no target mass
    for (_, c) in empirical.iter().filter(|&(k, _)| k < 0) {
        l1.add(c as f64 / n);
    }
    let max_obs = empirical.iter().map(|(k, _)| k).max().unwrap_or(0).max(0) as u64;
    let mut covered = CompensatedSum::new();
    let mut k = 0u64;
    loop {
        let p = target(k);
        covered.add(p);
        let e = empirical.count(k as i64) as f64 / n;
        l1.add((e - p).abs());
        if k >= max_obs && covered.value() >= 1.0 - TAIL_MASS {
            break;
        }
        k += 1;
        if k > max_obs + 100_000_000 {
            break;
        }
    }
    let tail = (1.0 - covered.value()).max(0.0);
    l1.add(tail);
    Ok((0.5 * l1.value()).clamp(0.0, 1.0))
}

/// Total variation distance between two finitely supported laws.
pub fn tv_distance_pmfs(a: &[(i64, f64)], b: &[(i64, f64)]) -> f64 {
    let mut diff: BTreeMap<i64, f64> = BTreeMap::new();
    for &(k, p) in a {
        *diff.entry(k).or_insert(0.0) += p;
    }
    for &(k, p) in b {
        *diff.entry(k).or_insert(0.0) -= p;
    }
    0.5 * diff.values().map(|d| d.abs()).collect::<CompensatedSum>().value()
}

/// Kolmogorov–Smirnov statistic of a sample against a continuous cdf.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic p-value of the one-sample KS statistic `d` for `n`
/// observations, with the Stephens finite-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = libm::sqrt(n as f64);
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    kolmogorov_survival(lambda)
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = libm::exp(-2.0 * jf * jf * lambda * lambda);
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_examples() {
        assert!((poisson_pmf(2.5, 0) - libm::exp(-2.5)).abs() < 1e-15);
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert_eq!(poisson_pmf(0.0, 3), 0.0);
        assert!((poisson_pmf(1.0, 1) - 0.367_879_441_171_442_3).abs() < 1e-14);
    }

    #[test]
    fn normal_examples() {
        let (pdf, cdf) = normal_density_cdf(3.0, 2.0, 3.0).unwrap();
        assert!((pdf - 1.0 / (2.0 * libm::sqrt(2.0 * core::f64::consts::PI))).abs() < 1e-15);
        assert!((cdf - 0.5).abs() < 1e-15);
        let (_, hi) = normal_density_cdf(1.0, 0.7, 1.9).unwrap();
        let (_, lo) = normal_density_cdf(1.0, 0.7, 0.1).unwrap();
        assert!((hi + lo - 1.0).abs() < 1e-15);
        let (_, c) = normal_density_cdf(0.0, 1.0, 1.96).unwrap();
        assert!((c - 0.975_002_104_851_780).abs() < 1e-12);
        assert_eq!(normal_density_cdf(0.0, 0.0, 1.0), Err(ApproxError::NonpositiveSigma));
    }

    #[test]
    fn tv_examples() {
        let point = |k: u64| if k == 0 { 1.0 } else { 0.0 };
        let h: Histogram = [0, 0, 0].into_iter().collect();
        assert_eq!(tv_distance(&h, point).unwrap(), 0.0);
        let h: Histogram = [3, 4].into_iter().collect();
        assert!((tv_distance(&h, point).unwrap() - 1.0).abs() < 1e-15);
        let h: Histogram = [0, 1].into_iter().collect();
        assert!((tv_distance(&h, point).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(tv_distance(&Histogram::new(), point), Err(ApproxError::EmptyHistogram));
    }

    #[test]
    fn tv_against_poisson_tail() {
        let h: Histogram = [0].into_iter().collect();
        let d = tv_distance(&h, |k| poisson_pmf(1.0, k)).unwrap();
        assert!((d - (1.0 - libm::exp(-1.0))).abs() < 1e-11);
    }

    #[test]
    fn histogram_text() {
        let h: Histogram = [2, 0, 2, 5].into_iter().collect();
        assert_eq!(h.to_string(), "0:1;2:2;5:1");
        assert_eq!(h.to_string().parse::<Histogram>().unwrap(), h);
        assert_eq!(h.mean(), 2.25);
    }

    #[test]
    fn ks_of_perfect_grid() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.0005).abs() < 1e-12);
        assert!(ks_p_value(d, 1000) > 0.999);
        assert!(ks_p_value(0.1, 1000) < 1e-6);
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
    }
}
