use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{DegreeStatistic, TreeError};
use crate::numeric::{self, CompensatedSum};

/// Span of an integer law: the gcd of all differences between support points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Span {
    Finite(u64),
    /// The support is a single point.
    Infinite,
}

impl Span {
    pub fn is_nonlattice(self) -> bool {
        self == Span::Finite(1)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Span::Finite(h) => write!(f, "{h}"),
            Span::Infinite => f.write_str("infinite"),
        }
    }
}

/// Probability law on the nonnegative integers with finite support.
///
/// Rational builds (from a degree statistic or from exact fractions) keep the
/// exact pmf alongside the float one.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeDistribution {
    pmf: Vec<(u64, f64)>,
    exact: Option<Vec<(u64, BigRational)>>,
    mean: f64,
    variance: f64,
    span: Span,
}

/// Absolute tolerance on the total mass of float builds.
pub const MASS_TOLERANCE: f64 = 1e-9;

impl DegreeDistribution {
    /// Empirical law `p_i(n) = n(i)/|n|`.
    pub fn from_statistic(bn: &DegreeStatistic) -> Self {
        let size = bn.size();
        let exact = bn
            .iter()
            .map(|(d, c)| (d, numeric::rational_from_u64(c, size)))
            .collect();
        Self::from_exact_unchecked(exact)
    }

    /// Exact law from `(value, numerator, denominator)` triples. Zero masses
    /// are dropped and repeated values merged.
    pub fn from_fractions<I>(items: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = (u64, u64, u64)>,
    {
        let mut pairs: Vec<(u64, BigRational)> = Vec::new();
        for (v, num, den) in items {
            if den == 0 {
                return Err(TreeError::InvalidDistribution("zero denominator"));
            }
            if num == 0 {
                continue;
            }
            pairs.push((v, numeric::rational_from_u64(num, den)));
        }
        Self::from_rationals(pairs)
    }

    pub fn from_rationals(pairs: Vec<(u64, BigRational)>) -> Result<Self, TreeError> {
        let mut merged: alloc::collections::BTreeMap<u64, BigRational> = Default::default();
        for (v, p) in pairs {
            if p.is_negative() {
                return Err(TreeError::InvalidDistribution("negative probability"));
            }
            if p.is_zero() {
                continue;
            }
            let slot = merged.entry(v).or_insert_with(BigRational::zero);
            *slot += p;
        }
        if merged.is_empty() {
            return Err(TreeError::InvalidDistribution("empty support"));
        }
        let total: BigRational = merged.values().cloned().sum();
        if total != BigRational::from_integer(1.into()) {
            return Err(TreeError::InvalidDistribution("masses do not sum to one"));
        }
        Ok(Self::from_exact_unchecked(merged.into_iter().collect()))
    }

    fn from_exact_unchecked(exact: Vec<(u64, BigRational)>) -> Self {
        let pmf: Vec<(u64, f64)> = exact
            .iter()
            .map(|(v, p)| (*v, numeric::rational_to_f64(p)))
            .collect();
        let mut out = Self::from_sorted_f64(pmf);
        out.exact = Some(exact);
        out
    }

    /// Float law; masses must be nonnegative and sum to one within
    /// [`MASS_TOLERANCE`]. They are renormalised to sum to one exactly.
    pub fn from_f64<I: IntoIterator<Item = (u64, f64)>>(items: I) -> Result<Self, TreeError> {
        let mut merged: alloc::collections::BTreeMap<u64, f64> = Default::default();
        for (v, p) in items {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(TreeError::InvalidDistribution("negative or non-finite probability"));
            }
            if p > 0.0 {
                *merged.entry(v).or_insert(0.0) += p;
            }
        }
        if merged.is_empty() {
            return Err(TreeError::InvalidDistribution("empty support"));
        }
        let total: f64 = merged.values().copied().collect::<CompensatedSum>().value();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(TreeError::InvalidDistribution("masses do not sum to one"));
        }
        Ok(Self::from_sorted_f64(
            merged.into_iter().map(|(v, p)| (v, p / total)).collect(),
        ))
    }

    fn from_sorted_f64(pmf: Vec<(u64, f64)>) -> Self {
        let mean = pmf
            .iter()
            .map(|&(v, p)| v as f64 * p)
            .collect::<CompensatedSum>()
            .value();
        let variance = pmf
            .iter()
            .map(|&(v, p)| {
                let dev = v as f64 - mean;
                dev * dev * p
            })
            .collect::<CompensatedSum>()
            .value();
        let span = span_of_support(pmf.iter().map(|&(v, _)| v));
        Self {
            pmf,
            exact: None,
            mean,
            variance,
            span,
        }
    }

    /// `(value, probability)` pairs of the support, ascending.
    pub fn pmf(&self) -> &[(u64, f64)] {
        &self.pmf
    }

    pub fn exact_pmf(&self) -> Option<&[(u64, BigRational)]> {
        self.exact.as_deref()
    }

    pub fn prob(&self, value: u64) -> f64 {
        match self.pmf.binary_search_by_key(&value, |&(v, _)| v) {
            Ok(ix) => self.pmf[ix].1,
            Err(_) => 0.0,
        }
    }

    pub fn exact_prob(&self, value: u64) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        Some(match exact.binary_search_by_key(&value, |(v, _)| *v) {
            Ok(ix) => exact[ix].1.clone(),
            Err(_) => BigRational::zero(),
        })
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.pmf.iter().map(|&(v, _)| v)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population variance `sum p_i (i - mean)^2`.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// `sum i^2 p_i`.
    pub fn second_moment(&self) -> f64 {
        self.pmf
            .iter()
            .map(|&(v, p)| (v as f64) * (v as f64) * p)
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn exact_mean(&self) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        Some(
            exact
                .iter()
                .map(|(v, p)| p * BigRational::from_integer((*v).into()))
                .sum(),
        )
    }

    pub fn exact_variance(&self) -> Option<BigRational> {
        let exact = self.exact.as_ref()?;
        let mean = self.exact_mean()?;
        Some(
            exact
                .iter()
                .map(|(v, p)| {
                    let dev = BigRational::from_integer((*v).into()) - &mean;
                    &dev * &dev * p
                })
                .sum(),
        )
    }

    pub fn span(&self) -> Span {
        self.span
    }

    pub fn max_probability(&self) -> f64 {
        self.pmf.iter().map(|&(_, p)| p).fold(0.0, f64::max)
    }
}

/// Span of the support of `dist`.
pub fn span_of(dist: &DegreeDistribution) -> Span {
    dist.span()
}

pub(crate) fn span_of_support<I: IntoIterator<Item = u64>>(support: I) -> Span {
    let mut iter = support.into_iter();
    let Some(first) = iter.next() else {
        return Span::Infinite;
    };
    let g = iter.fold(0u64, |g, v| numeric::gcd(g, v.abs_diff(first)));
    if g == 0 {
        Span::Infinite
    } else {
        Span::Finite(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empirical_examples() {
        let cherry: DegreeStatistic = "0:2,2:1".parse().unwrap();
        let p = cherry.empirical_distribution();
        assert_eq!(p.exact_prob(0).unwrap(), numeric::rational_from_u64(2, 3));
        assert_eq!(p.exact_prob(2).unwrap(), numeric::rational_from_u64(1, 3));
        assert_eq!(p.exact_mean().unwrap(), numeric::rational_from_u64(2, 3));
        assert_eq!(p.span(), Span::Finite(2));

        let single: DegreeStatistic = "0:1".parse().unwrap();
        let p = single.empirical_distribution();
        assert_eq!(p.span(), Span::Infinite);
        assert_eq!(p.mean(), 0.0);

        let s: DegreeStatistic = "0:3,1:1,3:1".parse().unwrap();
        assert_eq!(
            s.empirical_distribution().exact_mean().unwrap(),
            numeric::rational_from_u64(4, 5)
        );
    }

    #[test]
    fn spans() {
        assert_eq!(span_of_support([0, 2]), Span::Finite(2));
        assert_eq!(span_of_support([0, 2, 3]), Span::Finite(1));
        assert_eq!(span_of_support([1]), Span::Infinite);
        assert_eq!(span_of_support([3, 9, 15]), Span::Finite(6));
    }

    #[test]
    fn moments_of_binary_law() {
        let p = DegreeDistribution::from_fractions([(0, 1, 2), (2, 1, 2)]).unwrap();
        assert_eq!(p.exact_mean().unwrap(), numeric::rational_from_u64(1, 1));
        assert_eq!(p.exact_variance().unwrap(), numeric::rational_from_u64(1, 1));
        let point = DegreeDistribution::from_f64([(1, 1.0)]).unwrap();
        assert_eq!(point.variance(), 0.0);
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(DegreeDistribution::from_f64([(0, 0.5)]).is_err());
        assert!(DegreeDistribution::from_f64([(0, -0.5), (1, 1.5)]).is_err());
        assert!(DegreeDistribution::from_fractions([(0, 1, 3), (1, 1, 3)]).is_err());
    }
}
