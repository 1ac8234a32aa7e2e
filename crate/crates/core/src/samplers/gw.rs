use alloc::vec::Vec;

use rand::RngCore;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Binomial, Distribution};

use super::{shuffle, Chooser, SamplerError};
use crate::numeric::CompensatedSum;
use crate::treecore::{DegreeDistribution, PlaneTree, Span, TreeError};

/// Offspring laws with at most this many support points draw the degree
/// counts of an attempt as one multinomial vector.
const MULTINOMIAL_SUPPORT: usize = 64;

/// Galton–Watson tree with offspring law `p` conditioned on `n` vertices.
///
/// Each attempt draws `n` i.i.d. offspring numbers and is accepted when they
/// sum to `n - 1`; the accepted sequence is cycle-rotated into a tree.
/// Small supports draw the multiplicities of the attempt as a multinomial
/// vector and lay them out in uniform order only after acceptance.
pub struct GwSampler {
    n: u64,
    values: Vec<u64>,
    method: Method,
}

enum Method {
    /// Values by decreasing probability with `p_i / sum_{j >= i} p_j`.
    Multinomial(Vec<f64>),
    Alias(WeightedAliasIndex<f64>),
}

impl GwSampler {
    pub fn new(p: &DegreeDistribution, n: u64) -> Result<Self, SamplerError> {
        let span = p.span();
        let compatible = n >= 1
            && p.prob(0) > 0.0
            && match span {
                Span::Infinite => n == 1,
                Span::Finite(h) => (n - 1) % h == 0,
            };
        if !compatible {
            return Err(SamplerError::IncompatibleSize { n, span });
        }
        let mut pairs: Vec<(u64, f64)> = p.pmf().to_vec();
        let method = if pairs.len() <= MULTINOMIAL_SUPPORT {
            pairs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let mut tail = CompensatedSum::new();
            let mut cond = alloc::vec![0.0; pairs.len()];
            for (ix, &(_, q)) in pairs.iter().enumerate().rev() {
                tail.add(q);
                cond[ix] = (q / tail.value()).min(1.0);
            }
            Method::Multinomial(cond)
        } else {
            let weights = pairs.iter().map(|&(_, q)| q).collect();
            Method::Alias(
                WeightedAliasIndex::new(weights)
                    .map_err(|_| TreeError::InvalidDistribution("alias table"))?,
            )
        };
        Ok(Self {
            n,
            values: pairs.into_iter().map(|(v, _)| v).collect(),
            method,
        })
    }

    pub fn size(&self) -> u64 {
        self.n
    }

    /// One conditioned tree, giving up after `max_attempts` rejections.
    pub fn sample<R: RngCore + Chooser>(&self, rng: &mut R, max_attempts: u64) -> Result<PlaneTree, SamplerError> {
        self.sample_counted(rng, max_attempts).map(|(t, _)| t)
    }

    /// Like [`sample`](Self::sample), also returning the number of attempts.
    pub fn sample_counted<R: RngCore + Chooser>(
        &self,
        rng: &mut R,
        max_attempts: u64,
    ) -> Result<(PlaneTree, u64), SamplerError> {
        if self.n == 1 {
            return Ok((PlaneTree::leaf(), 1));
        }
        let target = self.n - 1;
        let mut buf = Vec::with_capacity(self.n as usize);
        for attempt in 1..=max_attempts {
            let accepted = match &self.method {
                Method::Multinomial(cond) => self.attempt_multinomial(cond, rng, target, &mut buf),
                Method::Alias(alias) => self.attempt_alias(alias, rng, target, &mut buf),
            };
            if accepted {
                return Ok((PlaneTree::from_bridge(&buf)?, attempt));
            }
        }
        Err(SamplerError::AttemptsExhausted { attempts: max_attempts })
    }

    fn attempt_multinomial<R: RngCore + Chooser>(
        &self,
        cond: &[f64],
        rng: &mut R,
        target: u64,
        buf: &mut Vec<u64>,
    ) -> bool {
        let mut remaining = self.n;
        let mut sum = 0u64;
        let mut counts = [0u64; MULTINOMIAL_SUPPORT];
        for (ix, &c) in cond.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            let k = if ix + 1 == cond.len() || c >= 1.0 {
                remaining
            } else {
                Binomial::new(remaining, c).expect("probability in [0, 1]").sample(rng)
            };
            counts[ix] = k;
            remaining -= k;
            sum = sum.saturating_add(self.values[ix].saturating_mul(k));
            if sum > target {
                return false;
            }
        }
        if sum != target {
            return false;
        }
        buf.clear();
        for (ix, &k) in counts.iter().enumerate().take(cond.len()) {
            buf.extend(core::iter::repeat(self.values[ix]).take(k as usize));
        }
        shuffle(buf, rng);
        true
    }

    fn attempt_alias<R: RngCore + Chooser>(
        &self,
        alias: &WeightedAliasIndex<f64>,
        rng: &mut R,
        target: u64,
        buf: &mut Vec<u64>,
    ) -> bool {
        buf.clear();
        let mut sum = 0u64;
        for _ in 0..self.n {
            let v = self.values[alias.sample(rng)];
            sum += v;
            if sum > target {
                return false;
            }
            buf.push(v);
        }
        sum == target
    }
}

/// One-shot conditioned Galton–Watson sample.
pub fn sample_conditioned_gw<R: RngCore + Chooser>(
    p: &DegreeDistribution,
    n: u64,
    rng: &mut R,
    max_attempts: u64,
) -> Result<PlaneTree, SamplerError> {
    GwSampler::new(p, n)?.sample(rng, max_attempts)
}

/// Offspring law with `p_i` proportional to `i^{-alpha-1}` for
/// `1 <= i <= truncation`, scaled to mean one, and the rest of the mass at 0.
pub fn power_tail_offspring(alpha: f64, truncation: u64) -> Result<DegreeDistribution, TreeError> {
    if !(alpha > 0.0) || truncation < 2 {
        return Err(TreeError::InvalidDistribution("power tail needs alpha > 0 and truncation >= 2"));
    }
    let weights: Vec<f64> = (1..=truncation)
        .map(|i| libm::pow(i as f64, -alpha - 1.0))
        .collect();
    let first: f64 = weights
        .iter()
        .enumerate()
        .map(|(k, w)| (k + 1) as f64 * w)
        .collect::<CompensatedSum>()
        .value();
    let scale = 1.0 / first;
    let mass: f64 = weights.iter().map(|w| w * scale).collect::<CompensatedSum>().value();
    let mut pmf = Vec::with_capacity(weights.len() + 1);
    pmf.push((0u64, 1.0 - mass));
    pmf.extend(weights.iter().enumerate().map(|(k, w)| (k as u64 + 1, w * scale)));
    DegreeDistribution::from_f64(pmf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RandomStream;

    fn binary() -> DegreeDistribution {
        DegreeDistribution::from_fractions([(0, 1, 2), (2, 1, 2)]).unwrap()
    }

    #[test]
    fn binary_examples() {
        let mut rng = RandomStream::new(11, 0);
        for _ in 0..20 {
            let t = sample_conditioned_gw(&binary(), 3, &mut rng, 1000).unwrap();
            assert_eq!(t, PlaneTree::cherry());
        }
        assert!(matches!(
            sample_conditioned_gw(&binary(), 4, &mut rng, 1000),
            Err(SamplerError::IncompatibleSize { n: 4, span: Span::Finite(2) })
        ));
        assert_eq!(sample_conditioned_gw(&binary(), 1, &mut rng, 1).unwrap(), PlaneTree::leaf());
    }

    #[test]
    fn degenerate_laws() {
        let no_leaves = DegreeDistribution::from_fractions([(1, 1, 2), (2, 1, 2)]).unwrap();
        assert!(GwSampler::new(&no_leaves, 5).is_err());
        let only_leaves = DegreeDistribution::from_fractions([(0, 1, 1)]).unwrap();
        assert!(GwSampler::new(&only_leaves, 1).is_ok());
        assert!(GwSampler::new(&only_leaves, 2).is_err());
    }

    #[test]
    fn attempts_exhausted() {
        let gapped = DegreeDistribution::from_fractions([(0, 1, 2), (3, 1, 4), (5, 1, 4)]).unwrap();
        let mut rng = RandomStream::new(5, 0);
        assert_eq!(
            sample_conditioned_gw(&gapped, 2, &mut rng, 50),
            Err(SamplerError::AttemptsExhausted { attempts: 50 })
        );
    }

    #[test]
    fn alias_route_produces_trees() {
        let p = power_tail_offspring(1.5, 200).unwrap();
        assert!((p.mean() - 1.0).abs() < 1e-12);
        let sampler = GwSampler::new(&p, 301).unwrap();
        let mut rng = RandomStream::new(9, 1);
        for _ in 0..5 {
            let t = sampler.sample(&mut rng, 1_000_000).unwrap();
            assert_eq!(t.size(), 301);
        }
    }
}
