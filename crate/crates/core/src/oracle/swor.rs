//! Laws of sums drawn without replacement.
//!
//! Both versions run a dynamic programme over the distinct values of the
//! multiset. The state is (items drawn so far, partial sum); the group with
//! the largest multiplicity is handled last, in closed form: it takes all
//! remaining draws.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactPmf, OracleError};
use crate::numeric::{self, LnFactorials};

/// Distinct values (shifted by the minimum) with multiplicities, ascending,
/// plus the shift.
#[derive(Clone, Debug)]
pub(crate) struct Groups {
    pub shift: i64,
    pub groups: Vec<(u64, u64)>,
    pub total: u64,
}

impl Groups {
    pub fn from_values(d: &[i64]) -> Self {
        let shift = d.iter().copied().min().unwrap_or(0);
        let mut map = BTreeMap::new();
        for &x in d {
            *map.entry((x - shift) as u64).or_insert(0u64) += 1;
        }
        Self {
            shift,
            groups: map.into_iter().collect(),
            total: d.len() as u64,
        }
    }

    pub fn from_counts<I: IntoIterator<Item = (u64, u64)>>(counts: I) -> Self {
        let raw: Vec<(u64, u64)> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let shift = raw.iter().map(|&(v, _)| v).min().unwrap_or(0);
        let mut map = BTreeMap::new();
        for (v, c) in raw {
            *map.entry(v - shift).or_insert(0u64) += c;
        }
        let total = map.values().sum();
        Self {
            shift: shift as i64,
            groups: map.into_iter().collect(),
            total,
        }
    }

    /// Index of the group handled in closed form.
    fn last_index(&self) -> usize {
        let mut best = 0;
        for (i, &(_, c)) in self.groups.iter().enumerate() {
            if c >= self.groups[best].1 {
                best = i;
            }
        }
        best
    }

    fn ordered(&self) -> (Vec<(u64, u64)>, (u64, u64)) {
        let last = self.last_index();
        let rest = self
            .groups
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != last)
            .map(|(_, &g)| g)
            .collect();
        (rest, self.groups[last])
    }

    fn max_value(&self) -> u64 {
        self.groups.last().map(|&(v, _)| v).unwrap_or(0)
    }

    /// Rough number of transitions of the DP.
    pub fn work_estimate(&self, m: u64, cap: Option<u64>) -> u128 {
        let width = cap.unwrap_or(m.saturating_mul(self.max_value())) as u128 + 1;
        let groups = self.groups.len().saturating_sub(1) as u128;
        groups * (m as u128 + 1) * width * (m.min(self.groups.iter().map(|g| g.1).max().unwrap_or(0)) as u128 + 1)
    }
}

/// Exact law of the sum of `m` draws without replacement from `d`.
///
/// `budget` bounds [`Groups::work_estimate`].
pub fn swor_sum_pmf(d: &[i64], m: u64, budget: u128) -> Result<ExactPmf, OracleError> {
    let groups = Groups::from_values(d);
    swor_exact(&groups, m, None, budget)
}

/// Exact `P(S_m = k)`.
pub fn swor_sum_probability(d: &[i64], m: u64, k: i64, budget: u128) -> Result<BigRational, OracleError> {
    let groups = Groups::from_values(d);
    swor_point_exact(&groups, m, k, budget)
}

pub(crate) fn swor_point_exact(
    groups: &Groups,
    m: u64,
    k: i64,
    budget: u128,
) -> Result<BigRational, OracleError> {
    let shifted = k - groups.shift * m as i64;
    if shifted < 0 || m > groups.total {
        if m > groups.total {
            return Err(OracleError::CountOutOfRange { m, len: groups.total });
        }
        return Ok(BigRational::zero());
    }
    let pmf = swor_exact(groups, m, Some(shifted as u64), budget)?;
    Ok(pmf.prob(k))
}

pub(crate) fn swor_exact(
    groups: &Groups,
    m: u64,
    cap: Option<u64>,
    budget: u128,
) -> Result<ExactPmf, OracleError> {
    if m > groups.total {
        return Err(OracleError::CountOutOfRange { m, len: groups.total });
    }
    let work = groups.work_estimate(m, cap);
    if work > budget {
        return Err(OracleError::BudgetExceeded { work, budget });
    }
    let (rest, (v_last, c_last)) = groups.ordered();
    let mu = m as usize;
    // rows[j] maps shifted partial sum -> number of ways
    let mut rows: Vec<BTreeMap<u64, BigUint>> = vec![BTreeMap::new(); mu + 1];
    rows[0].insert(0, BigUint::one());
    for &(v, c) in &rest {
        let binoms: Vec<BigUint> = (0..=c.min(m)).map(|t| numeric::binomial(c, t)).collect();
        let mut next: Vec<BTreeMap<u64, BigUint>> = vec![BTreeMap::new(); mu + 1];
        for (j, row) in rows.iter().enumerate() {
            for (&s, w) in row {
                for (t, b) in binoms.iter().enumerate() {
                    if j + t > mu {
                        break;
                    }
                    let s2 = s + v * t as u64;
                    if cap.is_some_and(|cap| s2 > cap) {
                        break;
                    }
                    let slot = next[j + t].entry(s2).or_insert_with(BigUint::zero);
                    *slot += w * b;
                }
            }
        }
        rows = next;
    }
    let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (j, row) in rows.iter().enumerate() {
        let r = m - j as u64;
        if r > c_last {
            continue;
        }
        let b = numeric::binomial(c_last, r);
        for (&s, w) in row {
            let s2 = s + v_last * r;
            if cap.is_some_and(|cap| s2 > cap) {
                continue;
            }
            *out.entry(s2).or_insert_with(BigUint::zero) += w * &b;
        }
    }
    let denom = numeric::rational_from_biguint(numeric::binomial(groups.total, m));
    let base = groups.shift * m as i64;
    Ok(ExactPmf::from_pairs(
        out.into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(s, w)| (s as i64 + base, numeric::rational_from_biguint(w) / &denom)),
    ))
}

/// Floating-point law of `S_m`, restricted to sums not exceeding a cap.
#[derive(Clone, Debug, PartialEq)]
pub struct SumPmf {
    /// Sum represented by `probs[0]`.
    pub base: i64,
    pub probs: Vec<f64>,
}

impl SumPmf {
    pub fn prob(&self, k: i64) -> f64 {
        if k < self.base {
            return 0.0;
        }
        self.probs.get((k - self.base) as usize).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().copied().collect::<numeric::CompensatedSum>().value()
    }
}

/// Law of `S_m` in double precision, for sums up to `max_sum` (all sums when
/// `None`). Memory is `(m + 1) * (width + 1)` doubles.
pub fn swor_sum_pmf_f64(d: &[i64], m: u64, max_sum: Option<i64>) -> Result<SumPmf, OracleError> {
    let groups = Groups::from_values(d);
    swor_float(&groups, m, max_sum)
}

pub(crate) fn swor_float(groups: &Groups, m: u64, max_sum: Option<i64>) -> Result<SumPmf, OracleError> {
    if m > groups.total {
        return Err(OracleError::CountOutOfRange { m, len: groups.total });
    }
    let base = groups.shift * m as i64;
    let full = m * groups.max_value();
    let cap = match max_sum {
        Some(k) if k < base => return Ok(SumPmf { base, probs: Vec::new() }),
        Some(k) => ((k - base) as u64).min(full),
        None => full,
    };
    let width = cap as usize + 1;
    let mu = m as usize;
    let (rest, (v_last, _)) = groups.ordered();
    let lnf = LnFactorials::up_to(groups.total);

    // table[j * width + s] = P(j items drawn from the processed groups with partial sum s)
    let mut table = vec![0.0f64; (mu + 1) * width];
    table[0] = 1.0;
    let mut pool = groups.total;
    let mut hyper: Vec<f64> = Vec::new();
    for &(v, c) in &rest {
        let others = pool - c;
        for j in (0..=mu).rev() {
            let row = j * width;
            if table[row..row + width].iter().all(|&x| x == 0.0) {
                continue;
            }
            let r = m - j as u64;
            // conditional law of how many of the r remaining draws fall in this group
            let t_lo = r.saturating_sub(others);
            let t_hi = r.min(c);
            hyper.clear();
            let ln_den = lnf.ln_binomial(pool, r);
            for t in 0..=t_hi {
                hyper.push(if t < t_lo {
                    0.0
                } else {
                    libm::exp(lnf.ln_binomial(c, t) + lnf.ln_binomial(others, r - t) - ln_den)
                });
            }
            let step = v as usize;
            for s in (0..width).rev() {
                let w = table[row + s];
                if w == 0.0 {
                    continue;
                }
                table[row + s] = w * hyper[0];
                for (t, &h) in hyper.iter().enumerate().skip(1) {
                    let s2 = s + step * t;
                    if s2 >= width {
                        break;
                    }
                    if h != 0.0 {
                        table[(j + t) * width + s2] += w * h;
                    }
                }
            }
        }
        pool -= c;
    }
    let mut probs = vec![0.0f64; width];
    for j in 0..=mu {
        let r = (m - j as u64) as usize;
        let shift = v_last as usize * r;
        for s in 0..width {
            let w = table[j * width + s];
            if w != 0.0 && s + shift < width {
                probs[s + shift] += w;
            }
        }
    }
    Ok(SumPmf { base, probs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: u64, q: u64) -> BigRational {
        numeric::rational_from_u64(p, q)
    }

    #[test]
    fn small_examples() {
        let pmf = swor_sum_pmf(&[0, 0, 2], 2, u128::MAX).unwrap();
        assert_eq!(pmf.prob(0), rat(1, 3));
        assert_eq!(pmf.prob(2), rat(2, 3));
        let zero = swor_sum_pmf(&[3, 1, 4], 0, u128::MAX).unwrap();
        assert_eq!(zero.prob(0), rat(1, 1));
        let all = swor_sum_pmf(&[3, 1, 4], 3, u128::MAX).unwrap();
        assert_eq!(all.prob(8), rat(1, 1));
        assert!(matches!(
            swor_sum_pmf(&[1], 2, u128::MAX),
            Err(OracleError::CountOutOfRange { m: 2, len: 1 })
        ));
    }

    #[test]
    fn negative_values_shift() {
        let pmf = swor_sum_pmf(&[-1, 0, 1], 2, u128::MAX).unwrap();
        assert_eq!(pmf.prob(-1), rat(1, 3));
        assert_eq!(pmf.prob(0), rat(1, 3));
        assert_eq!(pmf.prob(1), rat(1, 3));
    }

    #[test]
    fn float_matches_exact() {
        let d: Vec<i64> = [0, 0, 0, 0, 1, 1, 2, 3, 3, 5].to_vec();
        for m in 0..=d.len() as u64 {
            let exact = swor_sum_pmf(&d, m, u128::MAX).unwrap();
            let float = swor_sum_pmf_f64(&d, m, None).unwrap();
            for k in -2..25 {
                let e = numeric::rational_to_f64(&exact.prob(k));
                assert!((e - float.prob(k)).abs() < 1e-13, "m={m} k={k}");
            }
            let capped = swor_sum_pmf_f64(&d, m, Some(4)).unwrap();
            for k in 0..=4 {
                assert!((capped.prob(k) - float.prob(k)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn point_probability() {
        let d = [0, 0, 2];
        assert_eq!(swor_sum_probability(&d, 2, 1, u128::MAX).unwrap(), BigRational::zero());
        assert_eq!(swor_sum_probability(&d, 2, 2, u128::MAX).unwrap(), rat(2, 3));
    }

    #[test]
    fn budget_enforced() {
        let d: Vec<i64> = (0..100).collect();
        assert!(matches!(
            swor_sum_pmf(&d, 50, 10),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }
}
