use alloc::format;
use alloc::string::ToString;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Arithmetic, ExactError, ExactScalar, Formula, MomentReport, SignedScalar};
use crate::numeric::{self, CompensatedSum};
use crate::oracle::{self, Groups};
use crate::treecore::{DegreeDistribution, DegreeStatistic, PlaneTree};

/// Work budget for the exact window-sum programmes behind the size moments.
pub fn size_moment_budget() -> u128 {
    5_000_000
}

/// `|n| / (|n|)_{q|T|-q+1} * prod_i (n(i))_{q n_T(i)}`, zero whenever a falling
/// factorial runs out.
fn tree_moment(bn: &DegreeStatistic, n_t: &DegreeStatistic, q: u64, arith: Arithmetic) -> ExactScalar {
    let n = bn.size();
    let span = q * n_t.size() - q + 1;
    if span > n || n_t.iter().any(|(i, c)| q * c > bn.count(i)) {
        return ExactScalar::zero();
    }
    if arith.rational_for(n, q * n_t.size()) {
        let mut num = BigUint::from(n);
        for (i, c) in n_t.iter() {
            num *= numeric::falling_factorial(bn.count(i), q * c);
        }
        let den = numeric::falling_factorial(n, span);
        ExactScalar::from_rational(BigRational::new(num.into(), den.into()))
    } else {
        let mut acc = CompensatedSum::new();
        acc.add(libm::log(n as f64));
        for (i, c) in n_t.iter() {
            acc.add(numeric::ln_falling_factorial(bn.count(i), q * c));
        }
        acc.add(-numeric::ln_falling_factorial(n, span));
        ExactScalar::from_ln(acc.value())
    }
}

/// `E N_T` for a uniform tree with statistic `bn`.
pub fn expected_count_tree(bn: &DegreeStatistic, t: &PlaneTree) -> Result<ExactScalar, ExactError> {
    expected_count_tree_with(bn, t, Arithmetic::Auto)
}

pub fn expected_count_tree_with(
    bn: &DegreeStatistic,
    t: &PlaneTree,
    arith: Arithmetic,
) -> Result<ExactScalar, ExactError> {
    if t.size() > bn.size() {
        return Err(ExactError::TargetTooLarge {
            target: t.size(),
            host: bn.size(),
        });
    }
    Ok(tree_moment(bn, t.statistic(), 1, arith))
}

/// The upper bound `|n|^{|T|+1} / (|n|)_{|T|} * pi_{p(n)}(T)` on `E N_T`.
pub fn expected_count_tree_upper(bn: &DegreeStatistic, t: &PlaneTree) -> Result<ExactScalar, ExactError> {
    let n = bn.size();
    let k = t.size();
    if k > n {
        return Err(ExactError::TargetTooLarge { target: k, host: n });
    }
    let pi = pi_p_tree(&bn.empirical_distribution(), t);
    if pi.is_zero() {
        return Ok(ExactScalar::zero());
    }
    let factor = if Arithmetic::Auto.rational_for(n, k) {
        ExactScalar::from_rational(BigRational::new(
            BigUint::from(n).pow((k + 1) as u32).into(),
            numeric::falling_factorial(n, k).into(),
        ))
    } else {
        ExactScalar::from_ln((k + 1) as f64 * libm::log(n as f64) - numeric::ln_falling_factorial(n, k))
    };
    Ok(factor.mul(&pi))
}

/// `E (N_T)_q`.
pub fn factorial_moment_tree(bn: &DegreeStatistic, t: &PlaneTree, q: u64) -> Result<MomentReport, ExactError> {
    factorial_moment_tree_with(bn, t, q, Arithmetic::Auto)
}

pub fn factorial_moment_tree_with(
    bn: &DegreeStatistic,
    t: &PlaneTree,
    q: u64,
    arith: Arithmetic,
) -> Result<MomentReport, ExactError> {
    if q == 0 {
        return Err(ExactError::InvalidOrder);
    }
    Ok(MomentReport {
        order: q,
        value: tree_moment(bn, t.statistic(), q, arith),
        host: bn.to_string(),
        target: format!("tree={t}"),
        formula: Formula::TreeFactorialMoment,
    })
}

/// `E (N_bm)_q = |T_bm|^q E (N_T)_q` for any `T` with statistic `bm`.
pub fn factorial_moment_statistic(
    bn: &DegreeStatistic,
    bm: &DegreeStatistic,
    q: u64,
) -> Result<MomentReport, ExactError> {
    factorial_moment_statistic_with(bn, bm, q, Arithmetic::Auto)
}

pub fn factorial_moment_statistic_with(
    bn: &DegreeStatistic,
    bm: &DegreeStatistic,
    q: u64,
    arith: Arithmetic,
) -> Result<MomentReport, ExactError> {
    if q == 0 {
        return Err(ExactError::InvalidOrder);
    }
    let tree = tree_moment(bn, bm, q, arith);
    let value = if tree.is_zero() {
        ExactScalar::zero()
    } else if tree.is_exact() {
        tree.scale(&num_traits::pow(bm.count_trees(), q as usize))
    } else {
        ExactScalar::from_ln(tree.ln() + q as f64 * bm.ln_count_trees())
    };
    Ok(MomentReport {
        order: q,
        value,
        host: bn.to_string(),
        target: format!("statistic={bm}"),
        formula: Formula::StatisticFactorialMoment,
    })
}

/// `E N_m = (|n|/m) P(S_m = m - 1)` where `S_m` sums `m` degrees drawn
/// without replacement.
pub fn expected_count_size(bn: &DegreeStatistic, m: u64) -> Result<ExactScalar, ExactError> {
    expected_count_size_with(bn, m, Arithmetic::Auto)
}

/// Under `Auto` the window probability is exact when the programme fits in
/// [`size_moment_budget`], and double precision otherwise.
pub fn expected_count_size_with(
    bn: &DegreeStatistic,
    m: u64,
    arith: Arithmetic,
) -> Result<ExactScalar, ExactError> {
    let n = bn.size();
    if m == 0 || m > n {
        return Err(ExactError::SizeOutOfRange { m, r: 1, host: n });
    }
    let groups = Groups::from_counts(bn.iter());
    let exact = match arith {
        Arithmetic::Rational => true,
        Arithmetic::Log => false,
        Arithmetic::Auto => {
            n <= Arithmetic::RATIONAL_MAX_HOST
                && groups.work_estimate(m, Some(m - 1)) <= size_moment_budget()
        }
    };
    if exact {
        let p = oracle::swor_point_exact(&groups, m, m as i64 - 1, u128::MAX)?;
        Ok(ExactScalar::from_rational(p * numeric::rational_from_u64(n, m)))
    } else {
        let pmf = oracle::swor_float(&groups, m, Some(m as i64 - 1))?;
        let p = pmf.prob(m as i64 - 1);
        Ok(ExactScalar::from_f64(p * n as f64 / m as f64))
    }
}

/// `E (N_m)_r = |n| (|n| - rm + r - 1)_{r-1} / m^r * P(r disjoint windows each
/// sum to m - 1)`.
pub fn factorial_moment_size(bn: &DegreeStatistic, m: u64, r: u64) -> Result<MomentReport, ExactError> {
    if r == 0 {
        return Err(ExactError::InvalidOrder);
    }
    let n = bn.size();
    if m == 0 || r.saturating_mul(m) > n {
        return Err(ExactError::SizeOutOfRange { m, r, host: n });
    }
    let (value, formula) = if r == 1 {
        (expected_count_size(bn, m)?, Formula::SizeExpectation)
    } else {
        let joint = oracle::joint_block_probability(bn, m, r, size_moment_budget())?;
        let coefficient = BigRational::new(
            (BigUint::from(n) * numeric::falling_factorial(n - r * m + r - 1, r - 1)).into(),
            BigUint::from(m).pow(r as u32).into(),
        );
        (
            joint.mul(&ExactScalar::from_rational(coefficient)),
            Formula::SizeFactorialMoment,
        )
    };
    Ok(MomentReport {
        order: r,
        value,
        host: bn.to_string(),
        target: format!("size={m}"),
        formula,
    })
}

/// `Var N = E(N)_2 + E N - (E N)^2`.
///
/// Exact when both inputs are rational. In log mode the subtraction is
/// refused once the cancellation would leave fewer than about six
/// significant digits.
pub fn variance_from_factorial(m1: &ExactScalar, m2: &ExactScalar) -> Result<SignedScalar, ExactError> {
    if let (Some(a), Some(b)) = (m1.rational(), m2.rational()) {
        return Ok(SignedScalar::from_rational(b + a - a * a));
    }
    let a = m1.to_f64();
    let b = m2.to_f64();
    if !a.is_finite() || !b.is_finite() {
        return Err(ExactError::PrecisionLoss);
    }
    let v = b + a - a * a;
    let scale = b.max(a * a).max(a);
    if scale > 0.0 && v.abs() < scale * 1e-10 {
        return Err(ExactError::PrecisionLoss);
    }
    Ok(SignedScalar::from_f64(v))
}

/// Both sides of the mean and variance identities linking `N_{n_T}` to `N_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceRelation {
    pub class_size: BigUint,
    /// `E N_{n_T}`.
    pub mean_statistic: ExactScalar,
    /// `|T_{n_T}| E N_T`.
    pub mean_via_tree: ExactScalar,
    /// `Var N_{n_T}`.
    pub variance_statistic: SignedScalar,
    /// `|T_{n_T}|^2 (Var N_T - E N_T) + |T_{n_T}| E N_T`.
    pub variance_via_tree: SignedScalar,
}

impl VarianceRelation {
    /// Exact equality of both identities (rational inputs), or agreement to
    /// `1e-9` relative otherwise.
    pub fn holds(&self) -> bool {
        let means = match (self.mean_statistic.rational(), self.mean_via_tree.rational()) {
            (Some(a), Some(b)) => a == b,
            _ => self.mean_statistic.agrees_with(&self.mean_via_tree, 1e-9),
        };
        let vars = match (self.variance_statistic.rational(), self.variance_via_tree.rational()) {
            (Some(a), Some(b)) => a == b,
            _ => {
                let (a, b) = (self.variance_statistic.to_f64(), self.variance_via_tree.to_f64());
                (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
            }
        };
        means && vars
    }
}

/// Evaluates the statistic side from the statistic moments and the tree side
/// from the class size and the tree moments.
pub fn variance_relation_statistic(bn: &DegreeStatistic, t: &PlaneTree) -> Result<VarianceRelation, ExactError> {
    let n_t = t.statistic();
    let s1 = factorial_moment_statistic(bn, n_t, 1)?.value;
    let s2 = factorial_moment_statistic(bn, n_t, 2)?.value;
    let t1 = factorial_moment_tree(bn, t, 1)?.value;
    let t2 = factorial_moment_tree(bn, t, 2)?.value;
    let class_size = n_t.count_trees();
    let variance_statistic = variance_from_factorial(&s1, &s2)?;
    let var_t = variance_from_factorial(&t1, &t2)?;
    let mean_via_tree = t1.scale(&class_size);
    let variance_via_tree = match (var_t.rational(), t1.rational()) {
        (Some(v), Some(e)) => {
            let c = numeric::rational_from_biguint(class_size.clone());
            SignedScalar::from_rational(&c * &c * (v - e) + &c * e)
        }
        _ => {
            let c = numeric::rational_to_f64(&numeric::rational_from_biguint(class_size.clone()));
            let e = t1.to_f64();
            SignedScalar::from_f64(c * c * (var_t.to_f64() - e) + c * e)
        }
    };
    Ok(VarianceRelation {
        class_size,
        mean_statistic: s1,
        mean_via_tree,
        variance_statistic,
        variance_via_tree,
    })
}

/// `pi_p(T) = prod_i p_i^{n_T(i)}`.
pub fn pi_p_tree(p: &DegreeDistribution, t: &PlaneTree) -> ExactScalar {
    pi_of_statistic(p, t.statistic())
}

fn pi_of_statistic(p: &DegreeDistribution, n_t: &DegreeStatistic) -> ExactScalar {
    if p.is_exact() {
        let mut acc = BigRational::one();
        for (i, c) in n_t.iter() {
            let pi = p.exact_prob(i).expect("exact law");
            if pi.is_zero() {
                return ExactScalar::zero();
            }
            acc *= num_traits::pow(pi, c as usize);
        }
        return ExactScalar::from_rational(acc);
    }
    let mut acc = CompensatedSum::new();
    for (i, c) in n_t.iter() {
        let pi = p.prob(i);
        if pi == 0.0 {
            return ExactScalar::zero();
        }
        acc.add(c as f64 * libm::log(pi));
    }
    ExactScalar::from_ln(acc.value())
}

/// `(pi_p(T) for one T with statistic bm, pi_p(T_bm) = |T_bm| pi_p(T))`.
pub fn pi_p_statistic(p: &DegreeDistribution, bm: &DegreeStatistic) -> (ExactScalar, ExactScalar) {
    let per_tree = pi_of_statistic(p, bm);
    let total = if per_tree.is_exact() {
        per_tree.scale(&bm.count_trees())
    } else if per_tree.is_zero() {
        ExactScalar::zero()
    } else {
        ExactScalar::from_ln(per_tree.ln() + bm.ln_count_trees())
    };
    (per_tree, total)
}

/// Mean, variance and second moment of a degree law.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeMoments {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
    pub exact_mean: Option<BigRational>,
    pub exact_variance: Option<BigRational>,
}

pub fn degree_moments(dist: &DegreeDistribution) -> DegreeMoments {
    DegreeMoments {
        mean: dist.mean(),
        variance: dist.variance(),
        second_moment: dist.second_moment(),
        exact_mean: dist.exact_mean(),
        exact_variance: dist.exact_variance(),
    }
}
