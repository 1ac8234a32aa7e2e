use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ApproxError;
use crate::exactstats::{self, ExactError, ExactScalar, SignedScalar};
use crate::numeric;
use crate::treecore::{DegreeStatistic, PlaneTree};

/// The `sqrt((Var - E)/E) + 2/sqrt(|T_{n_T}|)` bound for the count of fringes
/// with statistic `n_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaiDevroye {
    pub bound: f64,
    /// `(Var N_T - E N_T) / E N_T` before clamping.
    pub radicand: SignedScalar,
    /// The radicand was negative and has been replaced by zero.
    pub clamped: bool,
    /// `E N_T = 0`; the bound is reported as 1.
    pub zero_mean: bool,
}

/// Poisson approximation quantities for one target.
#[derive(Clone, Debug, PartialEq)]
pub struct TVBoundReport {
    /// Expected count.
    pub lambda: ExactScalar,
    /// `lambda * sum_i m(i)^2 / n(i)`.
    pub delta: ExactScalar,
    /// The same quantity as `|T|^2 (lambda/|n|) sum_i p_i(n_T)^2 / p_i(n)`.
    pub delta_alt: ExactScalar,
    /// `sum_i p_i(n_T)^2 / p_i(n)`; absent when some needed `n(i)` is zero.
    pub spread: Option<ExactScalar>,
    pub cai_devroye: CaiDevroye,
    pub class_size: BigUint,
    /// `delta >= 1`, so the Stein bound says nothing.
    pub vacuous: bool,
    pub notes: Vec<String>,
}

pub fn cai_devroye_bound(bn: &DegreeStatistic, t: &PlaneTree) -> Result<CaiDevroye, ApproxError> {
    if t.size() > bn.size() {
        return Err(ExactError::TargetTooLarge {
            target: t.size(),
            host: bn.size(),
        }
        .into());
    }
    let m1 = exactstats::factorial_moment_tree(bn, t, 1)?.value;
    let m2 = exactstats::factorial_moment_tree(bn, t, 2)?.value;
    let class = t.statistic().count_trees();
    let class_f = numeric::rational_to_f64(&numeric::rational_from_biguint(class));
    if m1.is_zero() {
        return Ok(CaiDevroye {
            bound: 1.0,
            radicand: SignedScalar::from_f64(0.0),
            clamped: false,
            zero_mean: true,
        });
    }
    // Var - E = E(N)_2 - (E N)^2
    let radicand = match (m1.rational(), m2.rational()) {
        (Some(a), Some(b)) => SignedScalar::from_rational((b - a * a) / a),
        _ => {
            let log_ratio = if m2.is_zero() {
                f64::NEG_INFINITY
            } else {
                m2.ln() - 2.0 * m1.ln()
            };
            SignedScalar::from_f64(m1.to_f64() * libm::expm1(log_ratio))
        }
    };
    let clamped = radicand.is_negative();
    let r = if clamped { 0.0 } else { radicand.to_f64() };
    Ok(CaiDevroye {
        bound: libm::sqrt(r) + 2.0 / libm::sqrt(class_f),
        radicand,
        clamped,
        zero_mean: false,
    })
}

/// Stein quantities for the count of fringes equal to `t`.
pub fn stein_delta(bn: &DegreeStatistic, t: &PlaneTree) -> Result<TVBoundReport, ApproxError> {
    let lambda = exactstats::expected_count_tree(bn, t)?;
    report(bn, t.statistic(), lambda, cai_devroye_bound(bn, t)?)
}

/// Stein quantities for the count of fringes with statistic `bm`.
pub fn statistic_tv_bound(bn: &DegreeStatistic, bm: &DegreeStatistic) -> Result<TVBoundReport, ApproxError> {
    if bm.size() > bn.size() {
        return Err(ExactError::TargetTooLarge {
            target: bm.size(),
            host: bn.size(),
        }
        .into());
    }
    let lambda = exactstats::factorial_moment_statistic(bn, bm, 1)?.value;
    let cd = cai_devroye_bound(bn, &PlaneTree::canonical(bm))?;
    report(bn, bm, lambda, cd)
}

fn report(
    bn: &DegreeStatistic,
    bm: &DegreeStatistic,
    lambda: ExactScalar,
    cai_devroye: CaiDevroye,
) -> Result<TVBoundReport, ApproxError> {
    let n = bn.size();
    let m = bm.size();
    let feasible = bm.iter().all(|(i, _)| bn.count(i) > 0);
    let mut notes = Vec::new();

    let (delta, delta_alt, spread) = if !feasible {
        notes.push(String::from("target uses a degree absent from the host"));
        (ExactScalar::zero(), ExactScalar::zero(), None)
    } else if lambda.is_exact() {
        let lam = lambda.rational().unwrap();
        let sum: BigRational = bm
            .iter()
            .map(|(i, c)| numeric::rational_from_u64(c * c, bn.count(i)))
            .sum();
        let spread: BigRational = bm
            .iter()
            .map(|(i, c)| {
                let pt = numeric::rational_from_u64(c, m);
                let pn = numeric::rational_from_u64(bn.count(i), n);
                &pt * &pt / pn
            })
            .sum();
        let delta = lam * &sum;
        let alt = numeric::rational_from_u64(m * m, n) * lam * &spread;
        assert_eq!(delta, alt, "the two forms of delta disagree");
        (
            ExactScalar::from_rational(delta),
            ExactScalar::from_rational(alt),
            Some(ExactScalar::from_rational(spread)),
        )
    } else {
        let sum: f64 = bm
            .iter()
            .map(|(i, c)| (c * c) as f64 / bn.count(i) as f64)
            .collect::<numeric::CompensatedSum>()
            .value();
        let spread: f64 = bm
            .iter()
            .map(|(i, c)| {
                let pt = c as f64 / m as f64;
                pt * pt / (bn.count(i) as f64 / n as f64)
            })
            .collect::<numeric::CompensatedSum>()
            .value();
        let delta = ExactScalar::from_ln(lambda.ln() + libm::log(sum));
        let alt = ExactScalar::from_ln(
            lambda.ln() + libm::log(spread) + 2.0 * libm::log(m as f64) - libm::log(n as f64),
        );
        assert!(delta.agrees_with(&alt, 1e-10), "the two forms of delta disagree");
        (delta, alt, Some(ExactScalar::from_f64(spread)))
    };

    if let Some(s) = &spread {
        let above = match s.rational() {
            Some(r) => r > &numeric::rational_from_u64(1, 8),
            None => s.to_f64() > 0.125,
        };
        assert!(above, "spread must exceed 1/8");
    }
    let vacuous = match delta.rational() {
        Some(r) => !r.is_zero() && !r.is_negative() && r >= &numeric::rational_from_u64(1, 1),
        None => delta.to_f64() >= 1.0,
    };
    if vacuous {
        notes.push(String::from("delta >= 1: total variation is at most 1 anyway"));
    }
    if cai_devroye.clamped {
        notes.push(String::from("variance below mean: radicand clamped at 0"));
    }
    if cai_devroye.bound >= 1.0 {
        notes.push(String::from("Cai-Devroye bound >= 1 is trivial"));
    }
    Ok(TVBoundReport {
        lambda,
        delta,
        delta_alt,
        spread,
        cai_devroye,
        class_size: bm.count_trees(),
        vacuous,
        notes,
    })
}
