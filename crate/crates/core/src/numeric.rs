//! Small numeric helpers shared by the exact and log-space code paths.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const LN_2: f64 = core::f64::consts::LN_2;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Natural logarithm of a big unsigned integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return libm::log(x.to_u64().unwrap() as f64);
    }
    // keep the top 64 bits; the discarded tail changes the value by < 2^-63 relative
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    libm::log(top) + shift as f64 * LN_2
}

/// Natural logarithm of a nonnegative rational; `-inf` for zero.
///
/// Panics on negative input.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(!x.is_negative(), "logarithm of a negative rational");
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Nearest `f64` to a rational, without overflowing for huge numerators or
/// denominators.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * libm::exp(ln_rational(&x.abs()))
}

pub fn rational_from_u64(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_biguint(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Falling factorial `(x)_q = x (x-1) ... (x-q+1)`, zero when `q > x`.
pub fn falling_factorial(x: u64, q: u64) -> BigUint {
    if q == 0 {
        return BigUint::one();
    }
    if q > x {
        return BigUint::zero();
    }
    range_product(x - q + 1, x)
}

/// Product of the integers in `lo..=hi` by balanced splitting.
fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        let mut acc = BigUint::one();
        let mut small: u128 = 1;
        for k in lo..=hi {
            match small.checked_mul(k as u128) {
                Some(v) => small = v,
                None => {
                    acc *= BigUint::from(small);
                    small = k as u128;
                }
            }
        }
        return acc * BigUint::from(small);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

/// Natural log of `(x)_q`, `-inf` when the falling factorial vanishes.
pub fn ln_falling_factorial(x: u64, q: u64) -> f64 {
    if q == 0 {
        return 0.0;
    }
    if q > x {
        return f64::NEG_INFINITY;
    }
    (0..q)
        .map(|j| libm::log((x - j) as f64))
        .collect::<CompensatedSum>()
        .value()
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    falling_factorial(n, k) / range_product(1, k)
}

/// Table of `ln k!` for `k <= limit`, built with compensated accumulation;
/// larger arguments fall back to `lgamma`.
#[derive(Clone, Debug)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub const MAX_TABLE: u64 = 1 << 22;

    pub fn up_to(limit: u64) -> Self {
        let limit = limit.min(Self::MAX_TABLE) as usize;
        let mut table = Vec::with_capacity(limit + 1);
        let mut acc = CompensatedSum::new();
        table.push(0.0);
        for k in 1..=limit {
            acc.add(libm::log(k as f64));
            table.push(acc.value());
        }
        Self { table }
    }

    pub fn ln_factorial(&self, k: u64) -> f64 {
        match self.table.get(k as usize) {
            Some(v) => *v,
            None => libm::lgamma(k as f64 + 1.0),
        }
    }

    /// `ln C(n, k)`, `-inf` outside `0 <= k <= n`.
    pub fn ln_binomial(&self, n: u64, k: u64) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.ln_factorial(n) - self.ln_factorial(k) - self.ln_factorial(n - k)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}
