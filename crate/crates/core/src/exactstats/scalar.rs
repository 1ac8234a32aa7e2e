use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::numeric;

/// Which representation of an [`ExactScalar`] is authoritative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Rational,
    Log,
}

/// Nonnegative number carried both as an optional exact rational and as its
/// natural logarithm. `ln = -inf` encodes zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactScalar {
    rational: Option<BigRational>,
    ln: f64,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self {
            rational: Some(BigRational::zero()),
            ln: f64::NEG_INFINITY,
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1u32.into())
    }

    /// Panics on negative input.
    pub fn from_rational(r: BigRational) -> Self {
        assert!(!r.is_negative(), "ExactScalar must be nonnegative");
        let ln = numeric::ln_rational(&r);
        Self {
            rational: Some(r),
            ln,
        }
    }

    pub fn from_integer(k: BigUint) -> Self {
        Self::from_rational(numeric::rational_from_biguint(k))
    }

    pub fn from_u64(k: u64) -> Self {
        Self::from_integer(k.into())
    }

    /// Log-only value.
    pub fn from_ln(ln: f64) -> Self {
        assert!(!ln.is_nan(), "NaN logarithm");
        Self { rational: None, ln }
    }

    /// Log-only value from a nonnegative float.
    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0, "ExactScalar must be nonnegative");
        Self::from_ln(libm::log(x))
    }

    pub fn mode(&self) -> Mode {
        if self.rational.is_some() {
            Mode::Rational
        } else {
            Mode::Log
        }
    }

    pub fn is_exact(&self) -> bool {
        self.rational.is_some()
    }

    pub fn rational(&self) -> Option<&BigRational> {
        self.rational.as_ref()
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn is_zero(&self) -> bool {
        match &self.rational {
            Some(r) => r.is_zero(),
            None => self.ln == f64::NEG_INFINITY,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.rational {
            Some(r) => numeric::rational_to_f64(r),
            None => libm::exp(self.ln),
        }
    }

    /// Drops the rational companion.
    pub fn into_log(self) -> Self {
        Self::from_ln(self.ln)
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.rational, &other.rational) {
            (Some(a), Some(b)) => Self::from_rational(a * b),
            _ => Self::from_ln(add_ln(self.ln, other.ln)),
        }
    }

    /// Panics when dividing by zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        match (&self.rational, &other.rational) {
            (Some(a), Some(b)) => Self::from_rational(a / b),
            _ => Self::from_ln(self.ln - other.ln),
        }
    }

    pub fn pow(&self, q: u32) -> Self {
        match &self.rational {
            Some(r) => Self::from_rational(num_traits::pow(r.clone(), q as usize)),
            None if self.ln == f64::NEG_INFINITY => {
                if q == 0 {
                    Self::one()
                } else {
                    Self::from_ln(f64::NEG_INFINITY)
                }
            }
            None => Self::from_ln(self.ln * q as f64),
        }
    }

    pub fn scale(&self, k: &BigUint) -> Self {
        self.mul(&Self::from_integer(k.clone()))
    }

    /// Relative agreement of the logarithms (exact zeros agree only with zeros).
    pub fn agrees_with(&self, other: &Self, rel: f64) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let d = (self.to_f64() - other.to_f64()).abs();
        d <= rel * self.to_f64().abs().max(other.to_f64().abs())
    }

    /// Rational rendered as `p/q` (or `p` for integers).
    pub fn rational_string(&self) -> Option<String> {
        self.rational.as_ref().map(|r| r.to_string())
    }
}

/// `ln(a) + ln(b)` with `-inf` absorbing.
fn add_ln(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        a + b
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "exp({})", self.ln),
        }
    }
}

/// Real number that may be negative, with an optional exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedScalar {
    rational: Option<BigRational>,
    value: f64,
}

impl SignedScalar {
    pub fn from_rational(r: BigRational) -> Self {
        let value = numeric::rational_to_f64(&r);
        Self {
            rational: Some(r),
            value,
        }
    }

    pub fn from_f64(value: f64) -> Self {
        Self {
            rational: None,
            value,
        }
    }

    pub fn rational(&self) -> Option<&BigRational> {
        self.rational.as_ref()
    }

    pub fn to_f64(&self) -> f64 {
        self.value
    }

    pub fn is_exact(&self) -> bool {
        self.rational.is_some()
    }

    pub fn is_negative(&self) -> bool {
        match &self.rational {
            Some(r) => r.is_negative(),
            None => self.value < 0.0,
        }
    }

    pub fn rational_string(&self) -> Option<String> {
        self.rational.as_ref().map(|r| r.to_string())
    }
}

impl From<ExactScalar> for SignedScalar {
    fn from(x: ExactScalar) -> Self {
        match x.rational {
            Some(r) => Self::from_rational(r),
            None => Self::from_f64(libm::exp(x.ln)),
        }
    }
}

impl fmt::Display for SignedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

#[cfg(test)]
pub(crate) fn int(k: u64) -> BigRational {
    BigRational::from_integer(num_bigint::BigInt::from(k))
}
