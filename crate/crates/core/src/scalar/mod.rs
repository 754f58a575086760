//! Extended-precision scalars.
//!
//! Every computation in the crate runs on MPFR-backed [`Real`] values whose
//! precision is derived from a [`PrecisionContext`]. The context fixes the
//! number of decimal digits the caller cares about plus a guard margin that
//! absorbs rounding in long recurrences and eigenvalue sweeps.

mod complex;
mod special;

pub use complex::{complex_pow_alpha, complex_sqrt_neg, Complexz};
pub use special::{bessel_j, gamma, hyp2f1};

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision real number. The precision travels with the value.
pub type Real = Float;

/// log2(10), used to turn decimal digit counts into mantissa bits.
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Smallest accepted `decimal_digits`.
pub const MIN_DECIMAL_DIGITS: u32 = 30;

/// Working precision and tolerance policy shared by all operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    /// Digits the results are expected to be correct to.
    pub decimal_digits: u32,
    /// Extra digits carried during evaluation.
    pub guard_digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            decimal_digits: 120,
            guard_digits: 20,
        }
    }
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DECIMAL_DIGITS {
            return Err(Error::Config(format!(
                "decimal_digits must be at least {MIN_DECIMAL_DIGITS}, got {decimal_digits}"
            )));
        }
        Ok(Self {
            decimal_digits,
            guard_digits,
        })
    }

    /// Digits actually carried by every evaluation.
    pub fn working_digits(&self) -> u32 {
        self.decimal_digits + self.guard_digits
    }

    /// Mantissa bits corresponding to [`working_digits`](Self::working_digits).
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    /// Same target accuracy, with `extra` more guard digits.
    pub fn with_extra_guard(&self, extra: u32) -> Self {
        Self {
            decimal_digits: self.decimal_digits,
            guard_digits: self.guard_digits + extra,
        }
    }

    /// Extra digits spent on moment-based coefficient generation for
    /// `n_pairs` recurrence pairs. The classical Chebyshev algorithm on raw
    /// moments of these half-line weights loses a little under one decimal
    /// digit per pair; one digit per pair plus a fixed margin covers it.
    pub fn conditioning_digits(n_pairs: usize) -> u32 {
        n_pairs as u32 + 10
    }

    /// `10^-decimal_digits` at working precision.
    pub fn tolerance(&self) -> Real {
        self.pow10(-(self.decimal_digits as i32))
    }

    /// `10^e` at working precision.
    pub fn pow10(&self, e: i32) -> Real {
        Float::with_val(self.bits(), 10).pow(e)
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits())
    }

    pub fn one(&self) -> Real {
        Float::with_val(self.bits(), 1)
    }

    pub fn int(&self, v: i64) -> Real {
        Float::with_val(self.bits(), v)
    }

    /// Exact conversion of a binary double. Prefer [`parse`](Self::parse)
    /// for user-facing decimal parameters such as `0.7`.
    pub fn from_f64(&self, v: f64) -> Real {
        Float::with_val(self.bits(), v)
    }

    /// Parses a decimal string, rounding once to working precision.
    pub fn parse(&self, s: &str) -> Result<Real> {
        parse_real(s, self.bits())
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

    /// Rounds `x` to working precision.
    pub fn round(&self, x: &Real) -> Real {
        Float::with_val(self.bits(), x)
    }
}

/// Number of mantissa bits needed for `digits` significant decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 8
}

/// Parses a decimal string into a value with `bits` of precision.
pub fn parse_real(s: &str, bits: u32) -> Result<Real> {
    let parsed = Float::parse(s.trim())
        .map_err(|e| Error::Parse(format!("invalid number {s:?}: {e}")))?;
    let x = Float::with_val(bits, parsed);
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite number {s:?}")));
    }
    Ok(x)
}

/// Number of significant decimal digits that guarantee an exact round trip
/// of a value with `bits` of mantissa.
pub fn round_trip_digits(bits: u32) -> usize {
    (bits as f64 / LOG2_10).ceil() as usize + 1
}

/// Decimal serialization that parses back to the identical value at the
/// same precision.
pub fn to_decimal(x: &Real) -> String {
    to_decimal_digits(x, round_trip_digits(x.prec()))
}

/// Decimal serialization with `digits` significant digits.
pub fn to_decimal_digits(x: &Real, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix_round(10, Some(digits), Round::Nearest)
}

/// Lossy conversion used for logs, plots and order-of-magnitude checks.
pub fn to_f64(x: &Real) -> f64 {
    x.to_f64()
}

/// `log10 |x|` as a double, finite for tiny and huge arguments alike.
pub fn log10_abs(x: &Real) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = Float::with_val(64, x.abs_ref());
    a.log10().to_f64()
}
