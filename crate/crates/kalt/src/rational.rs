//! Exact rational arithmetic on checked 128-bit integers.
//!
//! Enumeration over S_n for n <= 12 keeps every intermediate product well
//! inside `i128`, and all operations are checked so an overflow surfaces as
//! [`Error::Overflow`] instead of a wrong answer. No floating point is used
//! anywhere on the exact paths.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.abs()
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Construct and reduce `num / den`. Fails on a zero denominator.
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::DomainError("rational with zero denominator".into()));
        }
        let sign = if den < 0 { -1 } else { 1 };
        let num = num.checked_mul(sign).ok_or(Error::Overflow)?;
        let den = den.checked_mul(sign).ok_or(Error::Overflow)?;
        let g = gcd(num, den);
        if g == 0 {
            return Ok(Rational::ZERO);
        }
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_int(v: i128) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn checked_add(self, other: Rational) -> Result<Rational> {
        let lhs = self.num.checked_mul(other.den).ok_or(Error::Overflow)?;
        let rhs = other.num.checked_mul(self.den).ok_or(Error::Overflow)?;
        Rational::new(
            lhs.checked_add(rhs).ok_or(Error::Overflow)?,
            self.den.checked_mul(other.den).ok_or(Error::Overflow)?,
        )
    }

    pub fn checked_sub(self, other: Rational) -> Result<Rational> {
        self.checked_add(Rational {
            num: other.num.checked_neg().ok_or(Error::Overflow)?,
            den: other.den,
        })
    }

    pub fn checked_mul(self, other: Rational) -> Result<Rational> {
        // cross-reduce first to keep intermediates small
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        let num = (self.num / g1)
            .checked_mul(other.num / g2)
            .ok_or(Error::Overflow)?;
        let den = (self.den / g2)
            .checked_mul(other.den / g1)
            .ok_or(Error::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_div(self, other: Rational) -> Result<Rational> {
        if other.num == 0 {
            return Err(Error::DomainError("division by zero rational".into()));
        }
        self.checked_mul(Rational {
            num: other.den,
            den: other.num,
        })
    }

    /// Nearest `f64`, for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators are positive; cross products of reduced in-range
        // values stay inside i128 for every quantity this crate produces
        let lhs = self
            .num
            .checked_mul(other.den)
            .expect("rational compare overflow");
        let rhs = other
            .num
            .checked_mul(self.den)
            .expect("rational compare overflow");
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    /// Lossless `"num/den"` rendering, always including the denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
