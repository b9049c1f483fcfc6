//! Coefficient types.
//!
//! Everything in the crate is generic over [`Scalar`]. The exact rational
//! instances (`Ratio<i64>`, `Ratio<BigInt>`) are what ground-space membership
//! and gap checks are meant to run on; the float instances exist for export
//! and plotting, and compare exactly as well (small dyadic coefficients are
//! represented without error).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

/// Numeric field element usable as a polynomial coefficient or an energy.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static {
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// `numer / denom`; `denom` must be nonzero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact rational value, if the number is finite.
    fn to_big_rational(&self) -> Option<BigRational>;

    /// Nearest representable value, `None` if out of range.
    fn from_big_rational(r: &BigRational) -> Option<Self>;

    /// Parses `p/q`, an integer, or a decimal literal.
    fn parse_text(s: &str) -> Option<Self>;

    /// Canonical text form, inverse of [`Scalar::parse_text`].
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn two() -> Self {
        Self::from_int(2)
    }
}

/// Decimal or `p/q` literal as an exact rational.
fn parse_big_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if s.contains('/') {
        let (n, d) = s.split_once('/')?;
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return None;
        }
        let digits = format!("{int_digits}{frac_part}");
        let mut n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        return Some(BigRational::new(n, d));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn to_big_rational(&self) -> Option<BigRational> {
        Some(BigRational::new(
            BigInt::from(*self.numer()),
            BigInt::from(*self.denom()),
        ))
    }

    fn from_big_rational(r: &BigRational) -> Option<Self> {
        Some(Ratio::new(r.numer().to_i64()?, r.denom().to_i64()?))
    }

    fn parse_text(s: &str) -> Option<Self> {
        Self::from_big_rational(&parse_big_rational(s)?)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_big_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn from_big_rational(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_big_rational(s)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn from_ratio(numer: i64, denom: i64) -> Self {
                numer as $t / denom as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn to_big_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self)
            }

            fn from_big_rational(r: &BigRational) -> Option<Self> {
                let v = ToPrimitive::to_f64(r)? as $t;
                v.is_finite().then_some(v)
            }

            fn parse_text(s: &str) -> Option<Self> {
                let s = s.trim();
                if s.contains('/') {
                    return Self::from_big_rational(&parse_big_rational(s)?);
                }
                s.parse::<$t>().ok().filter(|v| v.is_finite())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Smallest element of a non-empty iterator under `PartialOrd`.
pub(crate) fn min_of<S: Scalar, I: IntoIterator<Item = S>>(iter: I) -> Option<S> {
    iter.into_iter().fold(None, |acc: Option<S>, v| match acc {
        Some(a) if a <= v => Some(a),
        _ => Some(v),
    })
}

pub(crate) fn max_of<S: Scalar, I: IntoIterator<Item = S>>(iter: I) -> Option<S> {
    iter.into_iter().fold(None, |acc: Option<S>, v| match acc {
        Some(a) if a >= v => Some(a),
        _ => Some(v),
    })
}
