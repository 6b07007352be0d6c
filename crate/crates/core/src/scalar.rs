//! Probability scalar abstraction.
//!
//! Every exact computation in the crate (assignment probabilities, the
//! normalization factor, enumeration sums, budget quotas) is written against
//! [`Probability`], so the same code runs in `f32`, `f64` or exact rational
//! arithmetic. Monte Carlo draws are always compared in `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A probability-valued scalar.
pub trait Probability:
    Clone + Debug + PartialOrd + Num + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Parses a decimal literal such as `0.9`, `1`, `2.5e-3`. Rational types
    /// additionally accept `a/b`.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Text form that [`Probability::parse_decimal`] maps back to the same value.
    fn to_text(&self) -> String;

    /// `Some(k)` when the value is a non-negative whole number. Floating point
    /// types accept values within a few ulps of an integer, since quotas like
    /// `16 * 0.3 / 0.8` rarely come out bit-exact.
    fn as_whole(&self) -> Option<u64>;

    /// Largest whole number not above the value. Negative input maps to 0.
    fn floor_whole(&self) -> u64;

    /// Lossy conversion used when comparing against uniform draws.
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_count(count: u64) -> Self {
        Self::from_u64(count).expect("count representable as probability scalar")
    }

    /// Whether the value lies in the closed interval [0, 1].
    fn is_unit_interval(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

macro_rules! float_probability {
    ($ty:ty, $whole_tol:expr) => {
        impl Probability for $ty {
            fn parse_decimal(text: &str) -> Option<Self> {
                text.trim().parse::<$ty>().ok().filter(|v| v.is_finite())
            }

            fn to_text(&self) -> String {
                // Display for floats is the shortest string that round-trips.
                format!("{}", self)
            }

            fn as_whole(&self) -> Option<u64> {
                if !self.is_finite() || *self < -0.5 {
                    return None;
                }
                let nearest = self.round();
                let tol: $ty = $whole_tol * nearest.abs().max(1.0);
                if (*self - nearest).abs() <= tol {
                    nearest.to_u64()
                } else {
                    None
                }
            }

            fn floor_whole(&self) -> u64 {
                if *self <= 0.0 {
                    0
                } else {
                    self.floor().to_u64().unwrap_or(u64::MAX)
                }
            }
        }
    };
}

float_probability!(f64, 1e-9);
float_probability!(f32, 1e-4);

impl Probability for BigRational {
    fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            return Some(BigRational::new(num, den));
        }
        parse_exact_decimal(text)
    }

    fn to_text(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn as_whole(&self) -> Option<u64> {
        if self.is_integer() && !self.is_negative() {
            self.to_integer().to_u64()
        } else {
            None
        }
    }

    fn floor_whole(&self) -> u64 {
        if self.is_negative() {
            0
        } else {
            self.floor().to_integer().to_u64().unwrap_or(u64::MAX)
        }
    }
}

/// Exact value of a decimal literal with optional sign, fraction and exponent.
fn parse_exact_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Exact rational probability scalar.
pub type Rational = BigRational;

pub(crate) fn one_minus<P: Probability>(p: &P) -> P {
    P::one() - p.clone()
}
