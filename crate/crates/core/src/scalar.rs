//! Scalar types used for probabilities.
//!
//! Automata are generic over the weight type so the same code can run with
//! `f64` for spectral work and with exact rationals when word probabilities
//! must be compared without rounding.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A probability weight.
pub trait Probability:
    Clone + Debug + Display + PartialOrd + Num + FromPrimitive + Send + Sync + 'static
{
    /// Absolute slack on stochasticity checks.
    fn stochastic_tolerance() -> Self;

    /// Converts an exact rational, rounding when the type is inexact.
    fn from_rational(value: &BigRational) -> Option<Self>;

    /// Nearest `f64`, used to build sampling tables.
    fn to_f64(&self) -> f64;

    fn abs_diff(&self, other: &Self) -> Self {
        if self > other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.abs_diff(other) <= Self::stochastic_tolerance()
    }
}

/// Floating point weights that support spectral computations.
pub trait SpectralScalar: Probability + Float {
    /// Default relative tolerance for power iteration.
    fn spectral_tolerance() -> Self;
}

impl Probability for f64 {
    fn stochastic_tolerance() -> Self {
        1e-12
    }

    fn from_rational(value: &BigRational) -> Option<Self> {
        ratio_to_f64(value)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl SpectralScalar for f64 {
    fn spectral_tolerance() -> Self {
        1e-12
    }
}

impl Probability for f32 {
    fn stochastic_tolerance() -> Self {
        1e-6
    }

    fn from_rational(value: &BigRational) -> Option<Self> {
        ratio_to_f64(value).map(|x| x as f32)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl SpectralScalar for f32 {
    fn spectral_tolerance() -> Self {
        1e-6
    }
}

impl Probability for BigRational {
    fn stochastic_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }

    fn from_rational(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self).unwrap_or(f64::NAN)
    }
}

fn ratio_to_f64(value: &BigRational) -> Option<f64> {
    ToPrimitive::to_f64(value)
        .or_else(|| Some(value.numer().to_f64()? / value.denom().to_f64()?))
}

/// Parses `"1/3"`, `"0.25"`, `"1"` or `"2.5e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
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
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rational(" 2 / 4 "), Some(ratio(1, 2)));
        assert_eq!(parse_rational("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("1"), Some(ratio(1, 1)));
        assert_eq!(parse_rational("2.5e-3"), Some(ratio(1, 400)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn rational_tolerance_is_exact() {
        let third = ratio(1, 3);
        let sum = third.clone() + third.clone() + third;
        assert!(sum.approx_eq(&ratio(1, 1)));
        assert!(!ratio(999, 1000).approx_eq(&ratio(1, 1)));
        assert!(0.999_999_999_999_9_f64.approx_eq(&1.0));
    }
}
