//! Exact rational numbers and their text forms.
//!
//! Every probability, search time and game value in this crate is a
//! [`Rational`]. Decimal text such as `.15` is read exactly (as `3/20`), so
//! inputs copied from tables never pick up binary rounding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Error returned when text is neither `num/den` nor an exact decimal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{input}`: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `num/den`, an integer, or a decimal with optional exponent.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = |reason| ParseRationalError {
        input: text.to_string(),
        reason,
    };
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err("numerator is not an integer"))?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        if den.is_negative() {
            return Err(err("denominator must be positive"));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s).ok_or_else(|| err("not a decimal number"))
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], i64::from_str(&s[pos + 1..]).ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).ok()?);
    let scale = exponent - frac.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return None;
    }
    let ten = BigInt::from(10u8);
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= Rational::from_integer(factor);
    } else {
        value /= Rational::from_integer(factor);
    }
    Some(if negative { -value } else { value })
}

/// Canonical `num/den` form (reduced, positive denominator, bare integer when
/// the denominator is one).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering rounded half away from zero to `places` digits. Display
/// only; never parsed back.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), places);
    let scaled = r * Rational::from_integer(scale.clone());
    let magnitude = scaled.abs();
    let (q, rem) = magnitude.numer().div_rem(magnitude.denom());
    let rounded = if rem * 2u8 >= *magnitude.denom() {
        q + 1u8
    } else {
        q
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded_is_zero(&int_part, &frac_part) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = places
    )
}

fn rounded_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

/// Approximate `f64` value, for display and sorting only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("3/20").unwrap(), ratio(3, 20));
        assert_eq!(parse_rational(".15").unwrap(), ratio(3, 20));
        assert_eq!(parse_rational("0.15").unwrap(), ratio(3, 20));
        assert_eq!(parse_rational("-2.5").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("1.5e-2").unwrap(), ratio(3, 200));
        assert_eq!(parse_rational("2E3").unwrap(), int(2000));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), ratio(3, 2));
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["", "1/0", "1/-2", "abc", ".", "1.2.3", "1/x", "--1", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn canonical_and_decimal_rendering() {
        assert_eq!(format_rational(&ratio(12, 230)), "6/115");
        assert_eq!(format_rational(&ratio(4, -2)), "-2");
        assert_eq!(to_decimal(&ratio(3, 55), 4), "0.0545");
        assert_eq!(to_decimal(&ratio(18, 185), 4), "0.0973");
        assert_eq!(to_decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal(&ratio(-1, 3000), 2), "0.00");
        assert_eq!(to_decimal(&ratio(5, 2), 0), "3");
    }
}
