//! Rational scalars and their text forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (guaranteed by `num_rational`).
pub type ExactScalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{input}` as an exact rational")]
pub struct ParseRationalError {
    pub input: String,
}

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"p/q"`, and finite decimals such as `"-1.25"` or `"3e-2"`
/// into an exact rational. Decimals are converted digit by digit, never
/// through floating point.
pub fn parse_rational(input: &str) -> Result<ExactScalar, ParseRationalError> {
    let err = || ParseRationalError { input: input.to_string() };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let joined = format!("{whole}{frac}");
    let numer: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().map_err(|_| err())? };
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if sign < 0 { -value } else { value })
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &ExactScalar) -> String {
    q.to_string()
}

/// Decimal approximation for human-readable tables.
pub fn to_decimal_string(q: &ExactScalar, digits: usize) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let (w, f) = scaled.div_rem(&scale);
    let mut frac = f.to_string();
    while frac.len() < digits {
        frac.insert(0, '0');
    }
    format!("{}{}.{}", if neg { "-" } else { "" }, w, frac)
}

/// Number of bits in numerator plus denominator; used as a pivot-size heuristic.
pub fn bit_size(q: &ExactScalar) -> u64 {
    q.numer().bits() + q.denom().bits()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a ExactScalar>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5e1").unwrap(), int(-15));
        assert_eq!(parse_rational("2.5E-1").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn lowest_terms() {
        let q = ratio(10, -4);
        assert_eq!(q.numer(), &BigInt::from(-5));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(format_rational(&q), "-5/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal_string(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_decimal_string(&ratio(-7, 4), 3), "-1.750");
        assert_eq!(to_decimal_string(&int(5), 3), "5");
    }
}
