//! Scalars in the two arithmetic modes used throughout the crate.
//!
//! Exact mode works over arbitrary-precision rationals, float mode over `f64`.
//! Every quantity that is a polynomial in the Jacobi coefficients stays exact
//! as long as the coefficients themselves are rational.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

/// A real value that is either an exact rational or a double.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Exact values serialize as `"num/den"` strings, floats as numbers.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&rational_string(r)),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

/// Named parameters bound into catalog entries and user expressions.
pub type ParamMap = BTreeMap<String, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{text}` as a number")]
pub struct NumberParseError {
    pub text: String,
}

/// Parses an integer, a fraction `p/q`, or a decimal with optional exponent
/// (`-0.25`, `1e-3`, `3/10`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, NumberParseError> {
    let err = || NumberParseError { text: text.to_string() };
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_rational(num).map_err(|_| err())?;
        let den = parse_rational(den).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(num / den);
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = body[pos + 1..].parse().map_err(|_| err())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact rational value of a finite double (binary expansion, no rounding).
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Correctly scaled conversion that survives numerators and denominators far
/// outside the `f64` range (e.g. `2^100000 / 2^99999`).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let Some(x) = r.to_f64() {
        if x.is_finite() && x != 0.0 {
            return x;
        }
    }
    let negative = r.is_negative();
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let shift = num.bits() as i64 - den.bits() as i64;
    // Bring num/den into [2^63, 2^65) as an integer quotient, then rescale.
    let k = 64 - shift;
    let q: BigUint = if k >= 0 {
        (num << k as usize) / den
    } else {
        num / (den << (-k) as usize)
    };
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    let value = scale_by_pow2(mantissa, -k);
    if negative {
        -value
    } else {
        value
    }
}

fn scale_by_pow2(x: f64, e: i64) -> f64 {
    let mut value = x;
    let mut e = e;
    while e > 1000 {
        value *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        value *= 2f64.powi(-1000);
        e += 1000;
    }
    value * 2f64.powi(e as i32)
}

/// Square root of a rational when it is itself rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(
            BigInt::from_biguint(Sign::Plus, sn),
            BigInt::from_biguint(Sign::Plus, sd),
        ))
    } else {
        None
    }
}

/// `base^exp`, raising numerator and denominator separately since powers of
/// coprime integers stay coprime.
pub fn rational_pow(base: &BigRational, exp: u64) -> BigRational {
    let e = u32::try_from(exp).expect("exponent fits in u32");
    BigRational::new_raw(base.numer().pow(e), base.denom().pow(e))
}

/// Renders a rational as `numerator/denominator` (denominator omitted when 1).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimal_fraction_and_exponent_forms() {
        assert_eq!(parse_rational("0.3").unwrap(), q(3, 10));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("3/10").unwrap(), q(3, 10));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn converts_huge_ratios() {
        let two = BigRational::from_integer(2.into());
        let a = rational_pow(&two, 100_000);
        let b = rational_pow(&two, 99_999);
        assert_eq!(rational_to_f64(&(a.clone() / b.clone())), 2.0);
        assert_eq!(rational_to_f64(&(b / a)), 0.5);
        let tiny = BigRational::one() / rational_pow(&two, 1000);
        assert_eq!(rational_to_f64(&tiny), 2f64.powi(-1000));
        assert_eq!(rational_to_f64(&q(-1, 3)), -1.0 / 3.0);
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(-4, 1)), None);
    }
}
