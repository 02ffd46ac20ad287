//! Exact rational arithmetic: polynomials, rational functions, power-series
//! coefficients, moments and real root isolation.

mod poly;
mod poly2;
mod ratfn;
pub mod roots;

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num_rational::BigRational;
pub use poly::Poly;
pub use poly2::Poly2;
pub use ratfn::{Moments, RatFn, RatFn2, Var};
pub use roots::dominant_decay_rate;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ArithError {
    #[error("denominator vanishes at the origin; no power series expansion")]
    NotExpandable,
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("pole at {0}")]
    Pole(String),
    #[error("not a probability generating function: f(1) = {0}")]
    NotADistribution(String),
    #[error("denominator has no real root")]
    NoRealPole,
    #[error("no pole: denominator is constant")]
    NoPole,
    #[error("dominant pole is complex (modulus {complex_modulus:.12}, smallest real pole modulus {real_modulus:.12})")]
    ComplexDominantPole {
        complex_modulus: f64,
        real_modulus: f64,
    },
    #[error("cannot parse rational number from {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// `n/d` as a reduced [`BigRational`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn pow(base: &BigRational, exp: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back on a scaled quotient for huge operands
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical `num/den` text form. Integers are written without a denominator.
pub fn fraction_string(r: &BigRational) -> String {
    r.to_string()
}

/// Parses `"3"`, `"-7/4"`, `"1.63"` or `"2.5e-1"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = || ArithError::Parse(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if t.contains('/') {
        let r = BigRational::from_str(t).map_err(|_| err())?;
        return Ok(r);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    let scale = exponent - frac.len() as i32;
    let ten = int(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= pow(&ten, scale as u32);
    } else {
        r /= pow(&ten, (-scale) as u32);
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `serialize_with` adaptor writing a rational as its `num/den` string.
pub fn ser_fraction<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fraction_string(r))
}

pub(crate) fn is_positive(r: &BigRational) -> bool {
    r.is_positive() && !r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction_forms() {
        assert_eq!(parse_rational("1.63").unwrap(), rat(163, 100));
        assert_eq!(parse_rational("-7/4").unwrap(), rat(-7, 4));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational("2.5e-1").unwrap(), rat(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn fraction_strings_round_trip() {
        for r in [rat(1, 24), rat(-941, 48), int(17), int(0)] {
            let s = fraction_string(&r);
            assert_eq!(parse_rational(&s).unwrap(), r);
        }
    }

    #[test]
    fn float_conversion_matches_quotient() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert!((to_f64(&rat(941, 48)) - 19.604166666666668).abs() < 1e-15);
    }
}
