//! Exact rational helpers.
//!
//! Densities and thresholds are compared with integer cross-multiplication in
//! `i128`; floating point only appears in reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{input, Result};

pub use num_rational::Rational64 as Ratio;

/// Parses `"5/2"`, `"3"` or a finite decimal such as `"2.75"` exactly.
pub fn parse_ratio(text: &str) -> Result<Rational64> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num
            .trim()
            .parse()
            .map_err(|_| crate::Error::Input(format!("bad rational numerator in {text:?}")))?;
        let den: i64 = den
            .trim()
            .parse()
            .map_err(|_| crate::Error::Input(format!("bad rational denominator in {text:?}")))?;
        if den == 0 {
            return input(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational64::new(num, den));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.len() > 15 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return input(format!("unsupported decimal {text:?}"));
        }
        let negative = int_part.starts_with('-');
        let int_abs: i64 = int_part
            .trim_start_matches('-')
            .parse::<i64>()
            .or_else(|e| if int_part.trim_start_matches('-').is_empty() { Ok(0) } else { Err(e) })
            .map_err(|_| crate::Error::Input(format!("bad decimal {text:?}")))?;
        let scale = 10i64.pow(frac_part.len() as u32);
        let frac: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().unwrap_or(0) };
        let magnitude = int_abs
            .checked_mul(scale)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| crate::Error::Input(format!("decimal out of range {text:?}")))?;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational64::new(num, scale));
    }
    text.parse::<i64>()
        .map(Rational64::from_integer)
        .map_err(|_| crate::Error::Input(format!("not a rational number: {text:?}")))
}

pub fn format_ratio(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn to_big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// `⌈r⌉` for a rational.
pub fn ceil(r: &Rational64) -> i64 {
    r.numer().div_ceil(r.denom())
}

/// `⌊r⌋` for a rational.
pub fn floor(r: &Rational64) -> i64 {
    r.numer().div_floor(r.denom())
}

/// `count > ratio * size`, exactly.
pub fn gt_scaled(count: u64, ratio: &Rational64, size: u64) -> bool {
    (count as i128) * (*ratio.denom() as i128) > (*ratio.numer() as i128) * (size as i128)
}

/// `count >= ratio * size`, exactly.
pub fn ge_scaled(count: u64, ratio: &Rational64, size: u64) -> bool {
    (count as i128) * (*ratio.denom() as i128) >= (*ratio.numer() as i128) * (size as i128)
}

/// Average degree `2e/n` as an exact rational. `n` must be positive.
pub fn average_degree(edges: usize, vertices: usize) -> Rational64 {
    debug_assert!(vertices > 0);
    Rational64::new(2 * edges as i64, vertices as i64)
}

pub fn big_pow(base: &BigRational, exp: u64) -> BigRational {
    num_traits::pow::pow(base.clone(), exp as usize)
}

pub fn is_positive(r: &Rational64) -> bool {
    r.is_positive() && !r.is_zero()
}

/// Serializes a ratio as its `"p/q"` string.
pub fn serialize_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}
