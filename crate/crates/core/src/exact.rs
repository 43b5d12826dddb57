//! Exact rational and integer-root helpers shared by the reports.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

/// `num/den` in lowest terms, denominator always printed.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b`, a plain integer, or a finite decimal such as `0.125`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidConfig(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let a: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(a))
}

pub fn serialize_ratio<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

pub fn serialize_opt_ratio<S: Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&ratio_string(r)),
        None => s.serialize_none(),
    }
}

pub fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    // numerator and denominator can exceed f64 range separately
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    let sh = shift.max(0) as usize;
    let n = (r.numer().abs() >> sh).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> sh).to_f64().unwrap_or(1.0);
    let v = n / d;
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Largest integer `m` with `m^den <= base^num` (exact; `den >= 1`).
pub fn floor_root_of_power(base: u64, num: u32, den: u32) -> u64 {
    assert!(den >= 1, "root index must be positive");
    let target = num_traits::pow(BigUint::from(base), num as usize);
    let fits = |m: u64| num_traits::pow(BigUint::from(m), den as usize) <= target;
    // first guess from floating point, then repair in both directions
    let guess = ((base as f64).ln() * num as f64 / den as f64).exp();
    let mut m = if guess.is_finite() && guess < 1.8e19 { guess as u64 } else { 1 };
    while m > 0 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u32) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}
