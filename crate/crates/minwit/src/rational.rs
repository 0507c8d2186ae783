//! Exact rational arithmetic helpers.
//!
//! Witness weights, normalization constants and thresholds are stored as
//! arbitrary-precision rationals so that published integer weight vectors
//! are reproduced identically rather than as floating-point approximations.
//! This module provides the small amount of glue the crate needs on top of
//! [`num::BigRational`]: canonical `"p/q"` text, parsing, and conversion to
//! `f64` for reporting.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used for weights, bounds and thresholds.
pub type Rat = BigRational;

/// Builds a rational from an integer numerator and denominator.
///
/// # Panics
/// Panics if `den` is zero; callers only use literal denominators.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "rational denominator must be nonzero");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    BigRational::from_integer(BigInt::from(num))
}

/// Formats a rational in the canonical `"p/q"` form used in JSON output,
/// e.g. `"4/1"` or `"7/11"`. The sign lives on the numerator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses a rational from `"p/q"` or plain integer text.
///
/// Rejects empty input, zero denominators and non-numeric content.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational"));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::parse(format!("invalid rational numerator {num_str:?}")))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| Error::parse(format!("invalid rational denominator {den_str:?}")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in rational {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Converts a rational to `f64` for reports and plots.
///
/// Falls back to numerator/denominator division if the direct conversion
/// overflows (never the case for the magnitudes this crate produces).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Finds the simplest rational within `tol` of `x` with denominator at most
/// `max_den`, via continued-fraction convergents.
///
/// Squared target correlations reach the weight optimizer as `f64` values
/// like `0.4444…`; snapping them back to `4/9` keeps the exact LP exact, so
/// published integer weight vectors come out verbatim. Returns `None` when
/// no small-denominator rational fits (callers then fall back to the exact
/// binary representation of the float).
pub fn approx_rat(x: f64, max_den: u64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let x = x.abs();
    let (mut p0, mut q0) = (BigInt::from(0), BigInt::from(1));
    let (mut p1, mut q1) = (BigInt::from(1), BigInt::from(0));
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            return None;
        }
        let ab = BigInt::from(a as i64);
        let p2 = &ab * &p1 + &p0;
        let q2 = &ab * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            return None;
        }
        let approx = p2.to_f64().unwrap_or(f64::NAN) / q2.to_f64().unwrap_or(f64::NAN);
        if (approx - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(sign) * p2, q2));
        }
        let frac = v - a;
        if frac < f64::EPSILON {
            return None;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        v = frac.recip();
    }
    None
}

/// Rescales `values` so the smallest strictly positive entry becomes one.
///
/// Returns `None` when every entry is zero (degenerate weight vectors are
/// handled by the caller).
pub fn scale_min_to_one(values: &[Rat]) -> Option<Vec<Rat>> {
    let min = values
        .iter()
        .filter(|v| v.is_positive())
        .min()
        .cloned()?;
    if min.is_one() {
        return Some(values.to_vec());
    }
    Some(values.iter().map(|v| v / &min).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_canonical_fraction() {
        assert_eq!(rat_to_string(&rat(4, 1)), "4/1");
        assert_eq!(rat_to_string(&rat(7, 11)), "7/11");
        assert_eq!(rat_to_string(&rat(-1, 2)), "-1/2");
        assert_eq!(rat_to_string(&rat(2, 4)), "1/2");
    }

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!(rat_from_string("7/11").unwrap(), rat(7, 11));
        assert_eq!(rat_from_string("4").unwrap(), rat_int(4));
        assert_eq!(rat_from_string(" -3 / 6 ").unwrap(), rat(-1, 2));
        assert!(rat_from_string("1/0").is_err());
        assert!(rat_from_string("").is_err());
        assert!(rat_from_string("x/2").is_err());
    }

    #[test]
    fn scales_minimum_to_one() {
        let scaled = scale_min_to_one(&[rat(1, 11), rat(4, 11)]).unwrap();
        assert_eq!(scaled, vec![rat_int(1), rat_int(4)]);
        assert!(scale_min_to_one(&[rat_int(0)]).is_none());
    }

    #[test]
    fn snaps_floats_to_simple_fractions() {
        assert_eq!(approx_rat(4.0 / 9.0, 1_000_000, 1e-9).unwrap(), rat(4, 9));
        assert_eq!(approx_rat(1.0, 1_000_000, 1e-9).unwrap(), rat_int(1));
        assert_eq!(approx_rat(-0.25, 1_000_000, 1e-9).unwrap(), rat(-1, 4));
        assert_eq!(approx_rat(0.0, 1_000_000, 1e-9).unwrap(), rat_int(0));
        // Irrational-looking values with no small denominator are rejected.
        assert!(approx_rat(std::f64::consts::FRAC_1_SQRT_2, 1000, 1e-12).is_none());
        assert!(approx_rat(f64::NAN, 1000, 1e-9).is_none());
    }
}
