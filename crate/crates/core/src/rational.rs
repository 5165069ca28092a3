//! Exact rational helpers shared by the lattice, region and bound code.
//!
//! Rationals cross the JSON boundary as `"p/q"` strings (or `"p"` when the
//! denominator is one).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i128, q: i128) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i128) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn to_f64(r: &Rational) -> f64 {
    // Go through the ratio of floats only when both sides fit; otherwise
    // shift both down together.
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.29"` into an
/// exact rational.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(numer, denom);
        return Ok(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub(crate) fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub(crate) fn serialize_vec<S: Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&format(r))?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse("3/10").unwrap(), rat(3, 10));
        assert_eq!(parse("0.29").unwrap(), rat(29, 100));
        assert_eq!(parse("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse(".").is_err());
    }

    #[test]
    fn formats() {
        assert_eq!(format(&rat(6, 4)), "3/2");
        assert_eq!(format(&int(-2)), "-2");
    }

    #[test]
    fn float_conversion_of_huge_values() {
        let big = BigRational::new(
            num_traits::pow(BigInt::from(10), 400),
            BigInt::from(3) * num_traits::pow(BigInt::from(10), 399),
        );
        assert!((to_f64(&big) - 10.0 / 3.0).abs() < 1e-12);
    }
}
