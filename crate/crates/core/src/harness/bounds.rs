//! Closed-form energy bounds with every `o(1)` exponent set to zero.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rational::{self, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    pub d: usize,
    /// `2/(d^2 + d - 2)`.
    #[serde(serialize_with = "rational::serialize")]
    pub alpha: Rational,
    /// `2/(d + 2)`.
    #[serde(serialize_with = "rational::serialize")]
    pub beta: Rational,
}

pub fn alpha_beta(d: usize) -> Result<BoundParams> {
    if d < 2 {
        return invalid("degree must be at least 2");
    }
    let d = d as i128;
    Ok(BoundParams {
        d: d as usize,
        alpha: rat(2, d * d + d - 2),
        beta: rat(2, d + 2),
    })
}

fn check_range(m: u64, h: u64) -> Result<()> {
    if h == 0 || h > m {
        return invalid(format!("need 1 <= H <= m, got H = {h}, m = {m}"));
    }
    Ok(())
}

/// `2/(d(d+1))` as a float.
fn short_exponent(d: usize) -> f64 {
    2.0 / (d * (d + 1)) as f64
}

/// `H^3 min((m/H)^{-α}, H^{-β})`.
pub fn general_bound(d: usize, m: u64, h: u64) -> Result<f64> {
    check_range(m, h)?;
    let p = alpha_beta(d)?;
    let (a, b) = (rational::to_f64(&p.alpha), rational::to_f64(&p.beta));
    let (lm, lh) = ((m as f64).ln(), (h as f64).ln());
    let e = 3.0 * lh + (-a * (lm - lh)).min(-b * lh);
    Ok(e.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortBound {
    /// `H^4 / m^{4/(d(d+1))} + H^2`.
    pub value: f64,
    /// `m^{2/(d(d+1))}`, where the two terms are equal.
    pub crossover: f64,
    /// `H^{d(d+1)/2} <= m`, decided exactly.
    pub below_crossover: bool,
}

pub fn short_bound(d: usize, m: u64, h: u64) -> Result<ShortBound> {
    check_range(m, h)?;
    if d < 2 {
        return invalid("degree must be at least 2");
    }
    let e = short_exponent(d);
    let (mf, hf) = (m as f64, h as f64);
    Ok(ShortBound {
        value: hf.powi(4) / mf.powf(2.0 * e) + hf * hf,
        crossover: mf.powf(e),
        below_crossover: below_crossover(d, m, h),
    })
}

/// `H <= m^{2/(d(d+1))}` in exact integer arithmetic.
pub fn below_crossover(d: usize, m: u64, h: u64) -> bool {
    let s = (d * (d + 1) / 2) as u32;
    num_bigint::BigUint::from(h).pow(s) <= num_bigint::BigUint::from(m)
}

/// `H^2 Z^2 / m^{2/(d(d+1))} + Z(H + Z)`.
pub fn cross_bound(d: usize, m: u64, h: u64, z: u64) -> Result<f64> {
    if z == 0 || h == 0 || m == 0 {
        return invalid("H, Z and m must be positive");
    }
    if d < 2 {
        return invalid("degree must be at least 2");
    }
    let (mf, hf, zf) = (m as f64, h as f64, z as f64);
    Ok(hf * hf * zf * zf / mf.powf(short_exponent(d)) + zf * (hf + zf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn exponents() {
        let p = alpha_beta(2).unwrap();
        assert_eq!((p.alpha, p.beta), (rat(1, 2), rat(1, 2)));
        let p = alpha_beta(3).unwrap();
        assert_eq!((p.alpha, p.beta), (rat(1, 5), rat(2, 5)));
        let mut last = rat(1, 1);
        for d in 2..20 {
            let p = alpha_beta(d).unwrap();
            assert!(p.alpha < last && p.alpha <= p.beta);
            last = p.alpha;
        }
        assert!(alpha_beta(1).is_err());
    }

    #[test]
    fn general_bound_values() {
        // at m = H the second branch H^{-β} is the smaller one
        assert!(rel(general_bound(2, 50, 50).unwrap(), 50f64.powf(2.5)) < 1e-12);
        assert!(
            rel(
                general_bound(2, 1 << 20, 1 << 10).unwrap(),
                (1u64 << 25) as f64
            ) < 1e-12
        );
        let mut prev = 0.0;
        for h in 1..=1000 {
            let b = general_bound(3, 1000, h).unwrap();
            assert!(b >= prev);
            prev = b;
        }
        assert!(general_bound(2, 10, 11).is_err());
    }

    #[test]
    fn short_bound_values() {
        let b = short_bound(2, 729, 9).unwrap();
        assert!(rel(b.value, 162.0) < 1e-12);
        assert!(rel(b.crossover, 9.0) < 1e-12);
        assert!(b.below_crossover);
        assert!(!short_bound(2, 729, 10).unwrap().below_crossover);
        let one = short_bound(3, 10_000, 1).unwrap();
        assert!((one.value - 1.0).abs() < 0.1);
    }

    #[test]
    fn cross_bound_values() {
        assert!(rel(cross_bound(2, 64, 4, 4).unwrap(), 96.0) < 1e-12);
        let z1 = cross_bound(3, 1000, 7, 1).unwrap();
        assert!(rel(z1, 49.0 / 1000f64.powf(1.0 / 6.0) + 8.0) < 1e-12);
        for z in 1..50 {
            assert!(
                cross_bound(2, 500, 9, 2 * z).unwrap() <= 4.0 * cross_bound(2, 500, 9, z).unwrap()
            );
        }
    }
}
