//! Modular and integer arithmetic substrate.
//!
//! Polynomials over `Z_m` are stored with ascending coefficients
//! (`a_0` first) reduced into `[0, m)`. Signed representatives are produced
//! on demand by [`signed_residue`].

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// A polynomial over `Z_m` whose leading coefficient does not vanish mod `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolyMod {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl PolyMod {
    /// Builds `a_0 + a_1 X + ... + a_d X^d` mod `modulus` from signed
    /// coefficients. The last coefficient must be nonzero mod `modulus` and the
    /// degree must be at least one.
    pub fn new(modulus: u64, coeffs: &[i128]) -> Result<Self> {
        if modulus < 2 {
            return invalid(format!("modulus must be at least 2, got {modulus}"));
        }
        if coeffs.len() < 2 {
            return invalid("polynomial must have degree at least 1");
        }
        let coeffs: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(modulus as i128) as u64)
            .collect();
        if *coeffs.last().unwrap() == 0 {
            return invalid(format!("leading coefficient vanishes mod {modulus}"));
        }
        Ok(Self { modulus, coeffs })
    }

    /// Parses the shared `"c0,c1,...,cd"` coefficient format.
    pub fn parse(modulus: u64, s: &str) -> Result<Self> {
        Self::new(modulus, &parse_coeffs(s)?)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs[self.degree()]
    }

    /// `gcd(a_d, m) = 1`, the hypothesis under which the energy bounds apply.
    pub fn has_unit_leading(&self) -> bool {
        gcd(self.leading(), self.modulus) == 1
    }

    /// Horner evaluation reduced mod `m`.
    pub fn eval(&self, x: i128) -> u64 {
        let m = self.modulus as u128;
        let x = x.rem_euclid(self.modulus as i128) as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * x + c as u128) % m) as u64
    }

    /// Multiplies through by `a_d^{-1}` so the leading coefficient becomes 1.
    /// Returns the scaled polynomial and the inverse used.
    pub fn to_monic(&self) -> Option<(PolyMod, u64)> {
        let inv = mod_inv(self.leading(), self.modulus)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| mul_mod(c, inv, self.modulus))
            .collect();
        Some((
            PolyMod {
                modulus: self.modulus,
                coeffs,
            },
            inv,
        ))
    }
}

/// Parses a comma-separated ascending coefficient list such as `"0,0,1"`.
pub fn parse_coeffs(s: &str) -> Result<Vec<i128>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i128>()
                .map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {s:?}")))
        })
        .collect()
}

/// Parses a comma-separated list of integers.
pub fn parse_int_list(s: &str) -> Result<Vec<i128>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_coeffs(s)
}

/// The discrete interval `{1, ..., H}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    len: u64,
}

impl Interval {
    pub fn new(len: u64) -> Result<Self> {
        if len == 0 {
            return invalid("interval length must be at least 1");
        }
        Ok(Self { len })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        1..=self.len
    }

    /// Fails when the interval is longer than the modulus.
    pub fn check_fits(&self, modulus: u64) -> Result<()> {
        if self.len > modulus {
            return Err(Error::IntervalTooLong {
                len: self.len,
                modulus,
            });
        }
        Ok(())
    }
}

pub fn eval_poly(f: &PolyMod, x: i128) -> u64 {
    f.eval(x)
}

/// The deduplicated image `f(I)`, sorted ascending.
pub fn image_set(f: &PolyMod, interval: Interval) -> Result<Vec<u64>> {
    interval.check_fits(f.modulus())?;
    let mut v: Vec<u64> = interval.iter().map(|x| f.eval(x as i128)).collect();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Values `f(1), ..., f(H)` with multiplicity, in argument order.
pub fn values(f: &PolyMod, interval: Interval) -> Result<Vec<u64>> {
    interval.check_fits(f.modulus())?;
    Ok(interval.iter().map(|x| f.eval(x as i128)).collect())
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = 7u64;
    let mut i = 0;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += WHEEL[i];
        i = (i + 1) % WHEEL.len();
    }
    true
}

/// Gaps of the mod-30 wheel starting from 7.
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Prime factorization of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub value: i128,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Positive divisors of `|value|`, ascending.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial division with a 2·3·5 wheel; adequate up to about `10^12`.
pub fn factorize(value: i128) -> Result<Factorization> {
    if value == 0 {
        return invalid("cannot factor zero");
    }
    let mut n = value.unsigned_abs();
    let mut factors = Vec::new();
    let mut push = |p: u128, n: &mut u128| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2u128, 3, 5] {
        push(p, &mut n);
    }
    let mut d = 7u128;
    let mut i = 0;
    while d * d <= n {
        push(d, &mut n);
        d += WHEEL[i] as u128;
        i = (i + 1) % WHEEL.len();
    }
    if n > 1 {
        factors.push((n, 1));
    }
    Ok(Factorization { value, factors })
}

/// All ordered pairs `(d1, d2)` of integers of either sign with `d1 * d2 = w`.
/// There are exactly `2 τ(|w|)` of them.
pub fn divisor_pairs(w: i128) -> Result<Vec<(i128, i128)>> {
    if w == 0 {
        return invalid("divisor pairs of zero are not finite");
    }
    let divs = factorize(w)?.divisors();
    let mut out = Vec::with_capacity(2 * divs.len());
    for d in divs {
        let d = d as i128;
        out.push((d, w / d));
        out.push((-d, -(w / d)));
    }
    Ok(out)
}

/// Representative of `x mod m` in `(-m/2, m/2]`.
pub fn signed_residue(x: i128, m: u64) -> i128 {
    let m = m as i128;
    let r = x.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let e = num_integer::Integer::extended_gcd(&((a % m) as i128), &(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq7() -> PolyMod {
        PolyMod::parse(7, "0,0,1").unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_poly(&sq7(), 3), 2);
        assert_eq!(eval_poly(&sq7(), 0), 0);
        let f = PolyMod::parse(11, "0,1,0,2").unwrap();
        assert_eq!(eval_poly(&f, 2), 7);
        assert_eq!(eval_poly(&f, -9), 7);
    }

    #[test]
    fn image_examples() {
        assert_eq!(
            image_set(&sq7(), Interval::new(3).unwrap()).unwrap(),
            vec![1, 2, 4]
        );
        let id = PolyMod::parse(5, "0,1").unwrap();
        assert_eq!(
            image_set(&id, Interval::new(5).unwrap()).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        let sq2 = PolyMod::parse(2, "0,0,1").unwrap();
        assert_eq!(
            image_set(&sq2, Interval::new(2).unwrap()).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn interval_longer_than_modulus_is_rejected() {
        let err = image_set(&sq7(), Interval::new(8).unwrap()).unwrap_err();
        assert_eq!(err, Error::IntervalTooLong { len: 8, modulus: 7 });
    }

    #[test]
    fn poly_construction_errors() {
        assert!(PolyMod::new(1, &[0, 1]).is_err());
        assert!(PolyMod::new(7, &[3]).is_err());
        assert!(PolyMod::new(7, &[1, 7]).is_err());
        assert!(PolyMod::parse(7, "1,,2").is_err());
        let f = PolyMod::new(10, &[-1, 13]).unwrap();
        assert_eq!(f.coeffs(), &[9, 3]);
        assert!(f.has_unit_leading());
        assert!(!PolyMod::new(10, &[0, 4]).unwrap().has_unit_leading());
    }

    #[test]
    fn monic_normalization() {
        let f = PolyMod::new(11, &[5, 4, 3]).unwrap();
        let (g, inv) = f.to_monic().unwrap();
        assert_eq!(g.leading(), 1);
        for x in 0..11 {
            assert_eq!(g.eval(x), mul_mod(f.eval(x), inv, 11));
        }
        assert!(PolyMod::new(10, &[1, 2]).unwrap().to_monic().is_none());
    }

    #[test]
    fn primes_examples() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert!(primes_up_to(1).is_empty());
        assert!(primes_up_to(0).is_empty());
        let p30 = primes_up_to(30);
        assert_eq!(p30.len(), 10);
        assert_eq!(*p30.last().unwrap(), 29);
        for n in 0..2000u64 {
            assert_eq!(is_prime(n), primes_up_to(n).last() == Some(&n), "{n}");
        }
    }

    #[test]
    fn factorization_roundtrip() {
        for v in [
            1i128,
            -1,
            2,
            12,
            -360,
            999_983,
            1_000_000_007 * 3,
            600_851_475_143,
        ] {
            let f = factorize(v).unwrap();
            let prod: u128 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, v.unsigned_abs());
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
        assert!(factorize(0).is_err());
    }

    #[test]
    fn divisor_pair_examples() {
        let p8 = divisor_pairs(8).unwrap();
        assert_eq!(p8.len(), 8);
        assert!(p8.contains(&(2, 4)) && p8.contains(&(-2, -4)));
        assert_eq!(divisor_pairs(1).unwrap(), vec![(1, 1), (-1, -1)]);
        let m6 = divisor_pairs(-6).unwrap();
        assert_eq!(m6.len(), 8);
        assert!(m6.contains(&(2, -3)));
        assert!(divisor_pairs(0).is_err());
    }

    #[test]
    fn divisor_pairs_match_trial_division() {
        for w in (-3000i128..=3000).filter(|&w| w != 0) {
            let mut fast = divisor_pairs(w).unwrap();
            let mut slow: Vec<(i128, i128)> = (-w.abs()..=w.abs())
                .filter(|&d| d != 0 && w % d == 0)
                .map(|d| (d, w / d))
                .collect();
            fast.sort_unstable();
            slow.sort_unstable();
            assert_eq!(fast, slow, "w = {w}");
        }
    }

    #[test]
    fn signed_residues() {
        assert_eq!(signed_residue(6, 7), -1);
        assert_eq!(signed_residue(3, 7), 3);
        assert_eq!(signed_residue(4, 7), -3);
        assert_eq!(signed_residue(5, 10), 5);
        assert_eq!(signed_residue(-12, 10), -2);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(4, 8), None);
        assert_eq!(pow_mod(2, 10, 1000), 24);
        assert_eq!(pow_mod(5, 0, 1), 0);
    }
}
