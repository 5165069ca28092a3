//! Exact counts for Vinogradov-type systems.
//!
//! `J_{d,s}(X)` counts `2s`-tuples from `X` with
//! `x_1^j + ... + x_s^j = x_{s+1}^j + ... + x_{2s}^j` for `j = 1..d`. Every
//! count here is meet-in-the-middle: the `s`-tuples are enumerated once, keyed
//! by their power-sum vector, and the histogram is squared (or correlated
//! against a shift for the inhomogeneous count).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ring::{values, Interval, PolyMod};

/// Default ceiling on the number of hashed tuples (or convolution steps).
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// `(Σ x_i, Σ x_i^2, ..., Σ x_i^d)` for a tuple, as exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PowerSumVector {
    #[serde(serialize_with = "serialize_bigints")]
    pub components: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for b in v {
        seq.serialize_element(&b.to_string())?;
    }
    seq.end()
}

impl PowerSumVector {
    pub fn of(xs: &[i64], d: usize) -> Self {
        let components = (1..=d)
            .map(|j| {
                xs.iter()
                    .map(|&x| num_traits::pow(BigInt::from(x), j))
                    .sum()
            })
            .collect();
        Self { components }
    }

    pub fn degree(&self) -> usize {
        self.components.len()
    }
}

/// How power-sum vectors are turned into hash keys.
///
/// When every component range fits, the vector is packed into one `u128`
/// by mixed radix; otherwise the components are kept as big integers.
#[derive(Debug, Clone)]
enum KeyScheme {
    Packed {
        offsets: Vec<i128>,
        radices: Vec<u128>,
    },
    Big,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Packed(u128),
    Big(Vec<BigInt>),
}

impl KeyScheme {
    fn for_set(set: &[i64], d: usize, s: usize) -> Self {
        let mut offsets = Vec::with_capacity(d);
        let mut radices = Vec::with_capacity(d);
        let mut total: u128 = 1;
        for j in 1..=d as u32 {
            let pows: Option<Vec<i128>> = set.iter().map(|&x| (x as i128).checked_pow(j)).collect();
            let Some(pows) = pows else {
                return KeyScheme::Big;
            };
            let lo = *pows.iter().min().unwrap();
            let hi = *pows.iter().max().unwrap();
            let span = hi
                .checked_sub(lo)
                .and_then(|w| w.checked_mul(s as i128))
                .and_then(|w| w.checked_add(1));
            let Some(span) = span else {
                return KeyScheme::Big;
            };
            let Some(next) = total.checked_mul(span as u128) else {
                return KeyScheme::Big;
            };
            let Some(off) = lo.checked_mul(s as i128) else {
                return KeyScheme::Big;
            };
            total = next;
            offsets.push(off);
            radices.push(span as u128);
        }
        KeyScheme::Packed { offsets, radices }
    }
}

/// Histogram of power-sum vectors of `s`-tuples from `set`, keyed by scheme.
fn tuple_histogram(set: &[i64], d: usize, s: usize, scheme: &KeyScheme) -> HashMap<Key, u64> {
    (0..set.len())
        .into_par_iter()
        .map(|first| {
            let mut hist = HashMap::new();
            let mut stack = vec![first];
            collect_tuples(set, d, s, scheme, &mut stack, &mut hist);
            hist
        })
        .reduce(HashMap::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            for (k, v) in small {
                *big.entry(k).or_insert(0) += v;
            }
            big
        })
}

fn collect_tuples(
    set: &[i64],
    d: usize,
    s: usize,
    scheme: &KeyScheme,
    stack: &mut Vec<usize>,
    hist: &mut HashMap<Key, u64>,
) {
    if stack.len() == s {
        let key = key_of(set, stack, d, scheme);
        *hist.entry(key).or_insert(0) += 1;
        return;
    }
    for i in 0..set.len() {
        stack.push(i);
        collect_tuples(set, d, s, scheme, stack, hist);
        stack.pop();
    }
}

fn key_of(set: &[i64], idx: &[usize], d: usize, scheme: &KeyScheme) -> Key {
    match scheme {
        KeyScheme::Packed { offsets, radices } => {
            let mut key: u128 = 0;
            for j in (0..d).rev() {
                let e = j as u32 + 1;
                let sum: i128 = idx.iter().map(|&i| (set[i] as i128).pow(e)).sum();
                key = key * radices[j] + (sum - offsets[j]) as u128;
            }
            Key::Packed(key)
        }
        KeyScheme::Big => {
            let xs: Vec<i64> = idx.iter().map(|&i| set[i]).collect();
            Key::Big(PowerSumVector::of(&xs, d).components)
        }
    }
}

fn check_budget(size: usize, s: usize, budget: u128) -> Result<()> {
    let needed = (size as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget {
            what: "s-tuple enumeration",
            needed,
            budget,
        });
    }
    Ok(())
}

fn normalize_set(set: &[i64]) -> Result<Vec<i64>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return invalid("the variable set must be nonempty");
    }
    Ok(v)
}

fn check_ds(d: usize, s: usize) -> Result<()> {
    if d == 0 || s == 0 {
        return invalid("d and s must both be at least 1");
    }
    Ok(())
}

/// `J_{d,s}(X)` with the default budget.
pub fn count_j(d: usize, s: usize, set: &[i64]) -> Result<u128> {
    count_j_with_budget(d, s, set, DEFAULT_BUDGET)
}

pub fn count_j_with_budget(d: usize, s: usize, set: &[i64], budget: u128) -> Result<u128> {
    check_ds(d, s)?;
    let set = normalize_set(set)?;
    check_budget(set.len(), s, budget)?;
    let scheme = KeyScheme::for_set(&set, d, s);
    let hist = tuple_histogram(&set, d, s, &scheme);
    Ok(hist.values().map(|&c| c as u128 * c as u128).sum())
}

/// `I_{d,s}(λ; H)`: solutions in `[1, H]` of
/// `x_1^j + ... + x_s^j - x_{s+1}^j - ... - x_{2s}^j = λ_j`, `j = 1..d`.
pub fn count_i(d: usize, s: usize, h: u64, lambda: &[i128]) -> Result<u128> {
    count_i_with_budget(d, s, h, lambda, DEFAULT_BUDGET)
}

pub fn count_i_with_budget(
    d: usize,
    s: usize,
    h: u64,
    lambda: &[i128],
    budget: u128,
) -> Result<u128> {
    check_ds(d, s)?;
    if lambda.len() != d {
        return invalid(format!("λ must have length d = {d}, got {}", lambda.len()));
    }
    if h == 0 {
        return invalid("H must be at least 1");
    }
    for (j, &l) in lambda.iter().enumerate() {
        let cap =
            (s as i128).checked_mul((h as i128).checked_pow(j as u32 + 1).unwrap_or(i128::MAX));
        if let Some(cap) = cap {
            if l.abs() > cap {
                // no tuple can reach this shift
                return Ok(0);
            }
        }
    }
    let set: Vec<i64> = (1..=h as i64).collect();
    check_budget(set.len(), s, budget)?;
    // Big keys make the shifted lookup straightforward.
    let scheme = KeyScheme::Big;
    let hist = tuple_histogram(&set, d, s, &scheme);
    let shift: Vec<BigInt> = lambda.iter().map(|&l| BigInt::from(l)).collect();
    let mut total: u128 = 0;
    for (key, &c) in &hist {
        let Key::Big(v) = key else { unreachable!() };
        let target: Vec<BigInt> = v.iter().zip(&shift).map(|(a, b)| a - b).collect();
        if let Some(&c2) = hist.get(&Key::Big(target)) {
            total += c as u128 * c2 as u128;
        }
    }
    Ok(total)
}

/// `T_s`: solutions in `I` of `f(x_1)+...+f(x_s) ≡ f(x_{s+1})+...+f(x_{2s}) (mod m)`,
/// via the `s`-fold convolution of the value histogram.
pub fn count_ts(f: &PolyMod, interval: Interval, s: usize) -> Result<u128> {
    count_ts_with_budget(f, interval, s, DEFAULT_BUDGET)
}

pub fn count_ts_with_budget(
    f: &PolyMod,
    interval: Interval,
    s: usize,
    budget: u128,
) -> Result<u128> {
    if s == 0 {
        return invalid("s must be at least 1");
    }
    let m = f.modulus();
    let mut base: HashMap<u64, u128> = HashMap::new();
    for v in values(f, interval)? {
        *base.entry(v).or_insert(0) += 1;
    }
    let distinct = base.len() as u128;
    let mut needed: u128 = 0;
    let mut support: u128 = distinct;
    for _ in 1..s {
        needed = needed.saturating_add(support.saturating_mul(distinct));
        support = support.saturating_mul(distinct).min(m as u128);
    }
    if needed > budget {
        return Err(Error::Budget {
            what: "s-fold convolution",
            needed,
            budget,
        });
    }
    let mut dist = base.clone();
    for _ in 1..s {
        let mut next: HashMap<u64, u128> = HashMap::with_capacity(dist.len().min(m as usize));
        for (&u, &cu) in &dist {
            for (&v, &cv) in &base {
                let key = ((u as u128 + v as u128) % m as u128) as u64;
                *next.entry(key).or_insert(0) += cu * cv;
            }
        }
        dist = next;
    }
    Ok(dist.values().map(|&c| c * c).sum())
}

/// `J_{d,s}(X) / (#X)^s` at `s = d(d+1)/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JBoundRecord {
    pub d: usize,
    pub s: usize,
    pub size: usize,
    pub count: u128,
    pub ratio: f64,
}

pub fn check_j_bound(d: usize, set: &[i64]) -> Result<JBoundRecord> {
    check_j_bound_with_budget(d, set, DEFAULT_BUDGET)
}

pub fn check_j_bound_with_budget(d: usize, set: &[i64], budget: u128) -> Result<JBoundRecord> {
    let s = d * (d + 1) / 2;
    let norm = normalize_set(set)?;
    let count = count_j_with_budget(d, s, &norm, budget)?;
    let denom = (norm.len() as f64).powi(s as i32);
    Ok(JBoundRecord {
        d,
        s,
        size: norm.len(),
        count,
        ratio: count.to_f64().unwrap_or(f64::INFINITY) / denom,
    })
}

/// Ratios for `X = [1, H]` over a sweep of `H`, plus the least-squares slope
/// of `log(J / H^s)` against `log H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JSweep {
    pub records: Vec<JBoundRecord>,
    pub slope: Option<f64>,
}

pub fn j_bound_sweep(d: usize, heights: &[u64], budget: u128) -> Result<JSweep> {
    let mut records = Vec::with_capacity(heights.len());
    for &h in heights {
        let set: Vec<i64> = (1..=h as i64).collect();
        records.push(check_j_bound_with_budget(d, &set, budget)?);
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| ((r.size as f64).ln(), r.ratio.ln()))
        .collect();
    Ok(JSweep {
        slope: crate::stats::least_squares_slope(&pts),
        records,
    })
}

pub fn power_sums(xs: &[i64], d: usize) -> PowerSumVector {
    PowerSumVector::of(xs, d)
}

/// Whether `count` is at least the diagonal floor `(#X)^s`.
pub fn exceeds_diagonal_floor(count: u128, size: usize, s: usize) -> bool {
    let floor = (size as u128).checked_pow(s as u32);
    floor.is_some_and(|f| count >= f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn naive_j(d: usize, s: usize, set: &[i64]) -> u128 {
        let n = set.len();
        let total = n.pow(2 * s as u32);
        let mut count = 0;
        for code in 0..total {
            let mut c = code;
            let mut idx = Vec::with_capacity(2 * s);
            for _ in 0..2 * s {
                idx.push(set[c % n]);
                c /= n;
            }
            let ok = (1..=d as u32).all(|j| {
                let l: i128 = idx[..s].iter().map(|&x| (x as i128).pow(j)).sum();
                let r: i128 = idx[s..].iter().map(|&x| (x as i128).pow(j)).sum();
                l == r
            });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn j_examples() {
        assert_eq!(count_j(2, 1, &[3, 5, 9]).unwrap(), 3);
        assert_eq!(naive_j(2, 2, &[1, 2]), 6);
        assert_eq!(count_j(2, 2, &[1, 2]).unwrap(), 6);
        assert_eq!(naive_j(2, 2, &[1, 2, 3, 4]), 28);
        assert_eq!(count_j(2, 2, &[1, 2, 3, 4]).unwrap(), 28);
    }

    #[test]
    fn j_matches_naive_small_grid() {
        for d in 1..=3 {
            for s in 1..=3 {
                for h in 1..=5i64 {
                    let set: Vec<i64> = (1..=h).collect();
                    if (h as u64).pow(2 * s as u32) > 1_000_000 {
                        continue;
                    }
                    assert_eq!(
                        count_j(d, s, &set).unwrap(),
                        naive_j(d, s, &set),
                        "d={d} s={s} h={h}"
                    );
                }
            }
        }
    }

    #[test]
    fn big_key_path_agrees_with_packed() {
        let set = [1i64, 2, 5, 7];
        let packed = KeyScheme::for_set(&set, 3, 2);
        assert!(matches!(packed, KeyScheme::Packed { .. }));
        let a: u128 = tuple_histogram(&set, 3, 2, &packed)
            .values()
            .map(|&c| (c as u128).pow(2))
            .sum();
        let b: u128 = tuple_histogram(&set, 3, 2, &KeyScheme::Big)
            .values()
            .map(|&c| (c as u128).pow(2))
            .sum();
        assert_eq!(a, b);
    }

    #[test]
    fn huge_values_escalate_to_big_keys() {
        let set = [1i64 << 40, (1i64 << 40) + 1, 3];
        let scheme = KeyScheme::for_set(&set, 4, 2);
        assert!(matches!(scheme, KeyScheme::Big));
        // x1 + x2 and squares determine the multiset, so J = 3 + 3 * 4.
        assert_eq!(count_j(4, 2, &set).unwrap(), 15);
    }

    #[test]
    fn i_examples() {
        assert_eq!(count_i(2, 1, 3, &[1, 3]).unwrap(), 1);
        assert_eq!(count_i(2, 1, 3, &[0, 1]).unwrap(), 0);
        let set: Vec<i64> = (1..=5).collect();
        assert_eq!(
            count_i(2, 2, 5, &[0, 0]).unwrap(),
            count_j(2, 2, &set).unwrap()
        );
        assert_eq!(count_i(2, 2, 5, &[100, 0]).unwrap(), 0);
        assert!(count_i(2, 2, 5, &[0]).is_err());
    }

    #[test]
    fn ts_examples() {
        let f = PolyMod::parse(7, "0,0,1").unwrap();
        assert_eq!(count_ts(&f, Interval::new(2).unwrap(), 3).unwrap(), 20);
        let i3 = Interval::new(3).unwrap();
        assert_eq!(
            count_ts(&f, i3, 2).unwrap(),
            crate::energy::energy_t(&f, i3).unwrap()
        );
        assert!(count_ts(&f, i3, 1).unwrap() >= 3);
    }

    #[test]
    fn budget_guard() {
        let set: Vec<i64> = (1..=100).collect();
        let err = count_j_with_budget(2, 3, &set, 1000).unwrap_err();
        assert!(matches!(
            err,
            Error::Budget {
                needed: 1_000_000,
                ..
            }
        ));
        let f = PolyMod::parse(1_000_003, "0,0,1").unwrap();
        assert!(count_ts_with_budget(&f, Interval::new(100).unwrap(), 4, 1000).is_err());
    }

    #[test]
    fn bound_records() {
        let one = check_j_bound(2, &[4]).unwrap();
        assert_eq!(one.ratio, 1.0);
        let r = check_j_bound(2, &(1..=6).collect::<Vec<_>>()).unwrap();
        assert_eq!(r.s, 3);
        assert!(r.ratio.is_finite() && r.ratio >= 1.0);
        let sweep = j_bound_sweep(2, &[4, 8, 16], DEFAULT_BUDGET).unwrap();
        assert_eq!(sweep.records.len(), 3);
        assert!(sweep.slope.unwrap().is_finite());
    }

    #[test]
    fn power_sum_vector() {
        let v = power_sums(&[1, 2, 3], 3);
        assert_eq!(
            v.components,
            vec![BigInt::from(6), BigInt::from(14), BigInt::from(36)]
        );
        assert!(!v.components.iter().any(|c| c.is_zero()));
    }
}
