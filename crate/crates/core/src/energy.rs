//! Additive and multiplicative energies of polynomial images over `Z_m`.
//!
//! `T` counts quadruples of *arguments* in the interval, so repeated values
//! are counted with multiplicity. `E+` and `Ex` count quadruples of *values*
//! in the deduplicated image set. All counts go through histograms of pair
//! sums (or products); the quadruple loops live in the tests as oracles.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::rational::{self, Rational};
use crate::ring::{image_set, values, Interval, PolyMod};

/// A finite map from residues to representation counts. Absent keys are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepFunction {
    pub modulus: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl RepFunction {
    pub fn get(&self, value: u64) -> u64 {
        self.counts
            .get(&(value % self.modulus))
            .copied()
            .unwrap_or(0)
    }

    /// Total mass, i.e. the number of enumerated pairs.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ_λ r(λ)^2`.
    pub fn square_sum(&self) -> u128 {
        self.counts.values().map(|&c| c as u128 * c as u128).sum()
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepMode {
    PairSum,
    PairDifference,
}

fn multiplicities(vals: &[u64]) -> HashMap<u64, u64> {
    let mut h = HashMap::with_capacity(vals.len());
    for &v in vals {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

/// Histogram of `op(u, v)` over ordered pairs drawn from a weighted value set.
fn pair_histogram(
    weighted: &HashMap<u64, u64>,
    modulus: u64,
    op: impl Fn(u64, u64) -> u64,
) -> HashMap<u64, u64> {
    let entries: Vec<(u64, u64)> = weighted.iter().map(|(&k, &v)| (k, v)).collect();
    let mut hist: HashMap<u64, u64> =
        HashMap::with_capacity((entries.len() * entries.len()).min(modulus as usize));
    for &(u, cu) in &entries {
        for &(v, cv) in &entries {
            *hist.entry(op(u, v)).or_insert(0) += cu * cv;
        }
    }
    hist
}

fn square_sum(hist: &HashMap<u64, u64>) -> u128 {
    hist.values().map(|&c| c as u128 * c as u128).sum()
}

fn add_mod(m: u64) -> impl Fn(u64, u64) -> u64 {
    move |u, v| ((u as u128 + v as u128) % m as u128) as u64
}

fn sub_mod(m: u64) -> impl Fn(u64, u64) -> u64 {
    move |u, v| ((u as u128 + m as u128 - v as u128) % m as u128) as u64
}

fn mul_mod(m: u64) -> impl Fn(u64, u64) -> u64 {
    move |u, v| ((u as u128 * v as u128) % m as u128) as u64
}

/// Representation function of `f(x) ± f(y)` over `(x, y) ∈ I^2`.
pub fn rep_function(f: &PolyMod, interval: Interval, mode: RepMode) -> Result<RepFunction> {
    let m = f.modulus();
    let mult = multiplicities(&values(f, interval)?);
    let hist = match mode {
        RepMode::PairSum => pair_histogram(&mult, m, add_mod(m)),
        RepMode::PairDifference => pair_histogram(&mult, m, sub_mod(m)),
    };
    Ok(RepFunction {
        modulus: m,
        counts: hist.into_iter().collect(),
    })
}

/// `T_{f,m}(I)`: quadruples `(x, y, z, w) ∈ I^4` with
/// `f(x) + f(y) ≡ f(z) + f(w) (mod m)`, computed as `Σ_λ R(λ)^2`.
pub fn energy_t(f: &PolyMod, interval: Interval) -> Result<u128> {
    let m = f.modulus();
    let mult = multiplicities(&values(f, interval)?);
    Ok(square_sum(&pair_histogram(&mult, m, add_mod(m))))
}

fn unit_weights(set: &[u64]) -> HashMap<u64, u64> {
    set.iter().map(|&v| (v, 1)).collect()
}

/// `E+` of the image set `f(I)`.
pub fn energy_plus(f: &PolyMod, interval: Interval) -> Result<u128> {
    let m = f.modulus();
    let img = image_set(f, interval)?;
    Ok(square_sum(&pair_histogram(
        &unit_weights(&img),
        m,
        add_mod(m),
    )))
}

/// `Ex` of the image set `f(I)`, products taken mod `m`.
pub fn energy_times(f: &PolyMod, interval: Interval) -> Result<u128> {
    let m = f.modulus();
    let img = image_set(f, interval)?;
    Ok(energy_times_of_set(&img, m))
}

/// Multiplicative energy of an arbitrary residue set.
pub fn energy_times_of_set(set: &[u64], modulus: u64) -> u128 {
    let set = dedup_mod(set, modulus);
    square_sum(&pair_histogram(
        &unit_weights(&set),
        modulus,
        mul_mod(modulus),
    ))
}

/// Additive energy `E(A)` of an arbitrary residue set.
pub fn energy_plus_of_set(set: &[u64], modulus: u64) -> u128 {
    energy_cross(set, set, modulus)
}

fn dedup_mod(set: &[u64], modulus: u64) -> Vec<u64> {
    let mut v: Vec<u64> = set.iter().map(|&x| x % modulus).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `E(A, B) = #{a1 + b1 = a2 + b2}` in `Z_m`.
pub fn energy_cross(a: &[u64], b: &[u64], modulus: u64) -> u128 {
    let a = dedup_mod(a, modulus);
    let b = dedup_mod(b, modulus);
    let mut hist: HashMap<u64, u64> = HashMap::new();
    for &x in &a {
        for &y in &b {
            *hist
                .entry(((x as u128 + y as u128) % modulus as u128) as u64)
                .or_insert(0) += 1;
        }
    }
    square_sum(&hist)
}

/// `#(f(I) + f(I))`.
pub fn sumset_size(f: &PolyMod, interval: Interval) -> Result<u64> {
    let m = f.modulus();
    let img = image_set(f, interval)?;
    Ok(pair_histogram(&unit_weights(&img), m, add_mod(m)).len() as u64)
}

/// All four energy quantities of one `(f, I)` instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub modulus: u64,
    pub degree: usize,
    pub len: u64,
    pub t: u128,
    pub e_plus: u128,
    pub e_times: u128,
    /// `K = H^3 / T`, exact.
    #[serde(serialize_with = "rational::serialize")]
    pub k: Rational,
    pub sumset_size: u64,
    pub image_size: usize,
}

impl EnergyReport {
    /// `H^4 <= #(f(I)+f(I)) · T`.
    pub fn cauchy_schwarz_holds(&self) -> bool {
        let h = self.len as u128;
        h.pow(4) <= self.sumset_size as u128 * self.t
    }

    /// `#(f(I)+f(I)) >= H K`, which is the same inequality rearranged.
    pub fn sumset_lower_bound_holds(&self) -> bool {
        let hk = Rational::from_integer(BigInt::from(self.len)) * &self.k;
        Rational::from_integer(BigInt::from(self.sumset_size)) >= hk
    }

    /// `E+ <= T`, and `T <= d^4 E+` when `prime_modulus` is set.
    pub fn sandwich_holds(&self, prime_modulus: bool) -> bool {
        let d4 = (self.degree as u128).pow(4);
        self.e_plus <= self.t && (!prime_modulus || self.t <= d4 * self.e_plus)
    }
}

pub fn energy_report(f: &PolyMod, interval: Interval) -> Result<EnergyReport> {
    let m = f.modulus();
    let vals = values(f, interval)?;
    let img = image_set(f, interval)?;
    let mult = multiplicities(&vals);
    let t = square_sum(&pair_histogram(&mult, m, add_mod(m)));
    let plus_hist = pair_histogram(&unit_weights(&img), m, add_mod(m));
    let h = interval.len() as i128;
    Ok(EnergyReport {
        modulus: m,
        degree: f.degree(),
        len: interval.len(),
        t,
        e_plus: square_sum(&plus_hist),
        e_times: energy_times_of_set(&img, m),
        k: Rational::new(BigInt::from(h.pow(3)), BigInt::from(t)),
        sumset_size: plus_hist.len() as u64,
        image_size: img.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(h: u64) -> Interval {
        Interval::new(h).unwrap()
    }

    fn naive_t(f: &PolyMod, h: u64) -> u128 {
        let m = f.modulus() as u128;
        let v: Vec<u128> = (1..=h).map(|x| f.eval(x as i128) as u128).collect();
        let mut n = 0;
        for &a in &v {
            for &b in &v {
                for &c in &v {
                    for &d in &v {
                        if (a + b) % m == (c + d) % m {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn worked_instance_square_mod_7() {
        let f = PolyMod::parse(7, "0,0,1").unwrap();
        assert_eq!(naive_t(&f, 3), 15);
        assert_eq!(energy_t(&f, iv(3)).unwrap(), 15);
        assert_eq!(energy_plus(&f, iv(3)).unwrap(), 15);
        assert_eq!(sumset_size(&f, iv(3)).unwrap(), 6);
        let r = energy_report(&f, iv(3)).unwrap();
        assert_eq!(r.k, crate::rational::rat(27, 15));
        assert!(r.cauchy_schwarz_holds());
        assert!(r.sumset_lower_bound_holds());
        assert!(r.sandwich_holds(true));
    }

    #[test]
    fn single_point_interval() {
        for coeffs in ["0,0,1", "3,1,4,1"] {
            let f = PolyMod::parse(101, coeffs).unwrap();
            assert_eq!(energy_t(&f, iv(1)).unwrap(), 1);
            assert_eq!(energy_plus(&f, iv(1)).unwrap(), 1);
            assert_eq!(energy_times(&f, iv(1)).unwrap(), 1);
            assert_eq!(sumset_size(&f, iv(1)).unwrap(), 1);
        }
    }

    #[test]
    fn square_mod_2() {
        let f = PolyMod::parse(2, "0,0,1").unwrap();
        assert_eq!(naive_t(&f, 2), 8);
        assert_eq!(energy_t(&f, iv(2)).unwrap(), 8);
    }

    #[test]
    fn plus_and_times_examples() {
        let id5 = PolyMod::parse(5, "0,1").unwrap();
        assert_eq!(energy_plus(&id5, iv(2)).unwrap(), 6);
        assert_eq!(energy_times(&id5, iv(2)).unwrap(), 6);
        assert_eq!(energy_times_of_set(&[0, 1], 4), 10);
        assert_eq!(energy_times_of_set(&[1], 9), 1);
        assert_eq!(sumset_size(&id5, iv(5)).unwrap(), 5);
    }

    #[test]
    fn cross_energy_examples() {
        assert_eq!(energy_cross(&[0], &[1, 4, 6], 10), 3);
        let all: Vec<u64> = (0..6).collect();
        assert_eq!(energy_cross(&all, &all, 6), 216);
        assert_eq!(energy_cross(&[1, 2], &[1, 2], 10), 6);
        assert_eq!(energy_plus_of_set(&[1, 2, 12], 10), 6);
    }

    #[test]
    fn rep_function_examples() {
        let f = PolyMod::parse(7, "0,0,1").unwrap();
        let diff = rep_function(&f, iv(3), RepMode::PairDifference).unwrap();
        assert_eq!(diff.get(0), 3);
        assert_eq!(diff.get(3), 1);
        assert_eq!(diff.total(), 9);
        let sum = rep_function(&f, iv(3), RepMode::PairSum).unwrap();
        assert_eq!(sum.total(), 9);
        assert_eq!(sum.square_sum(), energy_t(&f, iv(3)).unwrap());
        assert_eq!(sum.support_size(), 6);
    }

    #[test]
    fn set_versus_multiset_semantics_differ() {
        // X^2 mod 8 on [1, 4]: values 1, 4, 1, 0 so the image has 3 elements.
        let f = PolyMod::parse(8, "0,0,1").unwrap();
        let t = energy_t(&f, iv(4)).unwrap();
        let e = energy_plus(&f, iv(4)).unwrap();
        assert_eq!(t, naive_t(&f, 4));
        assert!(e < t);
        assert_eq!(image_set(&f, iv(4)).unwrap(), vec![0, 1, 4]);
    }

    #[test]
    fn domain_violation() {
        let f = PolyMod::parse(5, "0,0,1").unwrap();
        assert!(energy_t(&f, iv(6)).is_err());
        assert!(energy_plus(&f, iv(6)).is_err());
        assert!(rep_function(&f, iv(6), RepMode::PairSum).is_err());
    }
}
