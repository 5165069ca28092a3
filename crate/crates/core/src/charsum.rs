//! Multiplicative characters modulo a prime and the sums built from them.
//!
//! A character is fixed by a primitive root `g` and an index `k`:
//! `χ(g^a) = e(k a / (p - 1))`. Values are handled as exponents modulo
//! `p - 1` for as long as possible; a sum is first collected as a histogram of
//! exponents and only then turned into one complex number.

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rational::{self, rat, Rational};
use crate::ring::{factorize, is_prime, mod_inv, pow_mod, primes_up_to, PolyMod};

#[derive(Debug, Clone)]
pub struct CharTable {
    p: u64,
    g: u64,
    k: u64,
    /// `dlog[x]` for `1 <= x < p`; `dlog[0]` is unused.
    dlog: Vec<u32>,
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if p == 2 {
        return Ok(1);
    }
    let order = p - 1;
    let primes: Vec<u64> = factorize(order as i128)?
        .factors
        .iter()
        .map(|&(q, _)| q as u64)
        .collect();
    (2..p)
        .find(|&g| primes.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .ok_or_else(|| crate::error::Error::InvalidInput("no primitive root".into()))
}

impl CharTable {
    pub const MAX_PRIME: u64 = 50_000_000;

    pub fn new(p: u64, k: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return invalid(format!("p = {p} must be an odd prime"));
        }
        if p > Self::MAX_PRIME {
            return Err(crate::error::Error::Unsupported(format!(
                "p = {p} exceeds the table limit {}",
                Self::MAX_PRIME
            )));
        }
        if k == 0 || k > p - 2 {
            return invalid(format!("index k = {k} must lie in [1, p - 2]"));
        }
        let g = primitive_root(p)?;
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for a in 0..p - 1 {
            dlog[x as usize] = a as u32;
            x = x * g % p;
        }
        Ok(Self { p, g, k, dlog })
    }

    /// The Legendre symbol, `k = (p - 1)/2`.
    pub fn quadratic(p: u64) -> Result<Self> {
        Self::new(p, (p.max(3) - 1) / 2)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    pub fn index(&self) -> u64 {
        self.k
    }

    /// Order of `χ`, `(p - 1)/gcd(k, p - 1)`.
    pub fn order(&self) -> u64 {
        (self.p - 1) / self.k.gcd(&(self.p - 1))
    }

    pub fn dlog(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        (x != 0).then(|| self.dlog[x as usize] as u64)
    }

    /// `e` with `χ(x) = e(e / (p - 1))`; `None` at `x ≡ 0`.
    pub fn exponent(&self, x: u64) -> Option<u64> {
        self.dlog(x)
            .map(|a| (a as u128 * self.k as u128 % (self.p - 1) as u128) as u64)
    }

    fn root(&self, e: u64) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * e as f64 / (self.p - 1) as f64;
        Complex64::new(theta.cos(), theta.sin())
    }

    pub fn eval(&self, x: u64) -> Complex64 {
        match self.exponent(x) {
            Some(e) => self.root(e),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `Σ_e counts[e] · e(e/(p-1))` for an exponent histogram.
    fn resolve(&self, counts: &[i64]) -> Complex64 {
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| self.root(e as u64) * c as f64)
            .sum()
    }
}

pub fn char_eval(t: &CharTable, x: u64) -> Complex64 {
    t.eval(x)
}

/// `Σ_{x=1}^{p-1} χ(x)`.
pub fn orthogonality_sum(t: &CharTable) -> Complex64 {
    let mut counts = vec![0i64; (t.p - 1) as usize];
    for x in 1..t.p {
        counts[t.exponent(x).unwrap() as usize] += 1;
    }
    t.resolve(&counts)
}

fn check_modulus(t: &CharTable, f: &PolyMod) -> Result<()> {
    if f.modulus() != t.p {
        return invalid(format!(
            "polynomial modulus {} differs from p = {}",
            f.modulus(),
            t.p
        ));
    }
    Ok(())
}

/// `Σ_{x mod p} χ(f(x))`.
pub fn complete_sum_poly(t: &CharTable, f: &PolyMod) -> Result<Complex64> {
    check_modulus(t, f)?;
    let mut counts = vec![0i64; (t.p - 1) as usize];
    for x in 0..t.p {
        if let Some(e) = t.exponent(f.eval(x as i128)) {
            counts[e as usize] += 1;
        }
    }
    Ok(t.resolve(&counts))
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    out
}

/// Whether `f = c·h^r` with `r` the order of `χ`, the case the Weil bound
/// excludes. The candidate `h` is the `r`-th root of the reversed monic
/// polynomial as a power series, then checked exactly.
pub fn is_character_power(t: &CharTable, f: &PolyMod) -> Result<bool> {
    check_modulus(t, f)?;
    let p = t.p;
    let r = t.order();
    let d = f.degree() as u64;
    if !d.is_multiple_of(r) {
        return Ok(false);
    }
    let e = (d / r) as usize;
    let (monic, _) = f.to_monic().expect("prime modulus");
    // reversed: G(y) = y^d F(1/y) = 1 + ...
    let g: Vec<u64> = monic.coeffs().iter().rev().copied().collect();
    let alpha = mod_inv(r % p, p).expect("r < p");
    let mut h = vec![0u64; e + 1];
    h[0] = 1;
    for n in 1..=e {
        // n h_n = Σ_{i=1}^{n} ((α + 1) i - n) g_i h_{n-i}
        let mut acc: u128 = 0;
        for i in 1..=n.min(g.len() - 1) {
            let coef = ((alpha as u128 + 1) * i as u128 % p as u128 + p as u128
                - n as u128 % p as u128)
                % p as u128;
            acc = (acc + coef * g[i] as u128 % p as u128 * h[n - i] as u128) % p as u128;
        }
        let inv_n = mod_inv(n as u64 % p, p).expect("n < p");
        h[n] = (acc * inv_n as u128 % p as u128) as u64;
    }
    let mut pow = vec![1u64];
    for _ in 0..r {
        pow = poly_mul(&pow, &h, p);
    }
    Ok(pow == g)
}

/// The weighted double sum `Σ_s Σ_{x ≤ H} α_s β_x χ(s + x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearInstance {
    pub set: Vec<u64>,
    pub alpha: Vec<Complex64>,
    pub h: u64,
    pub beta: Vec<Complex64>,
}

impl BilinearInstance {
    pub fn new(set: Vec<u64>, alpha: Vec<Complex64>, h: u64, beta: Vec<Complex64>) -> Result<Self> {
        if alpha.len() != set.len() {
            return invalid("one α weight per element of S");
        }
        if beta.len() as u64 != h {
            return invalid("one β weight per element of [1, H]");
        }
        if alpha.iter().chain(&beta).any(|z| z.norm() > 1.0 + 1e-12) {
            return invalid("weights must have modulus at most 1");
        }
        Ok(Self {
            set,
            alpha,
            h,
            beta,
        })
    }

    /// All weights equal to 1.
    pub fn unweighted(set: Vec<u64>, h: u64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            alpha: vec![one; set.len()],
            beta: vec![one; h as usize],
            set,
            h,
        }
    }
}

pub fn bilinear_w(t: &CharTable, inst: &BilinearInstance) -> Complex64 {
    let p = t.p;
    let mut total = Complex64::new(0.0, 0.0);
    for (s, a) in inst.set.iter().zip(&inst.alpha) {
        let inner: Complex64 = (1..=inst.h)
            .zip(&inst.beta)
            .map(|(x, b)| b * t.eval((s % p + x % p) % p))
            .sum();
        total += a * inner;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeConditions {
    /// `S^2 H <= p^2`.
    pub s2h_le_p2: bool,
    /// `H^2 < p`.
    pub h2_lt_p: bool,
    /// `H^r >= p`.
    pub hr_ge_p: bool,
}

impl SizeConditions {
    pub fn all(&self) -> bool {
        self.s2h_le_p2 && self.h2_lt_p && self.hr_ge_p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearBound {
    pub value: f64,
    pub conditions: SizeConditions,
    pub conditions_hold: bool,
    /// The `p^{o(1)}` factor is taken to be 1.
    pub note: &'static str,
}

/// `S H (E p^{(r+1)/r} / (S^4 H^2) + p^{(r+2)/r} / (S H^{5/2}) + p^{(r+2)/r} / (S^2 H^2))^{1/(4r)} + S^{1/2} H`.
pub fn bilinear_bound(s: u64, h: u64, p: u64, energy: f64, r: u32) -> Result<BilinearBound> {
    if s == 0 || h == 0 || p < 2 || r == 0 {
        return invalid("S, H, r must be positive and p at least 2");
    }
    let (sb, hb, pb) = (s as u128, h as u128, p as u128);
    let conditions = SizeConditions {
        s2h_le_p2: sb
            .checked_mul(sb)
            .and_then(|x| x.checked_mul(hb))
            .is_some_and(|x| x <= pb * pb),
        h2_lt_p: hb * hb < pb,
        hr_ge_p: num_bigint::BigUint::from(h).pow(r) >= num_bigint::BigUint::from(p),
    };
    let (sf, hf, pf, rf) = (s as f64, h as f64, p as f64, r as f64);
    let inner = energy * pf.powf((rf + 1.0) / rf) / (sf.powi(4) * hf * hf)
        + pf.powf((rf + 2.0) / rf) / (sf * hf.powf(2.5))
        + pf.powf((rf + 2.0) / rf) / (sf * sf * hf * hf);
    let value = sf * hf * inner.powf(1.0 / (4.0 * rf)) + sf.sqrt() * hf;
    Ok(BilinearBound {
        value,
        conditions_hold: conditions.all(),
        conditions,
        note: "p^{o(1)} factor set to 1",
    })
}

/// Exponent pair for the prime-sum region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegimeParams {
    #[serde(serialize_with = "rational::serialize")]
    pub zeta: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub xi: Rational,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub name: &'static str,
    pub holds: bool,
    /// Distance to the boundary, positive when the constraint holds strictly.
    #[serde(serialize_with = "rational::serialize")]
    pub slack: Rational,
    /// For the lower bounds on `ξ`: this bound equals the threshold.
    pub binding: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub admissible: bool,
    pub constraints: Vec<ConstraintReport>,
    /// `ξ` must exceed this.
    #[serde(serialize_with = "rational::serialize")]
    pub threshold: Rational,
    /// `ξ` must not exceed this.
    #[serde(serialize_with = "rational::serialize")]
    pub ceiling: Rational,
}

/// Lower bounds on `ξ` from the three strict constraints at fixed `ζ`.
fn xi_lower_bounds(zeta: &Rational, d: usize) -> [Rational; 3] {
    let dd = (d * (d + 1)) as i128;
    [
        rat(1, 2) - zeta,
        rat(1, 2) - rat(2, dd),
        (Rational::from_integer(1.into()) - zeta) * rat(2, 5),
    ]
}

/// The `ξ` threshold at fixed `ζ`: the region is `threshold < ξ <= ceiling`.
pub fn xi_threshold(zeta: &Rational, d: usize) -> Rational {
    xi_lower_bounds(zeta, d).into_iter().max().unwrap()
}

pub fn prime_sum_admissible(params: &RegimeParams) -> Result<RegionReport> {
    let zero = Rational::from_integer(0.into());
    if params.zeta <= zero || params.xi <= zero {
        return invalid("ζ and ξ must be positive");
    }
    if params.d < 2 {
        return invalid("degree must be at least 2");
    }
    let (z, x, d) = (&params.zeta, &params.xi, params.d);
    let lows = xi_lower_bounds(z, d);
    let threshold = lows.iter().max().unwrap().clone();
    let ceiling = rat(1, 2).min(Rational::from_integer(2.into()) - z * rat(2, 1));
    let upper = |name, bound: Rational| {
        let slack = bound - x;
        ConstraintReport {
            name,
            holds: slack >= zero,
            slack,
            binding: false,
        }
    };
    let lower = |name, bound: &Rational| {
        let slack = x - bound;
        ConstraintReport {
            name,
            holds: slack > zero,
            slack,
            binding: bound == &threshold,
        }
    };
    let constraints = vec![
        upper("xi <= 1/2", rat(1, 2)),
        upper(
            "xi <= 2 - 2 zeta",
            Rational::from_integer(2.into()) - z * rat(2, 1),
        ),
        lower("zeta + xi > 1/2", &lows[0]),
        lower("xi > 1/2 - 2/(d(d+1))", &lows[1]),
        lower("zeta + 5 xi/2 > 1", &lows[2]),
    ];
    Ok(RegionReport {
        admissible: constraints.iter().all(|c| c.holds),
        constraints,
        threshold,
        ceiling,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSumRecord {
    /// `Σ_{q <= Q} |Σ_{r <= R} χ(f(q) + r)|` over primes.
    pub outer_q: f64,
    /// `Σ_{r <= R} |Σ_{q <= Q} χ(f(q) + r)|` over primes.
    pub outer_r: f64,
    pub primes_q: usize,
    pub primes_r: usize,
    /// Each sum divided by `Q R`.
    pub ratio_q: f64,
    pub ratio_r: f64,
    /// `log(QR / value) / log p` for each sum; infinite when the sum is 0.
    pub saving_q: f64,
    pub saving_r: f64,
}

pub fn prime_bilinear_sum(
    t: &CharTable,
    f: &PolyMod,
    q_max: u64,
    r_max: u64,
) -> Result<PrimeSumRecord> {
    check_modulus(t, f)?;
    let p = t.p;
    if q_max >= p || r_max >= p {
        return invalid("Q and R must be below p");
    }
    if q_max == 0 || r_max == 0 {
        return invalid("Q and R must be positive");
    }
    let qs = primes_up_to(q_max);
    let rs = primes_up_to(r_max);
    let fq: Vec<u64> = qs.iter().map(|&q| f.eval(q as i128)).collect();
    let grid: Vec<Vec<Complex64>> = fq
        .iter()
        .map(|&v| rs.iter().map(|&r| t.eval((v + r) % p)).collect())
        .collect();
    let outer_q: f64 = grid
        .iter()
        .map(|row| row.iter().sum::<Complex64>().norm())
        .sum();
    let outer_r: f64 = (0..rs.len())
        .map(|j| grid.iter().map(|row| row[j]).sum::<Complex64>().norm())
        .sum();
    let trivial = q_max as f64 * r_max as f64;
    let saving = |v: f64| (trivial / v).ln() / (p as f64).ln();
    Ok(PrimeSumRecord {
        outer_q,
        outer_r,
        primes_q: qs.len(),
        primes_r: rs.len(),
        ratio_q: outer_q / trivial,
        ratio_r: outer_r / trivial,
        saving_q: saving(outer_q),
        saving_r: saving(outer_r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn quadratic_character_values() {
        let t = CharTable::quadratic(5).unwrap();
        assert_eq!(t.generator(), 2);
        assert!(close(t.eval(4), Complex64::new(1.0, 0.0)));
        assert!(close(t.eval(2), Complex64::new(-1.0, 0.0)));
        assert!(close(t.eval(0), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(23).unwrap(), 5);
        assert!(primitive_root(9).is_err());
    }

    #[test]
    fn multiplicative_and_orthogonal() {
        let t = CharTable::new(31, 7).unwrap();
        for x in 1..31 {
            for y in 1..31 {
                let lhs = t.exponent(x * y % 31).unwrap();
                let rhs = (t.exponent(x).unwrap() + t.exponent(y).unwrap()) % 30;
                assert_eq!(lhs, rhs);
            }
        }
        assert!(orthogonality_sum(&t).norm() < 1e-9);
    }

    #[test]
    fn complete_sums() {
        let t = CharTable::quadratic(7).unwrap();
        let x = PolyMod::parse(7, "0,1").unwrap();
        assert!(complete_sum_poly(&t, &x).unwrap().norm() < 1e-9);
        let f = PolyMod::parse(7, "1,0,1").unwrap();
        let s = complete_sum_poly(&t, &f).unwrap();
        assert!(s.norm() <= 7f64.sqrt() + 1e-9);
        // x^2+1 over F_7: values 1,2,5,3,3,5,2 → χ = 1,1,-1,-1,-1,-1,1
        assert!(close(s, Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn character_powers_detected() {
        let t = CharTable::quadratic(11).unwrap();
        // 3 (x + 2)^2 = 3x^2 + 12x + 12
        let sq = PolyMod::new(11, &[12, 12, 3]).unwrap();
        assert!(is_character_power(&t, &sq).unwrap());
        let not = PolyMod::new(11, &[1, 0, 1]).unwrap();
        assert!(!is_character_power(&t, &not).unwrap());
        let cubic_char = CharTable::new(13, 4).unwrap();
        assert_eq!(cubic_char.order(), 3);
        // (x + 1)^3
        let cube = PolyMod::new(13, &[1, 3, 3, 1]).unwrap();
        assert!(is_character_power(&cubic_char, &cube).unwrap());
        assert!(!is_character_power(&CharTable::quadratic(13).unwrap(), &cube).unwrap());
    }

    #[test]
    fn bilinear_examples() {
        let t = CharTable::quadratic(11).unwrap();
        let inst = BilinearInstance::unweighted(vec![0], 10);
        assert!(bilinear_w(&t, &inst).norm() < 1e-9);
        let inst = BilinearInstance::unweighted(vec![1, 2], 3);
        // s + x over {2,3,4} ∪ {3,4,5}; squares mod 11 are {1,3,4,5,9}
        let expect: f64 = [2u64, 3, 4, 3, 4, 5]
            .iter()
            .map(|&v| {
                if [1, 3, 4, 5, 9].contains(&v) {
                    1.0
                } else {
                    -1.0
                }
            })
            .sum();
        assert!(close(bilinear_w(&t, &inst), Complex64::new(expect, 0.0)));
        let zero = BilinearInstance::new(
            vec![1],
            vec![Complex64::new(1.0, 0.0)],
            2,
            vec![Complex64::new(0.0, 0.0); 2],
        )
        .unwrap();
        assert!(bilinear_w(&t, &zero).norm() < 1e-12);
        assert!(BilinearInstance::new(vec![1], vec![Complex64::new(2.0, 0.0)], 0, vec![]).is_err());
    }

    #[test]
    fn bilinear_bound_values() {
        let r = bilinear_bound(100, 100, 10_000, 10_000.0, 2).unwrap();
        assert!((r.value - 1.45e4).abs() < 0.01e4, "{}", r.value);
        assert!(!r.conditions.h2_lt_p);
        let lo = bilinear_bound(100, 100, 10_000, 1e4, 2).unwrap().value;
        let hi = bilinear_bound(100, 100, 10_000, 1e8, 2).unwrap().value;
        assert!(hi > lo);
        let one = bilinear_bound(1, 30, 10_007, 1.0, 3).unwrap();
        assert!(one.value >= 30.0);
        assert!(one.conditions.s2h_le_p2 && one.conditions.h2_lt_p && one.conditions.hr_ge_p);
    }

    #[test]
    fn region_thresholds() {
        assert_eq!(xi_threshold(&rat(1, 4), 2), rat(3, 10));
        assert_eq!(xi_threshold(&rat(1, 4), 3), rat(1, 3));
        let r = prime_sum_admissible(&RegimeParams {
            zeta: rat(1, 4),
            xi: rat(29, 100),
            d: 2,
        })
        .unwrap();
        assert!(!r.admissible);
        let c = r
            .constraints
            .iter()
            .find(|c| c.name == "zeta + 5 xi/2 > 1")
            .unwrap();
        assert!(!c.holds && c.binding);
        assert_eq!(c.slack, rat(-1, 100));
        let ok = prime_sum_admissible(&RegimeParams {
            zeta: rat(1, 4),
            xi: rat(31, 100),
            d: 2,
        })
        .unwrap();
        assert!(ok.admissible);
    }

    #[test]
    fn prime_sums() {
        let t = CharTable::quadratic(101).unwrap();
        let f = PolyMod::parse(101, "0,0,1").unwrap();
        let none = prime_bilinear_sum(&t, &f, 10, 1).unwrap();
        assert_eq!(none.outer_q, 0.0);
        let r = prime_bilinear_sum(&t, &f, 10, 10).unwrap();
        assert_eq!((r.primes_q, r.primes_r), (4, 4));
        let mut brute = 0.0;
        for q in [2u64, 3, 5, 7] {
            let inner: Complex64 = [2u64, 3, 5, 7]
                .iter()
                .map(|&rr| t.eval((q * q + rr) % 101))
                .sum();
            brute += inner.norm();
        }
        assert!((r.outer_q - brute).abs() < 1e-9);
        assert!(r.ratio_q <= 1.0 && r.ratio_r <= 1.0);
    }
}
