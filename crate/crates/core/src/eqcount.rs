//! Counting solutions of `f(n) - f(m) = w` over the integers and of
//! `f(n) - f(m) ≡ λ (mod q)` in short intervals.
//!
//! The integer equation is solved by the divisor method: `n - m = d1` and
//! `g(n, m) = d2` for each factorisation `w = d1·d2`, where
//! `f(x) - f(y) = (x - y) g(x, y)`. The congruence count runs a brute-force
//! loop next to a constructive reduction: a short vector of a congruence
//! lattice turns the congruence into an integer equation, small kernel
//! vectors of the solution differences cut it down to one final equation, and
//! that equation is solved exactly.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lattice::body::{Body, WeightedBox};
use crate::lattice::bv::bv_small_solutions;
use crate::lattice::congruence_lattice;
use crate::lattice::enumerate::DEFAULT_NODE_BUDGET;
use crate::lattice::hnf::Echelon;
use crate::lattice::minima::shortest_vector;
use crate::rational::{self, Rational};
use crate::ring::{divisor_pairs, factorize, signed_residue, PolyMod};

/// A polynomial with integer coefficients, ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
    pub fn new(coeffs: &[i128]) -> Result<Self> {
        let mut c = coeffs.to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        if c.is_empty() {
            return invalid("the zero polynomial has no degree");
        }
        Ok(Self { coeffs: c })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(&crate::ring::parse_coeffs(s)?)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: i128) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c))
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> i128 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Divisor,
    Brute,
    Pipeline,
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// Coefficients (in `m`) of `g(m + d1, m) - d2`.
fn shifted_quotient(f: &IntPoly, d1: i128, d2: i128) -> Vec<BigInt> {
    let deg = f.degree();
    let mut out = vec![BigInt::zero(); deg.max(1)];
    let d1 = BigInt::from(d1);
    let d1_pows: Vec<BigInt> = (0..deg).map(|e| num_traits::pow(d1.clone(), e)).collect();
    for (k, &a) in f.coeffs.iter().enumerate().skip(1) {
        if a == 0 {
            continue;
        }
        let a = BigInt::from(a);
        // (x^k - y^k)/(x - y) = Σ_{i<k} x^i y^{k-1-i} with x = y + d1
        for i in 0..k {
            let binom = binomial_row(i);
            for (t, b) in binom.iter().enumerate() {
                out[t + k - 1 - i] += &a * b * &d1_pows[i - t];
            }
        }
    }
    out[0] -= BigInt::from(d2);
    out
}

fn eval_big(c: &[BigInt], x: i128) -> BigInt {
    let x = BigInt::from(x);
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * &x + a)
}

const FACTOR_LIMIT: u128 = 1_000_000_000_000;

/// Integer roots of `c` inside `[lo, hi]`, ascending.
fn integer_roots(c: &[BigInt], lo: i128, hi: i128) -> Vec<i128> {
    if lo > hi {
        return Vec::new();
    }
    if c.iter().all(Zero::is_zero) {
        return (lo..=hi).collect();
    }
    let mut roots = BTreeSet::new();
    let shift = c.iter().position(|x| !x.is_zero()).unwrap();
    if shift > 0 && lo <= 0 && 0 <= hi {
        roots.insert(0);
    }
    let reduced = &c[shift..];
    if reduced.len() == 1 {
        return roots.into_iter().collect();
    }
    let c0 = reduced[0].abs();
    let span = (hi - lo + 1) as u128;
    let small = c0.to_u128().filter(|&v| v <= FACTOR_LIMIT);
    match small {
        Some(v) if span > 64 => {
            let fact = factorize(v as i128).expect("nonzero constant term");
            for dv in fact.divisors() {
                for r in [dv as i128, -(dv as i128)] {
                    if (lo..=hi).contains(&r) && eval_big(reduced, r).is_zero() {
                        roots.insert(r);
                    }
                }
            }
        }
        _ => {
            for r in lo..=hi {
                if r != 0 && eval_big(reduced, r).is_zero() {
                    roots.insert(r);
                }
            }
        }
    }
    roots.into_iter().collect()
}

/// All `(n, m)` in `[1, H]^2` with `f(n) - f(m) = w`, by the divisor method.
pub fn solve_eq(f: &IntPoly, w: i128, h: u64) -> Result<Vec<(i128, i128)>> {
    if f.degree() < 2 {
        return invalid("the divisor method needs degree at least 2");
    }
    if w == 0 {
        return invalid("w must be nonzero");
    }
    if h == 0 {
        return invalid("H must be at least 1");
    }
    let h = h as i128;
    let mut sols = BTreeSet::new();
    for (d1, d2) in divisor_pairs(w)? {
        if d1.abs() >= h {
            continue;
        }
        let g = shifted_quotient(f, d1, d2);
        let lo = 1.max(1 - d1);
        let hi = h.min(h - d1);
        for m in integer_roots(&g, lo, hi) {
            sols.insert((m + d1, m));
        }
    }
    Ok(sols.into_iter().collect())
}

pub fn count_eq(f: &IntPoly, w: i128, h: u64) -> Result<u64> {
    Ok(solve_eq(f, w, h)?.len() as u64)
}

/// Value-lookup oracle for [`count_eq`], independent of the divisor method.
pub fn count_eq_brute(f: &IntPoly, w: i128, h: u64) -> u64 {
    let vals: Vec<BigInt> = (1..=h as i128).map(|x| f.eval(x)).collect();
    let mut hist: HashMap<&BigInt, u64> = HashMap::new();
    for v in &vals {
        *hist.entry(v).or_insert(0) += 1;
    }
    let w = BigInt::from(w);
    vals.iter()
        .map(|b| hist.get(&(b + &w)).copied().unwrap_or(0))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricCount {
    /// `#{f(x) + f(y) = f(z) + f(w)}` over `[1, H]^4`.
    pub count: u128,
    /// `r(0)^2`, the pairs with equal values.
    pub diagonal: u128,
    /// `Σ_{w ≠ 0} r(w)^2`.
    pub off_diagonal: u128,
    /// Largest `r(w)` over `w ≠ 0`.
    pub max_rep: u64,
    /// `count / (H^2 (H X)^{0.2})` with `X` the coefficient height.
    pub ratio: f64,
}

pub fn count_symmetric_eq(f: &IntPoly, h: u64) -> Result<SymmetricCount> {
    if f.degree() < 2 {
        return invalid("degree must be at least 2");
    }
    if h == 0 {
        return invalid("H must be at least 1");
    }
    let vals: Vec<BigInt> = (1..=h as i128).map(|x| f.eval(x)).collect();
    let mut r: HashMap<BigInt, u64> = HashMap::new();
    for a in &vals {
        for b in &vals {
            *r.entry(a - b).or_insert(0) += 1;
        }
    }
    let r0 = r.get(&BigInt::zero()).copied().unwrap_or(0) as u128;
    let count: u128 = r.values().map(|&c| c as u128 * c as u128).sum();
    let max_rep = r
        .iter()
        .filter(|(k, _)| !k.is_zero())
        .map(|(_, &c)| c)
        .max()
        .unwrap_or(0);
    let hx = (h as f64) * (f.height().max(1) as f64);
    let ratio = count as f64 / ((h as f64).powi(2) * hx.powf(0.2));
    Ok(SymmetricCount {
        count,
        diagonal: r0 * r0,
        off_diagonal: count - r0 * r0,
        max_rep,
        ratio,
    })
}

/// Quadruple-loop oracle for [`count_symmetric_eq`].
pub fn count_symmetric_brute(f: &IntPoly, h: u64) -> u128 {
    let vals: Vec<BigInt> = (1..=h as i128).map(|x| f.eval(x)).collect();
    let mut count = 0;
    for a in &vals {
        for b in &vals {
            for c in &vals {
                for d in &vals {
                    if a + b == c + d {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// The admissible constant for degree `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdChoice {
    pub d: usize,
    /// Largest `p/q` with `q <= 10^6` and `(p/q)^{d+1} (100 d)^2 <= 1`.
    #[serde(serialize_with = "rational::serialize")]
    pub value: Rational,
    pub approx: f64,
    /// `(100 d)^{-2/(d+1)}`, the exact threshold `value` approximates from below.
    pub threshold: f64,
}

pub const CD_DENOMINATOR_LIMIT: u64 = 1_000_000;

fn cd_below(p: &BigInt, q: &BigInt, d: usize) -> bool {
    let k = BigInt::from(100 * d as u64);
    num_traits::pow(p.clone(), d + 1) * &k * &k <= num_traits::pow(q.clone(), d + 1)
}

/// `c_d` such that `H <= c_d m^{2/(d(d+1))}` forces a nonzero point of the
/// congruence lattice in the box `|x_j| <= m / (100 d H^j)`.
///
/// With `a_d = 1` the lattice has covolume `m^{d-1}` and the box has volume
/// `2^d m^d / ((100 d)^d H^{d(d+1)/2})`, so Minkowski's first theorem applies
/// once `H <= (100 d)^{-2/(d+1)} m^{2/(d(d+1))}`.
pub fn choose_cd(d: usize) -> Result<CdChoice> {
    if d < 2 {
        return invalid("c_d is defined for d >= 2");
    }
    let limit = BigInt::from(CD_DENOMINATOR_LIMIT);
    // Stern-Brocot walk with batched steps.
    let (mut lp, mut lq) = (BigInt::zero(), BigInt::one());
    let (mut up, mut uq) = (BigInt::one(), BigInt::zero());
    loop {
        let mut moved = false;
        // advance the lower end toward the upper one
        let k = largest_step(&lp, &lq, &up, &uq, &limit, |p, q| cd_below(p, q, d));
        if k > BigInt::zero() {
            lp += &k * &up;
            lq += &k * &uq;
            moved = true;
        }
        let k = largest_step(&up, &uq, &lp, &lq, &limit, |p, q| !cd_below(p, q, d));
        if k > BigInt::zero() {
            up += &k * &lp;
            uq += &k * &lq;
            moved = true;
        }
        if !moved {
            break;
        }
    }
    let value = Rational::new(lp, lq);
    let threshold = (100.0 * d as f64).powf(-2.0 / (d as f64 + 1.0));
    Ok(CdChoice {
        d,
        approx: rational::to_f64(&value),
        value,
        threshold,
    })
}

/// Largest `k >= 0` with `(a + k c)/(b + k e)` on the `keep` side and
/// `b + k e <= limit`.
fn largest_step(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    e: &BigInt,
    limit: &BigInt,
    keep: impl Fn(&BigInt, &BigInt) -> bool,
) -> BigInt {
    let ok = |k: &BigInt| {
        let q = b + k * e;
        q <= *limit && !q.is_zero() && keep(&(a + k * c), &q)
    };
    if !ok(&BigInt::one()) {
        return BigInt::zero();
    }
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while ok(&hi) {
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if ok(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Whether `H <= c_d m^{2/(d(d+1))}`, decided exactly.
pub fn in_short_regime(d: usize, m: u64, h: u64) -> Result<bool> {
    let cd = choose_cd(d)?;
    let s = d * (d + 1) / 2;
    let lhs = num_traits::pow(BigInt::from(h) * cd.value.denom(), s);
    let rhs = num_traits::pow(cd.value.numer().clone(), s) * BigInt::from(m);
    Ok(lhs <= rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineMode {
    /// Run only when `H <= c_d m^{2/(d(d+1))}`.
    Regime,
    /// Run whenever the box holds a nonzero lattice point.
    Force,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalStep {
    /// No pair survives the integer equation.
    Empty,
    /// `w` is too large for the integer equation to have solutions.
    OutOfRange,
    /// All differences coincide; the count is read from that fiber.
    Fiber,
    /// A final equation of degree at least two, solved by divisors.
    Divisor,
    /// A linear final equation `n = m + w**`.
    Shift,
}

/// The intermediate objects of the reduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    /// The congruence after dividing by `a_d`.
    pub monic_coeffs: Vec<u64>,
    pub monic_lambda: u64,
    /// Short vector `(b_1..b_d)` with `a_j ℓ ≡ b_j`.
    pub short_vector: Vec<i128>,
    #[serde(serialize_with = "rational::serialize")]
    pub short_norm: Rational,
    pub ell: u64,
    /// Right side of `Σ b_j (n^j - m^j) = w`.
    pub w: i128,
    pub step: FinalStep,
    /// `#M`: pairs solving the integer equation with `f(n) ≢ f(m)`.
    pub family_size: usize,
    pub anchor: Option<(i128, i128)>,
    /// `dim V` of the span of the differences.
    pub d0: usize,
    pub generators: Vec<Vec<i128>>,
    pub kernel: Vec<Vec<i128>>,
    pub j0: Option<usize>,
    /// `(w_{j0,1}..w_{j0,d})`.
    pub final_coeffs: Vec<i128>,
    pub w_star: Option<i128>,
    pub w_star_star: Option<i128>,
    /// Pairs solving the final equation.
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqCountResult {
    pub count: u64,
    pub method: Method,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CongruenceCount {
    pub modulus: u64,
    pub lambda: u64,
    pub h: u64,
    pub in_regime: bool,
    pub brute: EqCountResult,
    pub pipeline: Option<EqCountResult>,
    pub declined: Option<String>,
    /// Both counts equal, when the pipeline ran.
    pub agree: Option<bool>,
}

/// `#{(n, m) ∈ [1, H]^2 : f(n) - f(m) ≡ λ}`.
pub fn count_congruence_brute(f: &PolyMod, lambda: u64, h: u64) -> u64 {
    let q = f.modulus();
    let vals: Vec<u64> = (1..=h as i128).map(|x| f.eval(x)).collect();
    let lambda = lambda % q;
    let mut count = 0;
    for &a in &vals {
        for &b in &vals {
            if (a + q - b) % q == lambda {
                count += 1;
            }
        }
    }
    count
}

pub fn count_congruence(
    f: &PolyMod,
    lambda: u64,
    h: u64,
    mode: PipelineMode,
) -> Result<CongruenceCount> {
    let q = f.modulus();
    if lambda.is_multiple_of(q) {
        return invalid("λ must be nonzero modulo m");
    }
    if !f.has_unit_leading() {
        return invalid("the leading coefficient must be a unit modulo m");
    }
    if f.degree() < 2 {
        return invalid("degree must be at least 2");
    }
    if h == 0 || h > q {
        return Err(Error::IntervalTooLong { len: h, modulus: q });
    }
    let lambda = lambda % q;
    let in_regime = in_short_regime(f.degree(), q, h)?;
    let brute = EqCountResult {
        count: count_congruence_brute(f, lambda, h),
        method: Method::Brute,
        certificate: None,
    };
    let mut out = CongruenceCount {
        modulus: q,
        lambda,
        h,
        in_regime,
        brute,
        pipeline: None,
        declined: None,
        agree: None,
    };
    if mode == PipelineMode::Regime && !in_regime {
        out.declined = Some("H exceeds c_d m^{2/(d(d+1))}".into());
        return Ok(out);
    }
    match run_pipeline(f, lambda, h)? {
        Ok(res) => {
            out.agree = Some(res.count == out.brute.count);
            out.pipeline = Some(res);
        }
        Err(reason) => out.declined = Some(reason),
    }
    Ok(out)
}

fn diff_vector(n: i128, m: i128, d: usize) -> Vec<i128> {
    (1..=d as u32).map(|i| n.pow(i) - m.pow(i)).collect()
}

fn dot(a: &[i128], b: &[i128]) -> BigInt {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| BigInt::from(x) * BigInt::from(y))
        .sum()
}

/// The reduction itself; `Ok(Err(reason))` when it cannot proceed.
fn run_pipeline(
    f: &PolyMod,
    lambda: u64,
    h: u64,
) -> Result<std::result::Result<EqCountResult, String>> {
    let q = f.modulus();
    let d = f.degree();
    let (monic, inv) = f.to_monic().ok_or(Error::InvalidInput(
        "leading coefficient is not a unit".into(),
    ))?;
    let lam = crate::ring::mul_mod(lambda, inv, q);
    let a: Vec<i128> = monic.coeffs()[1..].iter().map(|&c| c as i128).collect();

    let lattice = congruence_lattice(&a, q)?;
    let widths: Vec<Rational> = (1..=d as u32)
        .map(|j| {
            Rational::new(
                BigInt::from(q),
                BigInt::from(100 * d as u64) * num_traits::pow(BigInt::from(h), j as usize),
            )
        })
        .collect();
    let body: Body = WeightedBox::new(widths)?.into();
    let sv = shortest_vector(lattice.basis(), &body, DEFAULT_NODE_BUDGET)?;
    if sv.norm > Rational::one() {
        return Ok(Err("the box holds no nonzero lattice point".into()));
    }
    let b = sv.vector;
    let ell = (b[d - 1].rem_euclid(q as i128)) as u64;
    debug_assert!(a
        .iter()
        .zip(&b)
        .all(|(&aj, &bj)| { (aj * ell as i128 - bj).rem_euclid(q as i128) == 0 }));
    let w = signed_residue(crate::ring::mul_mod(ell, lam, q) as i128, q);

    let mut cert = Certificate {
        monic_coeffs: monic.coeffs().to_vec(),
        monic_lambda: lam,
        short_vector: b.clone(),
        short_norm: sv.norm,
        ell,
        w,
        step: FinalStep::Empty,
        family_size: 0,
        anchor: None,
        d0: 0,
        generators: Vec::new(),
        kernel: Vec::new(),
        j0: None,
        final_coeffs: Vec::new(),
        w_star: None,
        w_star_star: None,
        candidates: 0,
    };
    let done = |count: u64, cert: Certificate| {
        Ok(Ok(EqCountResult {
            count,
            method: Method::Pipeline,
            certificate: Some(cert),
        }))
    };

    // |Σ b_j (n^j - m^j)| <= Σ |b_j| H^j <= m/100
    if BigInt::from(w.abs()) * 100 > BigInt::from(q) {
        cert.step = FinalStep::OutOfRange;
        return done(0, cert);
    }
    if w == 0 {
        return Ok(Err("ℓλ ≡ 0: the integer equation has right side 0".into()));
    }

    let is_solution = |n: i128, m: i128| {
        let fnv = f.eval(n);
        let fmv = f.eval(m);
        (fnv + q - fmv) % q == lambda
    };
    let bpoly = IntPoly::new(
        &std::iter::once(0)
            .chain(b.iter().copied())
            .collect::<Vec<_>>(),
    )?;
    if bpoly.degree() < 2 {
        return Ok(Err("short vector has no nonlinear part".into()));
    }
    let family: Vec<(i128, i128)> = solve_eq(&bpoly, w, h)?
        .into_iter()
        .filter(|&(n, m)| f.eval(n) != f.eval(m))
        .collect();
    cert.family_size = family.len();
    let Some(&anchor) = family.iter().min() else {
        cert.step = FinalStep::Empty;
        return done(0, cert);
    };
    cert.anchor = Some(anchor);
    let u0 = diff_vector(anchor.0, anchor.1, d);
    let mut ech = Echelon::new();
    let mut gens = Vec::new();
    let mut sorted = family.clone();
    sorted.sort();
    for &(n, m) in &sorted {
        let v: Vec<i128> = diff_vector(n, m, d)
            .iter()
            .zip(&u0)
            .map(|(x, y)| x - y)
            .collect();
        if v.iter().any(|&x| x != 0) && ech.insert(&v) {
            gens.push(v);
        }
    }
    cert.d0 = gens.len();
    cert.generators = gens.clone();
    if gens.is_empty() {
        cert.step = FinalStep::Fiber;
        let count = family.iter().filter(|&&(n, m)| is_solution(n, m)).count() as u64;
        return done(count, cert);
    }
    if gens.len() >= d {
        return Err(Error::InvalidInput(
            "difference span is not orthogonal to b".into(),
        ));
    }
    let bv = bv_small_solutions(&gens)?;
    cert.kernel = bv.vectors.clone();
    let Some(j0) = bv.vectors.iter().position(|v| !dot(v, &u0).is_zero()) else {
        return Err(Error::InvalidInput("b lies outside the kernel span".into()));
    };
    let wj = bv.vectors[j0].clone();
    let w_star = dot(&wj, &u0).to_i128().ok_or(Error::Overflow("w*"))?;
    cert.j0 = Some(j0);
    cert.final_coeffs = wj.clone();
    cert.w_star = Some(w_star);

    let candidates: Vec<(i128, i128)> = if wj[1..].iter().any(|&x| x != 0) {
        cert.step = FinalStep::Divisor;
        let poly = IntPoly::new(
            &std::iter::once(0)
                .chain(wj.iter().copied())
                .collect::<Vec<_>>(),
        )?;
        solve_eq(&poly, w_star, h)?
    } else {
        cert.step = FinalStep::Shift;
        let (ws, r) = w_star.div_rem(&wj[0]);
        if r != 0 {
            return Err(Error::InvalidInput(
                "anchor violates the linear final equation".into(),
            ));
        }
        cert.w_star_star = Some(ws);
        (1..=h as i128)
            .filter(|&m| (1..=h as i128).contains(&(m + ws)))
            .map(|m| (m + ws, m))
            .filter(|&(n, m)| dot(&b, &diff_vector(n, m, d)) == BigInt::from(w))
            .collect()
    };
    cert.candidates = candidates.len();
    let count = candidates
        .iter()
        .filter(|&&(n, m)| is_solution(n, m))
        .count() as u64;
    done(count, cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i128]) -> IntPoly {
        IntPoly::new(c).unwrap()
    }

    #[test]
    fn eq_examples() {
        assert_eq!(solve_eq(&p(&[0, 0, 1]), 8, 10).unwrap(), vec![(3, 1)]);
        assert_eq!(solve_eq(&p(&[0, 0, 0, 1]), 7, 10).unwrap(), vec![(2, 1)]);
        assert_eq!(solve_eq(&p(&[0, 0, 1]), 3, 10).unwrap(), vec![(2, 1)]);
        assert!(count_eq(&p(&[0, 0, 1]), 0, 10).is_err());
        assert!(count_eq(&p(&[0, 1]), 3, 10).is_err());
    }

    #[test]
    fn eq_matches_brute() {
        let polys = [
            p(&[0, 0, 1]),
            p(&[3, -2, 1]),
            p(&[1, 1, 0, 1]),
            p(&[0, 5, -3, 0, 2]),
        ];
        for f in &polys {
            for w in (-60..=60).filter(|&w| w != 0) {
                assert_eq!(
                    count_eq(f, w, 30).unwrap(),
                    count_eq_brute(f, w, 30),
                    "{f:?} w={w}"
                );
            }
        }
    }

    #[test]
    fn large_range_uses_divisors() {
        let f = p(&[0, 0, 1]);
        // 9999 = n^2 - m^2 with n, m <= 5000
        assert_eq!(
            count_eq(&f, 9999, 5000).unwrap(),
            count_eq_brute(&f, 9999, 5000)
        );
    }

    #[test]
    fn root_finder_edge_cases() {
        let zero = vec![BigInt::zero(); 3];
        assert_eq!(integer_roots(&zero, 1, 3), vec![1, 2, 3]);
        let c: Vec<BigInt> = [0, -4, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(integer_roots(&c, -5, 5), vec![-2, 0, 2]);
    }

    #[test]
    fn symmetric_examples() {
        let sq = count_symmetric_eq(&p(&[0, 0, 1]), 2).unwrap();
        assert_eq!(sq.count, 6);
        assert_eq!(sq.count, count_symmetric_brute(&p(&[0, 0, 1]), 2));
        assert_eq!(count_symmetric_eq(&p(&[0, 0, 1]), 1).unwrap().count, 1);
        let cube = count_symmetric_eq(&p(&[0, 0, 0, 1]), 3).unwrap();
        assert_eq!(cube.count, 15);
        assert_eq!(cube.diagonal + cube.off_diagonal, 15);
        assert_eq!(cube.diagonal, 9);
    }

    #[test]
    fn cd_values() {
        let c2 = choose_cd(2).unwrap();
        let c3 = choose_cd(3).unwrap();
        assert!(c2.approx <= c2.threshold && c2.threshold - c2.approx < 1e-9);
        assert!(c3.approx <= c3.threshold && c3.threshold - c3.approx < 1e-9);
        assert!(c2.value.denom() <= &BigInt::from(CD_DENOMINATOR_LIMIT));
        assert!(c2.approx < c3.approx);
        assert!(choose_cd(1).is_err());
    }

    #[test]
    fn congruence_small() {
        let f = PolyMod::parse(101, "0,0,1").unwrap();
        assert_eq!(count_congruence_brute(&f, 3, 4), 1);
        let r = count_congruence(&f, 3, 4, PipelineMode::Regime).unwrap();
        assert_eq!(r.brute.count, 1);
        assert!(!r.in_regime);
        assert!(r.declined.is_some());
        let empty = count_congruence(&f, 50, 4, PipelineMode::Force).unwrap();
        assert_eq!(empty.brute.count, 0);
    }

    #[test]
    fn cubic_example_declines() {
        let f = PolyMod::parse(10007, "0,0,0,1").unwrap();
        let lambda = (f.eval(3) + 10007 - f.eval(2)) % 10007;
        let r = count_congruence(&f, lambda, 6, PipelineMode::Force).unwrap();
        assert_eq!(r.brute.count, count_congruence_brute(&f, lambda, 6));
        assert!(r.brute.count >= 1);
        assert!(r.pipeline.is_none());
        assert!(r.declined.is_some());
    }

    #[test]
    fn pipeline_in_regime() {
        for &(q, coeffs, h) in &[
            (5_000_011u64, "3,7,1", 4u64),
            (20_000_003, "0,11,5", 5),
            (200_000_000_003, "1,2,3,1", 4),
        ] {
            let f = PolyMod::parse(q, coeffs).unwrap();
            assert!(in_short_regime(f.degree(), q, h).unwrap());
            for (n, m) in [(2, 1), (4, 1), (3, 2)] {
                let lambda = (f.eval(n) + q - f.eval(m)) % q;
                if lambda == 0 {
                    continue;
                }
                let r = count_congruence(&f, lambda, h, PipelineMode::Regime).unwrap();
                assert_eq!(r.agree, Some(true), "{r:?}");
                assert!(r.brute.count >= 1);
            }
        }
    }
}
