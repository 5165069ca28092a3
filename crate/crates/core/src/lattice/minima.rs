//! Successive minima, point counts, and the Minkowski / transference checks.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::body::{Body, WeightedBox};
use super::enumerate::{self, ShortVector, DEFAULT_NODE_BUDGET};
use super::hnf::Echelon;
use super::{IntLattice, ScaledLattice};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimaProfile {
    #[serde(serialize_with = "rational::serialize_vec")]
    pub lambdas: Vec<Rational>,
    pub witnesses: Vec<Vec<i128>>,
}

impl MinimaProfile {
    pub fn product(&self) -> Rational {
        self.lambdas.iter().cloned().product()
    }
}

fn check_body(rows: &[Vec<i128>], body: &Body) -> Result<()> {
    let n = body.dim();
    if rows.is_empty() {
        return invalid("the basis is empty");
    }
    if rows.iter().any(|r| r.len() != n) {
        return invalid(format!("basis rows must have length {n} to match the body"));
    }
    if n > enumerate::MAX_DIM {
        return Err(Error::Unsupported(format!(
            "dimension {n} exceeds the enumeration limit {}",
            enumerate::MAX_DIM
        )));
    }
    Ok(())
}

/// Successive minima of the lattice spanned by the independent `rows`
/// (any rank) with respect to `body`.
///
/// Candidates are collected in growing radii; the `k`-th witness is the first
/// vector, in [`enumerate::witness_order`], outside the span of the earlier
/// witnesses.
pub fn minima_of_rows(rows: &[Vec<i128>], body: &Body, budget: u64) -> Result<MinimaProfile> {
    check_body(rows, body)?;
    let k = rows.len();
    let (scale, _) = body.ellipsoid();
    let reduced = enumerate::lll(rows, &scale)?;
    let row_norms: Vec<Rational> = reduced.iter().map(|r| body.norm(r)).collect();
    let r_max = row_norms.iter().max().cloned().unwrap();
    let mut radius = row_norms.iter().min().cloned().unwrap();
    let two = int(2);
    loop {
        let cands = enumerate::short_vectors(&reduced, body, &radius, budget)?;
        let mut ech = Echelon::new();
        let mut profile = MinimaProfile {
            lambdas: Vec::with_capacity(k),
            witnesses: Vec::with_capacity(k),
        };
        for c in cands {
            if ech.insert(&c.vector) {
                profile.lambdas.push(c.norm);
                profile.witnesses.push(c.vector);
                if profile.witnesses.len() == k {
                    return Ok(profile);
                }
            }
        }
        if radius >= r_max {
            return invalid("basis rows are linearly dependent");
        }
        radius = (&radius * &two).min(r_max.clone());
    }
}

pub fn successive_minima(l: &IntLattice, body: &Body) -> Result<MinimaProfile> {
    minima_of_rows(l.basis(), body, DEFAULT_NODE_BUDGET)
}

pub fn successive_minima_with_budget(
    l: &IntLattice,
    body: &Body,
    budget: u64,
) -> Result<MinimaProfile> {
    minima_of_rows(l.basis(), body, budget)
}

/// Minima of `(1/denom)·L`; witnesses are returned as integer numerators.
pub fn scaled_minima(l: &ScaledLattice, body: &Body) -> Result<MinimaProfile> {
    let mut p = successive_minima(&l.lattice, body)?;
    let q = int(l.denom);
    for lam in p.lambdas.iter_mut() {
        *lam = &*lam / &q;
    }
    Ok(p)
}

/// A nonzero vector of least gauge, chosen by the same tie-break as the minima.
pub fn shortest_vector(rows: &[Vec<i128>], body: &Body, budget: u64) -> Result<ShortVector> {
    check_body(rows, body)?;
    let (scale, _) = body.ellipsoid();
    let reduced = enumerate::lll(rows, &scale)?;
    let radius = reduced.iter().map(|r| body.norm(r)).min().unwrap();
    let cands = enumerate::short_vectors(&reduced, body, &radius, budget)?;
    cands
        .into_iter()
        .next()
        .ok_or(Error::InvalidInput("empty basis".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCount {
    pub count: u128,
    pub minima: MinimaProfile,
    /// `∏ max(1, 1/λ_j)`.
    #[serde(serialize_with = "rational::serialize")]
    pub product: Rational,
    /// `2^{n-1} ∏ ⌊2/λ_j + 1⌋`, a bound valid for every lattice and body.
    #[serde(serialize_with = "crate::lattice::minima::serialize_bigint")]
    pub henk_bound: BigInt,
    pub henk_holds: bool,
    /// `count / product`, the empirical constant.
    pub ratio: f64,
}

pub(crate) fn serialize_bigint<S: serde::Serializer>(
    v: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact `#(L ∩ D)`, including the origin.
pub fn count_lattice_points(l: &IntLattice, body: &Body, budget: u64) -> Result<PointCount> {
    check_body(l.basis(), body)?;
    let count = enumerate::count_within(l.basis(), body, &Rational::one(), budget)?;
    let minima = successive_minima_with_budget(l, body, budget)?;
    let one = Rational::one();
    let product: Rational = minima
        .lambdas
        .iter()
        .map(|lam| (&one / lam).max(one.clone()))
        .product();
    let two = int(2);
    let n = minima.lambdas.len();
    let henk_bound: BigInt = minima
        .lambdas
        .iter()
        .map(|lam| (&two / lam).floor().to_integer() + 1)
        .product::<BigInt>()
        * num_traits::pow(BigInt::from(2), n - 1);
    let henk_holds = BigInt::from(count) <= henk_bound;
    let ratio = count.to_f64().unwrap_or(f64::INFINITY) / rational::to_f64(&product);
    Ok(PointCount {
        count,
        minima,
        product,
        henk_bound,
        henk_holds,
        ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinkowskiRecord {
    pub n: usize,
    pub minima: MinimaProfile,
    #[serde(serialize_with = "rational::serialize")]
    pub volume: Rational,
    pub covolume: i128,
    /// `λ_1 ⋯ λ_n · vol(D) / covol(L)`.
    #[serde(serialize_with = "rational::serialize")]
    pub ratio: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub lower: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub upper: Rational,
    pub holds: bool,
}

pub fn minkowski_check(l: &IntLattice, body: &Body) -> Result<MinkowskiRecord> {
    let minima = successive_minima(l, body)?;
    let n = l.dim();
    let volume = body.volume();
    let ratio = minima.product() * &volume / int(l.covolume());
    let upper = Rational::from_integer(num_traits::pow(BigInt::from(2), n));
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let lower = &upper / Rational::from_integer(fact);
    let holds = lower <= ratio && ratio <= upper;
    Ok(MinkowskiRecord {
        n,
        minima,
        volume,
        covolume: l.covolume(),
        ratio,
        lower,
        upper,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferenceRecord {
    pub minima: MinimaProfile,
    /// Minima of the dual lattice under the polar body, as exact values.
    pub dual_minima: MinimaProfile,
    pub dual_denom: i128,
    /// `λ_j · λ*_{n-j+1}` for `j = 1..n`.
    #[serde(serialize_with = "rational::serialize_vec")]
    pub products: Vec<Rational>,
    pub all_at_least_one: bool,
    #[serde(serialize_with = "rational::serialize")]
    pub max_product: Rational,
}

pub fn transference_check(l: &IntLattice, bx: &WeightedBox) -> Result<TransferenceRecord> {
    let body = Body::Box(bx.clone());
    let minima = successive_minima(l, &body)?;
    let dual = super::dual_lattice(l)?;
    let dual_minima = scaled_minima(&dual, &Body::Cross(bx.polar()))?;
    let n = l.dim();
    let products: Vec<Rational> = (0..n)
        .map(|j| &minima.lambdas[j] * &dual_minima.lambdas[n - 1 - j])
        .collect();
    let one = Rational::one();
    let all_at_least_one = products.iter().all(|p| p >= &one);
    let max_product = products.iter().max().cloned().unwrap();
    Ok(TransferenceRecord {
        minima,
        dual_minima,
        dual_denom: dual.denom,
        products,
        all_at_least_one,
        max_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::congruence_lattice;
    use crate::rational::rat;

    fn boxed(w: &[Rational]) -> Body {
        WeightedBox::new(w.to_vec()).unwrap().into()
    }

    #[test]
    fn standard_lattice() {
        let p = successive_minima(&IntLattice::standard(2), &boxed(&[int(1), int(1)])).unwrap();
        assert_eq!(p.lambdas, vec![int(1), int(1)]);
        let mut w = p.witnesses.clone();
        w.sort();
        assert_eq!(w, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn congruence_lattice_minima() {
        let l = congruence_lattice(&[1, 1], 5).unwrap();
        let p = successive_minima(&l, &boxed(&[int(1), int(1)])).unwrap();
        assert_eq!(p.lambdas, vec![int(1), int(3)]);
        assert_eq!(p.witnesses, vec![vec![1, 1], vec![2, -3]]);
    }

    #[test]
    fn weighted_box_minima() {
        let p = successive_minima(&IntLattice::standard(2), &boxed(&[int(2), int(1)])).unwrap();
        assert_eq!(p.lambdas, vec![rat(1, 2), int(1)]);
        assert_eq!(p.witnesses[0], vec![1, 0]);
    }

    #[test]
    fn minkowski_examples() {
        let unit = boxed(&[int(1), int(1)]);
        let r = minkowski_check(&IntLattice::standard(2), &unit).unwrap();
        assert_eq!(r.ratio, int(4));
        assert!(r.holds);
        let l = congruence_lattice(&[1, 1], 5).unwrap();
        let r = minkowski_check(&l, &unit).unwrap();
        assert_eq!(r.ratio, rat(12, 5));
        assert!(r.holds);
        let s = minkowski_check(
            &IntLattice::scaled_standard(3, 7).unwrap(),
            &boxed(&[int(7), int(7), int(7)]),
        )
        .unwrap();
        let t =
            minkowski_check(&IntLattice::standard(3), &boxed(&[int(1), int(1), int(1)])).unwrap();
        assert_eq!(s.ratio, t.ratio);
    }

    #[test]
    fn point_counts() {
        let z = IntLattice::standard(2);
        let c = count_lattice_points(&z, &boxed(&[int(2), int(2)]), 1 << 20).unwrap();
        assert_eq!(c.count, 25);
        assert!(c.henk_holds);
        let l = congruence_lattice(&[1, 1], 5).unwrap();
        let c = count_lattice_points(&l, &boxed(&[int(5), int(5)]), 1 << 20).unwrap();
        assert_eq!(c.count, 25);
        let tiny = count_lattice_points(&l, &boxed(&[rat(1, 2), rat(1, 2)]), 1 << 20).unwrap();
        assert_eq!(tiny.count, 1);
    }

    #[test]
    fn transference_examples() {
        let t = transference_check(&IntLattice::standard(3), &WeightedBox::unit(3)).unwrap();
        assert!(t.all_at_least_one);
        assert!(t.max_product <= int(3));
        let l = congruence_lattice(&[1, 1], 5).unwrap();
        let t = transference_check(&l, &WeightedBox::unit(2)).unwrap();
        assert!(t.all_at_least_one);
        // scaling both sides leaves the products unchanged
        let l7 = IntLattice::from_generators(&[vec![7, 7], vec![0, 35]]).unwrap();
        let t7 = transference_check(&l7, &WeightedBox::new(vec![int(7), int(7)]).unwrap()).unwrap();
        assert_eq!(t.products, t7.products);
    }

    #[test]
    fn lower_rank_minima() {
        let rows = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let p = minima_of_rows(&rows, &boxed(&[int(1), int(1), int(1)]), 1 << 20).unwrap();
        assert_eq!(p.lambdas, vec![int(1), int(1)]);
    }

    #[test]
    fn shortest() {
        let l = congruence_lattice(&[1, 1], 5).unwrap();
        let s = shortest_vector(l.basis(), &boxed(&[int(1), int(1)]), 1 << 20).unwrap();
        assert_eq!(s.vector, vec![1, 1]);
    }
}
