//! Small integer solutions of homogeneous linear systems.
//!
//! The integer kernel of `M` is saturated (it comes from the last rows of a
//! unimodular transform), and its successive minima under the sup-norm give
//! independent solutions whose product of heights is as small as possible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::body::{Body, WeightedBox};
use super::enumerate::DEFAULT_NODE_BUDGET;
use super::hnf;
use super::minima::{minima_of_rows, serialize_bigint};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvSolution {
    /// `d - d0` independent integer solutions of `M w = 0`.
    pub vectors: Vec<Vec<i128>>,
    /// `max_i |w_{j,i}|` per vector.
    pub heights: Vec<i128>,
    #[serde(serialize_with = "serialize_bigint")]
    pub height_product: BigInt,
    /// `det(M M^T)`, by Cauchy-Binet.
    #[serde(serialize_with = "serialize_bigint")]
    pub gram_det: BigInt,
    /// gcd of the maximal minors of `M`.
    #[serde(serialize_with = "serialize_bigint")]
    pub minor_gcd: BigInt,
    /// `∏ heights <= (√det(M M^T) / D)^{1/(d-d0)}`.
    pub rooted_bound_holds: bool,
    /// `∏ heights <= √det(M M^T) / D`.
    pub linear_bound_holds: bool,
    pub rooted_bound: f64,
    pub linear_bound: f64,
}

/// Rows of a unimodular `U` with `U Mᵀ` in echelon form, past the rank.
pub fn saturated_kernel(m: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let d0 = m.len();
    let d = m.first().map_or(0, Vec::len);
    let mt: hnf::BigMatrix = (0..d)
        .map(|j| (0..d0).map(|i| BigInt::from(m[i][j])).collect())
        .collect();
    let (h, u) = hnf::hnf_with_transform(&mt);
    let rank = h.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count();
    hnf::to_small(&u[rank..].to_vec())
}

pub fn bv_small_solutions(m: &[Vec<i128>]) -> Result<BvSolution> {
    bv_small_solutions_with_budget(m, DEFAULT_NODE_BUDGET)
}

pub fn bv_small_solutions_with_budget(m: &[Vec<i128>], budget: u64) -> Result<BvSolution> {
    let d0 = m.len();
    let d = m.first().map_or(0, Vec::len);
    if d0 == 0 || d == 0 || m.iter().any(|r| r.len() != d) {
        return invalid("M must be a nonempty rectangular matrix");
    }
    if d0 >= d {
        return invalid(format!("need fewer equations than unknowns, got {d0}×{d}"));
    }
    let big = hnf::to_big(m);
    if hnf::rank(&big) != d0 {
        return invalid("M must have full row rank");
    }
    let kernel = saturated_kernel(m)?;
    let body: Body = WeightedBox::unit(d).into();
    let profile = minima_of_rows(&kernel, &body, budget)?;
    let vectors = profile.witnesses;
    let heights: Vec<i128> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x.abs()).max().unwrap_or(0))
        .collect();
    let height_product: BigInt = heights.iter().map(|&h| BigInt::from(h)).product();

    let minors = hnf::maximal_minors(&big);
    let gram_det: BigInt = minors.iter().map(|x| x * x).sum();
    let minor_gcd = minors.iter().fold(BigInt::zero(), |g, x| g.gcd(x));

    let k = (d - d0) as u32;
    let d2 = &minor_gcd * &minor_gcd;
    let rooted_bound_holds =
        num_traits::pow(height_product.clone(), 2 * k as usize) * &d2 <= gram_det;
    let linear_bound_holds = &height_product * &height_product * &d2 <= gram_det;
    let linear_bound =
        gram_det.to_f64().unwrap_or(f64::INFINITY).sqrt() / minor_gcd.to_f64().unwrap_or(1.0);
    let rooted_bound = linear_bound.powf(1.0 / k as f64);
    Ok(BvSolution {
        vectors,
        heights,
        height_product,
        gram_det,
        minor_gcd,
        rooted_bound_holds,
        linear_bound_holds,
        rooted_bound,
        linear_bound,
    })
}

/// Checks `M w = 0` exactly.
pub fn solves(m: &[Vec<i128>], w: &[i128]) -> bool {
    m.iter().all(|row| {
        row.iter()
            .zip(w)
            .map(|(&a, &b)| BigInt::from(a) * BigInt::from(b))
            .sum::<BigInt>()
            .is_zero()
    })
}
