//! Short-vector enumeration under a body gauge.
//!
//! The basis is LLL-reduced in floating point on the body's scaled Euclidean
//! metric (the row updates themselves are exact), then Fincke-Pohst
//! enumeration collects every lattice vector in an ellipsoid that contains
//! `R·D`. Exact gauges decide membership.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::body::Body;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Default node budget for one enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

const SLACK: f64 = 1e-9;
const LLL_DELTA: f64 = 0.99;

struct GramSchmidt {
    mu: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

fn scaled(row: &[i128], scale: &[f64]) -> Vec<f64> {
    row.iter().zip(scale).map(|(&x, &s)| x as f64 * s).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(rows: &[Vec<i128>], scale: &[f64]) -> GramSchmidt {
    let k = rows.len();
    let b: Vec<Vec<f64>> = rows.iter().map(|r| scaled(r, scale)).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut mu = vec![vec![0.0; k]; k];
    let mut norms = vec![0.0; k];
    for i in 0..k {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 {
                dot(&b[i], &star[j]) / norms[j]
            } else {
                0.0
            };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = dot(&v, &v);
        mu[i][i] = 1.0;
        star.push(v);
    }
    GramSchmidt { mu, norms }
}

fn axpy(target: &mut [i128], q: i128, src: &[i128]) -> Result<()> {
    for (t, &s) in target.iter_mut().zip(src) {
        *t = q
            .checked_mul(s)
            .and_then(|p| t.checked_sub(p))
            .ok_or(Error::Overflow("lattice reduction"))?;
    }
    Ok(())
}

/// LLL reduction of independent integer rows on the metric `‖(s_i x_i)‖_2`.
pub fn lll(rows: &[Vec<i128>], scale: &[f64]) -> Result<Vec<Vec<i128>>> {
    let mut b = rows.to_vec();
    let k = b.len();
    if k <= 1 {
        return Ok(b);
    }
    let cap = 10_000 * k * k;
    let mut steps = 0;
    let mut i = 1;
    while i < k {
        steps += 1;
        if steps > cap {
            // Stop polishing; enumeration stays exact on any basis.
            break;
        }
        let gs = gram_schmidt(&b, scale);
        let mut mu = gs.mu[i].clone();
        for j in (0..i).rev() {
            let q = mu[j].round();
            if q != 0.0 && q.is_finite() {
                let qi = q as i128;
                let src = b[j].clone();
                axpy(&mut b[i], qi, &src)?;
                for (l, m) in mu.iter_mut().enumerate().take(j + 1) {
                    *m -= q * gs.mu[j][l];
                }
            }
        }
        let gs = gram_schmidt(&b, scale);
        let lhs = gs.norms[i];
        let rhs = (LLL_DELTA - gs.mu[i][i - 1].powi(2)) * gs.norms[i - 1];
        if lhs >= rhs {
            i += 1;
        } else {
            b.swap(i, i - 1);
            i = (i - 1).max(1);
        }
    }
    Ok(b)
}

/// `-v` if the leading nonzero entry of `v` is negative, else `v`.
pub fn sign_normalize(v: &[i128]) -> Vec<i128> {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.iter().map(|&y| -y).collect(),
        _ => v.to_vec(),
    }
}

fn is_normalized(v: &[i128]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// A lattice vector with its exact gauge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVector {
    pub norm: Rational,
    pub vector: Vec<i128>,
}

fn euclid_sq(v: &[i128]) -> BigInt {
    v.iter().map(|&x| BigInt::from(x) * BigInt::from(x)).sum()
}

/// Order used for tie-breaking: gauge, then Euclidean length, then lexicographic.
pub fn witness_order(a: &ShortVector, b: &ShortVector) -> Ordering {
    a.norm
        .cmp(&b.norm)
        .then_with(|| euclid_sq(&a.vector).cmp(&euclid_sq(&b.vector)))
        .then_with(|| a.vector.cmp(&b.vector))
}

/// Every nonzero lattice vector with gauge at most `radius`, one per `±` pair
/// (leading nonzero entry positive), sorted by [`witness_order`].
///
/// `rows` must be linearly independent; they may span a proper subspace.
pub fn short_vectors(
    rows: &[Vec<i128>],
    body: &Body,
    radius: &Rational,
    budget: u64,
) -> Result<Vec<ShortVector>> {
    let mut out = Vec::new();
    enumerate(rows, body, radius, budget, |v, norm| {
        if is_normalized(v) {
            out.push(ShortVector {
                norm,
                vector: v.to_vec(),
            });
        }
    })?;
    out.sort_by(witness_order);
    Ok(out)
}

/// Number of lattice vectors (including 0) with gauge at most `radius`.
pub fn count_within(
    rows: &[Vec<i128>],
    body: &Body,
    radius: &Rational,
    budget: u64,
) -> Result<u128> {
    let mut count: u128 = 1;
    enumerate(rows, body, radius, budget, |_, _| count += 1)?;
    Ok(count)
}

/// Calls `visit` for every nonzero lattice vector with gauge at most `radius`.
pub fn enumerate(
    rows: &[Vec<i128>],
    body: &Body,
    radius: &Rational,
    budget: u64,
    mut visit: impl FnMut(&[i128], Rational),
) -> Result<()> {
    let n = body.dim();
    if rows.iter().any(|r| r.len() != n) {
        return crate::error::invalid("basis rows must match the body dimension");
    }
    if n > MAX_DIM {
        return Err(Error::Unsupported(format!(
            "dimension {n} exceeds the enumeration limit {MAX_DIM}"
        )));
    }
    let k = rows.len();
    if k == 0 {
        return Ok(());
    }
    let (scale, kappa) = body.ellipsoid();
    let basis = lll(rows, &scale)?;
    let gs = gram_schmidt(&basis, &scale);
    let r = rational::to_f64(radius) * kappa;
    let bound = r * r * (1.0 + SLACK) + 1e-300;

    let mut x = vec![0i128; k];
    let mut centers = vec![0.0f64; k];
    let mut partial = vec![0.0f64; k + 1];
    let mut nodes: u64 = 0;
    let mut v = vec![0i128; n];

    // Depth-first over levels k-1 .. 0.
    fn range(c: f64, rem: f64, norm: f64) -> (i128, i128) {
        if norm <= 0.0 {
            return (1, 0);
        }
        let w = (rem.max(0.0) / norm).sqrt();
        let eps = SLACK * (1.0 + c.abs() + w);
        ((c - w - eps).ceil() as i128, (c + w + eps).floor() as i128)
    }

    let mut level = k - 1;
    centers[level] = 0.0;
    let (mut lo, mut hi) = range(0.0, bound, gs.norms[level]);
    let mut his = vec![0i128; k];
    his[level] = hi;
    x[level] = lo - 1;
    loop {
        x[level] += 1;
        if x[level] > his[level] {
            if level == k - 1 {
                break;
            }
            level += 1;
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Err(Error::Budget {
                what: "lattice enumeration nodes",
                needed: nodes as u128,
                budget: budget as u128,
            });
        }
        let diff = x[level] as f64 - centers[level];
        let p = partial[level + 1] + diff * diff * gs.norms[level];
        if p > bound {
            continue;
        }
        partial[level] = p;
        if level == 0 {
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for (j, slot) in v.iter_mut().enumerate() {
                let mut acc: i128 = 0;
                for (i, &xi) in x.iter().enumerate() {
                    if xi != 0 {
                        acc = xi
                            .checked_mul(basis[i][j])
                            .and_then(|t| acc.checked_add(t))
                            .ok_or(Error::Overflow("lattice enumeration"))?;
                    }
                }
                *slot = acc;
            }
            let norm = body.norm(&v);
            if &norm <= radius {
                visit(&v, norm);
            }
            continue;
        }
        level -= 1;
        let c: f64 = -(level + 1..k)
            .map(|i| x[i] as f64 * gs.mu[i][level])
            .sum::<f64>();
        centers[level] = c;
        (lo, hi) = range(c, bound - partial[level + 1], gs.norms[level]);
        his[level] = hi;
        x[level] = lo - 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::body::WeightedBox;
    use crate::rational::int;

    fn unit_box(n: usize) -> Body {
        WeightedBox::unit(n).into()
    }

    #[test]
    fn counts_grid_points() {
        let rows = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(
            count_within(&rows, &unit_box(2), &int(2), 1 << 20).unwrap(),
            25
        );
        let skew = vec![vec![1, 0], vec![7, 1]];
        assert_eq!(
            count_within(&skew, &unit_box(2), &int(2), 1 << 20).unwrap(),
            25
        );
    }

    #[test]
    fn short_vectors_are_sign_normalized_and_sorted() {
        let rows = vec![vec![1, 1], vec![0, 5]];
        let vs = short_vectors(&rows, &unit_box(2), &int(3), 1 << 20).unwrap();
        assert_eq!(vs[0].vector, vec![1, 1]);
        assert!(vs.iter().all(|s| is_normalized(&s.vector)));
        assert!(vs
            .windows(2)
            .all(|w| witness_order(&w[0], &w[1]) != Ordering::Greater));
        assert!(vs.iter().any(|s| s.vector == vec![2, -3]));
    }

    #[test]
    fn lower_rank_bases() {
        // x + y + z = 0 inside Z^3
        let rows = vec![vec![1, -1, 0], vec![0, 1, -1]];
        let vs = short_vectors(&rows, &unit_box(3), &int(1), 1 << 20).unwrap();
        assert_eq!(vs.len(), 3);
    }

    #[test]
    fn lll_keeps_the_lattice() {
        let rows = vec![vec![1, 0, 0], vec![100, 1, 0], vec![57, 33, 1]];
        let red = lll(&rows, &[1.0, 1.0, 1.0]).unwrap();
        assert!(red.iter().all(|r| r.iter().all(|x| x.abs() <= 1)));
    }

    #[test]
    fn budget_and_dimension_guards() {
        let rows = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            count_within(&rows, &unit_box(2), &int(1000), 100),
            Err(Error::Budget { .. })
        ));
        let big = vec![vec![1i128; 9]];
        assert!(matches!(
            count_within(&big, &unit_box(9), &int(1), 100),
            Err(Error::Unsupported(_))
        ));
    }
}
