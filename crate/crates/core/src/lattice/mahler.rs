//! A lattice basis adapted to the successive minima of a box.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::body::{Body, WeightedBox};
use super::hnf::{self, BigMatrix};
use super::minima::{successive_minima, MinimaProfile};
use super::IntLattice;
use crate::error::{Error, Result};
use crate::rational::{self, int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MahlerBasis {
    /// `w_1, ..., w_n`.
    pub basis: Vec<Vec<i128>>,
    pub minima: MinimaProfile,
    /// `‖w_j‖_D / λ_j`.
    #[serde(serialize_with = "rational::serialize_vec")]
    pub factors: Vec<Rational>,
    /// Every `‖w_j‖_D <= max(1, j/2)·λ_j`.
    pub factor_bound_holds: bool,
    /// `β_j = Σ_i c_i |(W^{-1})_{ij}|`, so `|b_j| <= β_j` for `b` in `L ∩ D`.
    #[serde(serialize_with = "rational::serialize_vec")]
    pub betas: Vec<Rational>,
    /// `C = max_j λ_j β_j`, so `|b_j| <= C / λ_j`.
    #[serde(serialize_with = "rational::serialize")]
    pub constant: Rational,
    #[serde(skip)]
    inverse: Vec<Vec<Rational>>,
    #[serde(skip)]
    widths: Vec<Rational>,
}

impl MahlerBasis {
    /// Coordinates of `b` in the basis, if `b` lies in the lattice.
    pub fn coefficients(&self, b: &[i128]) -> Option<Vec<i128>> {
        let n = self.basis.len();
        if b.len() != n {
            return None;
        }
        (0..n)
            .map(|j| {
                let c: Rational = (0..n).map(|i| int(b[i]) * &self.inverse[i][j]).sum();
                if c.is_integer() {
                    c.to_integer().to_i128()
                } else {
                    None
                }
            })
            .collect()
    }

    /// For `b` in `L ∩ D`: every coordinate obeys `|b_j| <= C / λ_j`.
    pub fn certificate_holds(&self, b: &[i128]) -> Option<bool> {
        let inside = b.iter().zip(&self.widths).all(|(&x, c)| &int(x.abs()) <= c);
        if !inside {
            return None;
        }
        let coeffs = self.coefficients(b)?;
        Some(
            coeffs
                .iter()
                .zip(&self.minima.lambdas)
                .all(|(&x, lam)| int(x.abs()) * lam <= self.constant),
        )
    }
}

fn round_half_up(x: &Rational) -> BigInt {
    (x + rat(1, 2)).floor().to_integer()
}

pub fn mahler_basis(l: &IntLattice, bx: &WeightedBox) -> Result<MahlerBasis> {
    let body = Body::Box(bx.clone());
    let minima = successive_minima(l, &body)?;
    let n = l.dim();
    let v = &minima.witnesses;

    // T: witness coordinates in the HNF basis; column-reduce T = S·U.
    let t: Vec<Vec<i128>> = v
        .iter()
        .map(|w| {
            l.coordinates(w)
                .ok_or(Error::InvalidInput("witness outside lattice".into()))
        })
        .collect::<Result<_>>()?;
    let tt: BigMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(t[j][i])).collect())
        .collect();
    let (h, _) = hnf::hnf_with_transform(&tt);
    // S = H^T is lower triangular with positive diagonal.
    let s: BigMatrix = (0..n)
        .map(|i| (0..n).map(|j| h[j][i].clone()).collect())
        .collect();

    // W = S^{-1} V by forward substitution.
    let vb = hnf::to_big(v);
    let mut w: BigMatrix = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vb[j].clone();
        for i in 0..j {
            for (x, y) in row.iter_mut().zip(&w[i]) {
                *x -= &s[j][i] * y;
            }
        }
        for x in row.iter_mut() {
            let (q, r) = x.div_rem(&s[j][j]);
            if !r.is_zero() {
                return Err(Error::InvalidInput("non-integral basis step".into()));
            }
            *x = q;
        }
        w.push(row);
    }

    // Size-reduce against the witnesses.
    let vinv = hnf::inverse(&vb).ok_or(Error::InvalidInput("dependent witnesses".into()))?;
    for j in 0..n {
        if s[j][j].is_one() {
            w[j] = vb[j].clone();
            continue;
        }
        let theta: Vec<Rational> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| Rational::from_integer(w[j][k].clone()) * &vinv[k][i])
                    .sum()
            })
            .collect();
        for i in 0..j {
            let q = round_half_up(&theta[i]);
            if !q.is_zero() {
                for k in 0..n {
                    let t = &q * &vb[i][k];
                    w[j][k] -= t;
                }
            }
        }
    }

    let basis = hnf::to_small(&w)?;
    let factors: Vec<Rational> = basis
        .iter()
        .zip(&minima.lambdas)
        .map(|(b, lam)| body.norm(b) / lam)
        .collect();
    let factor_bound_holds = factors
        .iter()
        .enumerate()
        .all(|(j, f)| f <= &rat((j as i128 + 1).max(2), 2));
    let inverse = hnf::inverse(&w).ok_or(Error::InvalidInput("basis is singular".into()))?;
    let widths = bx.widths().to_vec();
    let betas: Vec<Rational> = (0..n)
        .map(|j| (0..n).map(|i| &widths[i] * inverse[i][j].abs()).sum())
        .collect();
    let constant = betas
        .iter()
        .zip(&minima.lambdas)
        .map(|(b, lam)| b * lam)
        .max()
        .unwrap();
    Ok(MahlerBasis {
        basis,
        minima,
        factors,
        factor_bound_holds,
        betas,
        constant,
        inverse,
        widths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::congruence_lattice;

    #[test]
    fn standard_lattice_unit_box() {
        let m = mahler_basis(&IntLattice::standard(3), &WeightedBox::unit(3)).unwrap();
        let mut b = m.basis.clone();
        b.sort();
        assert_eq!(b, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(m.constant, int(1));
        assert_eq!(m.certificate_holds(&[1, -1, 0]), Some(true));
    }

    #[test]
    fn congruence_lattice_basis() {
        let l = congruence_lattice(&[1, 1], 5).unwrap();
        let m = mahler_basis(&l, &WeightedBox::unit(2)).unwrap();
        assert_eq!(m.basis[0], vec![1, 1]);
        let b: Body = WeightedBox::unit(2).into();
        assert!(b.norm(&m.basis[1]) <= int(3));
        assert!(m.factor_bound_holds);
        let rebuilt = IntLattice::from_generators(&m.basis).unwrap();
        assert_eq!(rebuilt, l);
    }

    #[test]
    fn nontrivial_index() {
        // witnesses span an index-2 sublattice here
        let l =
            IntLattice::from_generators(&[vec![1, 1, 0], vec![1, -1, 0], vec![1, 0, 1]]).unwrap();
        let bx = WeightedBox::unit(3);
        let m = mahler_basis(&l, &bx).unwrap();
        assert_eq!(IntLattice::from_generators(&m.basis).unwrap(), l);
        assert!(m.factor_bound_holds);
        for x in -1..=1 {
            for y in -1..=1 {
                for z in -1..=1 {
                    let p = [x, y, z];
                    if l.contains(&p) {
                        assert_eq!(m.certificate_holds(&p), Some(true));
                    }
                }
            }
        }
    }
}
