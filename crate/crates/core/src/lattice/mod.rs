//! Geometry of numbers for full-rank integer lattices and weighted boxes.
//!
//! Lattices are stored by their row-style Hermite normal form, so equality of
//! lattices is equality of bases. Rational lattices (duals) carry a common
//! denominator over an integer lattice.

pub mod body;
pub mod bv;
pub mod enumerate;
pub mod hnf;
pub mod mahler;
pub mod measure;
pub mod minima;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub use body::{Body, DualBody, WeightedBox};
pub use bv::{bv_small_solutions, BvSolution};
pub use mahler::{mahler_basis, MahlerBasis};
pub use measure::{fractional_measure, MeasureEstimate};
pub use minima::{
    count_lattice_points, minkowski_check, shortest_vector, successive_minima, transference_check,
    MinimaProfile, MinkowskiRecord, PointCount, TransferenceRecord,
};

/// A full-rank sublattice of `Z^n`, kept in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntLattice {
    basis: Vec<Vec<i128>>,
    covolume: i128,
}

impl IntLattice {
    /// The lattice spanned by `rows`, which must have full rank `n`.
    pub fn from_generators(rows: &[Vec<i128>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 {
            return invalid("a lattice needs at least one nonempty generator");
        }
        if rows.iter().any(|r| r.len() != n) {
            return invalid("generators must share one dimension");
        }
        let h = hnf::hnf(&hnf::to_big(rows));
        if h.len() != n {
            return invalid(format!("generators have rank {} < {n}", h.len()));
        }
        let basis = hnf::to_small(&h)?;
        let covolume = (0..n)
            .try_fold(1i128, |acc, i| acc.checked_mul(basis[i][i]))
            .ok_or(Error::Overflow("covolume"))?;
        Ok(Self { basis, covolume })
    }

    pub fn standard(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i128).collect())
            .collect();
        Self { basis, covolume: 1 }
    }

    /// `c·Z^n`.
    pub fn scaled_standard(n: usize, c: i128) -> Result<Self> {
        let rows: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { c } else { 0 }).collect())
            .collect();
        Self::from_generators(&rows)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i128>] {
        &self.basis
    }

    pub fn covolume(&self) -> i128 {
        self.covolume
    }

    /// Integer coordinates of `v` in the stored basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[i128]) -> Option<Vec<i128>> {
        let n = self.dim();
        if v.len() != n {
            return None;
        }
        let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut coords = Vec::with_capacity(n);
        for i in 0..n {
            let piv = BigInt::from(self.basis[i][i]);
            let (q, r) = rest[i].div_rem(&piv);
            if !r.is_zero() {
                return None;
            }
            for j in i..n {
                rest[j] -= &q * BigInt::from(self.basis[i][j]);
            }
            coords.push(q.to_i128()?);
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// `{(n_1..n_d) : n_j ≡ a_j ℓ (mod m) for some ℓ}`.
pub fn congruence_lattice(a: &[i128], m: u64) -> Result<IntLattice> {
    if a.is_empty() {
        return invalid("the generator must have at least one entry");
    }
    if m < 2 {
        return invalid("modulus must be at least 2");
    }
    let d = a.len();
    let mi = m as i128;
    let mut rows = Vec::with_capacity(d + 1);
    rows.push(a.iter().map(|&x| x.rem_euclid(mi)).collect());
    for j in 0..d {
        rows.push((0..d).map(|i| if i == j { mi } else { 0 }).collect());
    }
    IntLattice::from_generators(&rows)
}

/// The rational lattice `(1/denom)·lattice`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaledLattice {
    pub denom: i128,
    pub lattice: IntLattice,
}

impl ScaledLattice {
    pub fn integral(lattice: IntLattice) -> Self {
        Self { denom: 1, lattice }
    }

    /// `{y : <y, z> ∈ Z for all z in this lattice}`.
    pub fn dual(&self) -> Result<ScaledLattice> {
        let b = hnf::to_big(self.lattice.basis());
        let inv = hnf::inverse(&b).ok_or(Error::InvalidInput("singular basis".into()))?;
        let n = b.len();
        // rows of the inverse transpose, over a common denominator
        let q = inv
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| (&inv[j][i] * &q).to_integer()).collect())
            .collect();
        // dual of (1/s)L is s·L*
        let s = BigInt::from(self.denom);
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * &s).collect())
            .collect();
        let h = hnf::hnf(&rows);
        let g = h.iter().flatten().fold(q.clone(), |acc, x| acc.gcd(x));
        let h: Vec<Vec<BigInt>> = h
            .iter()
            .map(|r| r.iter().map(|x| x / &g).collect())
            .collect();
        let denom = (q / &g)
            .to_i128()
            .ok_or(Error::Overflow("dual denominator"))?;
        let lattice = IntLattice::from_generators(&hnf::to_small(&h)?)?;
        Ok(ScaledLattice { denom, lattice })
    }

    /// Covolume as an exact rational.
    pub fn covolume(&self) -> crate::rational::Rational {
        let n = self.lattice.dim();
        crate::rational::Rational::new(
            BigInt::from(self.lattice.covolume()),
            num_traits::pow(BigInt::from(self.denom), n),
        )
        .abs()
    }
}

pub fn dual_lattice(l: &IntLattice) -> Result<ScaledLattice> {
    ScaledLattice::integral(l.clone()).dual()
}
