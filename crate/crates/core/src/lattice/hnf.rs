//! Hermite normal form, unimodular reduction and exact determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type BigMatrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i128>]) -> BigMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_small(rows: &BigMatrix) -> Result<Vec<Vec<i128>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i128().ok_or(Error::Overflow("lattice basis entry")))
                .collect()
        })
        .collect()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The output keeps only nonzero rows. Each row has a positive pivot strictly
/// to the right of the previous row's pivot, and the entries above every pivot
/// lie in `[0, pivot)`.
pub fn hnf(rows: &BigMatrix) -> BigMatrix {
    let (h, _) = reduce(rows, false);
    h
}

/// Row reduction returning `(H, U)` with `U * rows = H'`, where `H'` is the
/// echelon form padded with the zero rows that `H` drops. `U` is unimodular.
pub fn hnf_with_transform(rows: &BigMatrix) -> (BigMatrix, BigMatrix) {
    reduce(rows, true)
}

fn reduce(rows: &BigMatrix, track: bool) -> (BigMatrix, BigMatrix) {
    let mut a = rows.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut u: BigMatrix = if track {
        (0..nrows)
            .map(|i| (0..nrows).map(|j| BigInt::from((i == j) as i32)).collect())
            .collect()
    } else {
        Vec::new()
    };
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        loop {
            // smallest nonzero entry in column c among rows r..
            let piv = (r..nrows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = piv else { break };
            a.swap(r, p);
            if track {
                u.swap(r, p);
            }
            let mut done = true;
            for i in r + 1..nrows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                sub_row(&mut a, i, r, &q);
                if track {
                    sub_row(&mut u, i, r, &q);
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..nrows).all(|i| a[i][c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            negate_row(&mut a, r);
            if track {
                negate_row(&mut u, r);
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                sub_row(&mut a, i, r, &q);
                if track {
                    sub_row(&mut u, i, r, &q);
                }
            }
        }
        r += 1;
    }
    if track {
        (a, u)
    } else {
        a.truncate(r);
        (a, u)
    }
}

fn sub_row(a: &mut BigMatrix, target: usize, src: usize, q: &BigInt) {
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

fn negate_row(a: &mut BigMatrix, i: usize) {
    for x in a[i].iter_mut() {
        *x = -&*x;
    }
}

/// Rank of an integer matrix.
pub fn rank(rows: &BigMatrix) -> usize {
    hnf(rows).len()
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn det(m: &BigMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square integer matrix over the rationals; `None` if singular.
pub fn inverse(m: &BigMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            r.extend((0..n).map(|j| BigRational::from_integer(BigInt::from((i == j) as i32))));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// All `k`-element subsets of `0..n`, ascending.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Maximal (`rows × rows`) minors of a wide matrix.
pub fn maximal_minors(m: &BigMatrix) -> Vec<BigInt> {
    let k = m.len();
    let n = m.first().map_or(0, Vec::len);
    subsets(n, k)
        .into_iter()
        .map(|cols| {
            let sub: BigMatrix = m
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            det(&sub)
        })
        .collect()
}

/// Incremental exact independence test for integer vectors.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[i128]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (p, r) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let a = r[*p].clone();
            let b = v[*p].clone();
            for (x, y) in v.iter_mut().zip(r.iter()) {
                *x = &a * &*x - &b * y;
            }
            let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in v.iter_mut() {
                    *x /= &g;
                }
            }
        }
        v
    }

    pub fn is_independent(&self, v: &[i128]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    /// Adds `v` if it is independent of the stored vectors; returns whether it was added.
    pub fn insert(&mut self, v: &[i128]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}
