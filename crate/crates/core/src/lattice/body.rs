//! Symmetric convex bodies: weighted boxes and their polar cross-polytopes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rational::{self, Rational};

/// `{x : |x_i| <= c_i}` with gauge `max_i |x_i| / c_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedBox {
    #[serde(serialize_with = "rational::serialize_vec")]
    widths: Vec<Rational>,
}

/// `{y : Σ c_i |y_i| <= 1}` with gauge `Σ c_i |y_i|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualBody {
    #[serde(serialize_with = "rational::serialize_vec")]
    weights: Vec<Rational>,
}

fn check_positive(v: &[Rational], what: &str) -> Result<()> {
    if v.is_empty() {
        return invalid(format!("{what} must be nonempty"));
    }
    if v.iter().any(|c| !c.is_positive()) {
        return invalid(format!("{what} must be positive"));
    }
    Ok(())
}

impl WeightedBox {
    pub fn new(widths: Vec<Rational>) -> Result<Self> {
        check_positive(&widths, "box half-widths")?;
        Ok(Self { widths })
    }

    pub fn unit(n: usize) -> Self {
        Self {
            widths: vec![Rational::one(); n],
        }
    }

    pub fn widths(&self) -> &[Rational] {
        &self.widths
    }

    pub fn dim(&self) -> usize {
        self.widths.len()
    }

    pub fn polar(&self) -> DualBody {
        DualBody {
            weights: self.widths.clone(),
        }
    }

    pub fn scaled(&self, t: &Rational) -> Self {
        Self {
            widths: self.widths.iter().map(|c| c * t).collect(),
        }
    }
}

impl DualBody {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        check_positive(&weights, "dual-body weights")?;
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

/// A body used as a norm by the enumeration routines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Box(WeightedBox),
    Cross(DualBody),
}

impl From<WeightedBox> for Body {
    fn from(b: WeightedBox) -> Self {
        Body::Box(b)
    }
}

impl From<DualBody> for Body {
    fn from(b: DualBody) -> Self {
        Body::Cross(b)
    }
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Box(b) => b.dim(),
            Body::Cross(b) => b.dim(),
        }
    }

    /// Exact gauge of an integer vector.
    pub fn norm(&self, v: &[i128]) -> Rational {
        match self {
            Body::Box(b) => v
                .iter()
                .zip(&b.widths)
                .map(|(&x, c)| Rational::from_integer(BigInt::from(x).abs()) / c)
                .max()
                .unwrap_or_else(Rational::zero),
            Body::Cross(b) => v
                .iter()
                .zip(&b.weights)
                .map(|(&x, c)| Rational::from_integer(BigInt::from(x).abs()) * c)
                .sum(),
        }
    }

    /// Gauge of a rational vector.
    pub fn norm_rational(&self, v: &[Rational]) -> Rational {
        match self {
            Body::Box(b) => v
                .iter()
                .zip(&b.widths)
                .map(|(x, c)| x.abs() / c)
                .max()
                .unwrap_or_else(Rational::zero),
            Body::Cross(b) => v.iter().zip(&b.weights).map(|(x, c)| x.abs() * c).sum(),
        }
    }

    pub fn volume(&self) -> Rational {
        let two = Rational::from_integer(BigInt::from(2));
        match self {
            Body::Box(b) => b.widths.iter().map(|c| &two * c).product(),
            Body::Cross(b) => {
                let n = b.weights.len();
                let fact: BigInt = (1..=n).map(BigInt::from).product();
                let prod: Rational = b.weights.iter().cloned().product();
                Rational::from_integer(num_traits::pow(BigInt::from(2), n))
                    / (Rational::from_integer(fact) * prod)
            }
        }
    }

    /// Per-coordinate factors `s_i` and `κ` such that `norm(v) <= R` implies
    /// `‖(s_i v_i)‖_2 <= κ R`.
    pub(crate) fn ellipsoid(&self) -> (Vec<f64>, f64) {
        match self {
            Body::Box(b) => (
                b.widths.iter().map(|c| 1.0 / rational::to_f64(c)).collect(),
                (b.widths.len() as f64).sqrt(),
            ),
            Body::Cross(b) => (b.weights.iter().map(rational::to_f64).collect(), 1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn gauges() {
        let b: Body = WeightedBox::new(vec![int(2), int(1)]).unwrap().into();
        assert_eq!(b.norm(&[1, 0]), rat(1, 2));
        assert_eq!(b.norm(&[-3, 1]), rat(3, 2));
        assert_eq!(b.volume(), int(8));
        let d: Body = WeightedBox::new(vec![int(2), int(1)])
            .unwrap()
            .polar()
            .into();
        assert_eq!(d.norm(&[1, -1]), int(3));
        assert_eq!(d.volume(), int(1));
    }

    #[test]
    fn polarity_on_sampled_pairs() {
        let bx = WeightedBox::new(vec![rat(3, 2), rat(1, 3), int(2)]).unwrap();
        let boxb: Body = bx.clone().into();
        let dual: Body = bx.polar().into();
        let pts: Vec<Vec<Rational>> = (-2..=2)
            .flat_map(|a| (-2..=2).map(move |b| vec![rat(a, 3), rat(b, 7), rat(a * b, 5)]))
            .collect();
        for z in &pts {
            for y in &pts {
                if boxb.norm_rational(z) <= int(1) && dual.norm_rational(y) <= int(1) {
                    let ip: Rational = z.iter().zip(y).map(|(a, b)| a * b).sum();
                    assert!(ip <= int(1));
                }
            }
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(WeightedBox::new(vec![int(1), int(0)]).is_err());
        assert!(DualBody::new(vec![]).is_err());
    }
}
