//! Monte Carlo measure of `{t ∈ [0,1]^d : {Σ_i m_{ij} t_i} <= ε_j for all j}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hnf;
use crate::error::{invalid, Result};

pub const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub estimate: f64,
    /// `∏ ε_j`.
    pub product: f64,
    /// Binomial standard deviation at `p = ∏ ε_j`.
    pub sigma: f64,
    /// Three standard deviations.
    pub half_width: f64,
    /// `estimate / ∏ ε_j`, the empirical constant.
    pub ratio: f64,
}

impl MeasureEstimate {
    /// Whether the estimate lies within `k` standard deviations of `∏ ε_j`.
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.estimate - self.product).abs() <= k * self.sigma
    }
}

pub fn fractional_measure(
    m: &[Vec<i128>],
    eps: &[f64],
    samples: u64,
    seed: u64,
) -> Result<MeasureEstimate> {
    let d = m.len();
    if d == 0 || m.iter().any(|r| r.len() != d) {
        return invalid("M must be a nonempty square matrix");
    }
    if eps.len() != d {
        return invalid(format!("ε must have length {d}"));
    }
    if eps.iter().any(|&e| !(e > 0.0 && e <= 0.5)) {
        return invalid("each ε_j must lie in (0, 1/2]");
    }
    if samples == 0 {
        return invalid("need at least one sample");
    }
    if hnf::det(&hnf::to_big(m)) == 0.into() {
        return invalid("M must be nonsingular");
    }
    let mf: Vec<Vec<f64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0.0f64; d];
    let mut hits = 0u64;
    for _ in 0..samples {
        for x in t.iter_mut() {
            *x = rng.gen::<f64>();
        }
        let inside = (0..d).all(|j| {
            let y: f64 = (0..d).map(|i| mf[i][j] * t[i]).sum();
            y - y.floor() <= eps[j]
        });
        if inside {
            hits += 1;
        }
    }
    let product: f64 = eps.iter().product();
    let estimate = hits as f64 / samples as f64;
    let sigma = (product * (1.0 - product) / samples as f64).sqrt();
    Ok(MeasureEstimate {
        samples,
        hits,
        seed,
        estimate,
        product,
        sigma,
        half_width: 3.0 * sigma,
        ratio: estimate / product,
    })
}
