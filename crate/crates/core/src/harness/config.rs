//! Plain-text `key = value` sweep configuration.
//!
//! Lists are comma-separated; `#` starts a comment. Unknown keys are errors.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub degrees: Vec<usize>,
    pub moduli: Vec<u64>,
    pub heights: Vec<u64>,
    pub polys_per_cell: u32,
    pub seed: u64,
    /// Largest allowed `H^2` per cell.
    pub budget: u64,
    /// Exponent `e` in `T <= C H^e · bound`.
    pub slack_exponent: f64,
    /// Constant `C` in `T <= C H^e · bound`.
    pub slack_constant: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            degrees: vec![2, 3],
            moduli: vec![1009, 10_007, 100_003, 999_983],
            heights: vec![4, 8, 16, 32, 64, 128, 256, 500],
            polys_per_cell: 2,
            seed: 1,
            budget: 1_000_000,
            slack_exponent: 0.5,
            slack_constant: 16.0,
        }
    }
}

impl SweepConfig {
    /// A configuration with nothing to run.
    pub fn empty() -> Self {
        Self {
            degrees: vec![],
            moduli: vec![],
            heights: vec![],
            ..Self::default()
        }
    }

    /// Starts from the defaults and overrides every key present in `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", no + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "degrees" => cfg.degrees = list(value).map_err(err)?,
                "moduli" => cfg.moduli = list(value).map_err(err)?,
                "heights" => cfg.heights = list(value).map_err(err)?,
                "polys_per_cell" => cfg.polys_per_cell = scalar(value).map_err(err)?,
                "seed" => cfg.seed = scalar(value).map_err(err)?,
                "budget" => cfg.budget = scalar(value).map_err(err)?,
                "slack_exponent" => cfg.slack_exponent = scalar(value).map_err(err)?,
                "slack_constant" => cfg.slack_constant = scalar(value).map_err(err)?,
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(msg.into()));
        if self.degrees.iter().any(|&d| d < 2) {
            return bad("degrees must be at least 2");
        }
        if self.moduli.iter().any(|&m| !(2..1 << 40).contains(&m)) {
            return bad("moduli must lie in [2, 2^40)");
        }
        if self.heights.contains(&0) {
            return bad("heights must be positive");
        }
        if self.polys_per_cell > 255 {
            return bad("polys_per_cell must be at most 255");
        }
        Ok(())
    }
}

fn scalar<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse {s:?}"))
}

fn list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(scalar)
        .collect()
}
