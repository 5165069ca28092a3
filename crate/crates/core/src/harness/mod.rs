//! Bound evaluators and the verification sweep.

pub mod bounds;
pub mod config;
pub mod sweep;

pub use bounds::{
    alpha_beta, below_crossover, cross_bound, general_bound, short_bound, BoundParams, ShortBound,
};
pub use config::SweepConfig;
pub use sweep::{run_cell, run_sweep, CellRow, SeriesFit, SweepReport};
