//! Exact counting for additive energies of polynomial images modulo `m`,
//! Vinogradov-type systems, integer lattices under weighted norms, polynomial
//! equations and congruences, and multiplicative character sums.

pub mod charsum;
pub mod energy;
pub mod eqcount;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod rational;
pub mod ring;
pub mod stats;
pub mod vinogradov;

pub use error::{Error, Result};
pub use rational::Rational;
pub use ring::{Interval, PolyMod};
