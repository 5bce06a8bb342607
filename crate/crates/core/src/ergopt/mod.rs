//! Exact ergodic optimization for locally constant observables on finite
//! edge shifts.
//!
//! For an edge observable the minimum of `∫ f dμ` over invariant measures is
//! attained on a periodic-orbit measure, so the minimizing value is the
//! minimum cycle mean of the weighted graph. Everything here runs in exact
//! rational arithmetic.
//!
//! Tie-breaking between minimizing cycles: each simple cycle is written
//! starting from its smallest vertex (declaration order) and cycles are
//! compared as sequences of edge indices.

mod balance;
mod brute;
mod critical;
mod cycles;
mod karp;
mod morris;

pub use balance::{balance_check, BalanceReport};
pub use brute::{brute_force_min_cycle_mean, simple_cycles, simple_cycles_within as simple_cycles_in, BRUTE_FORCE_MAX_VERTICES};
pub use critical::{critical_subgraph, CriticalSubgraph};
pub use cycles::{canonical_rotation, cycle_integral, cycle_integral_exact, CycleMeasure};
pub use karp::karp_min_mean;
pub use morris::{morris_point, morris_point_from, prefix_sums_nonpositive};

use serde::Serialize;
use thiserror::Error;

use crate::numeric::Rational;
use crate::systems::SystemError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ErgoptError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("brute-force enumeration supports at most {max} vertices, system has {got}")]
    TooLarge { max: usize, got: usize },
    #[error("negative cycle in reduced weights: fbar is not the minimum")]
    NotMinimum,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Karp,
    BruteForce,
}

/// Minimizing value `f̄` with a minimizing simple cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct MinMeanResult {
    pub fbar: Rational,
    pub witness_cycle: Vec<usize>,
    pub method: Method,
}

impl MinMeanResult {
    pub fn witness(&self) -> CycleMeasure {
        CycleMeasure::from_trusted(self.witness_cycle.clone())
    }
}
