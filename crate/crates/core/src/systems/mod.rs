//! Phase spaces, points and observables.
//!
//! A [`FiniteSystem`] is a directed multigraph in which every vertex has at
//! least one outgoing edge; its phase space is the set of infinite edge paths
//! and the dynamics is the left shift. Computable points are eventually
//! periodic paths ([`SymbolicPoint`]) or, for the super-exponential schedules
//! of the oscillation experiment, concatenations of periodic blocks
//! ([`BlockSchedule`]). Circle rotations ([`RotationSystem`]) are sampled at
//! explicit angles.

mod birkhoff;
mod finite;
mod observable;
mod point;
mod recode;
mod rotation;
mod schedule;
pub mod input;

pub use birkhoff::{BirkhoffProfile, Extremum};
pub use finite::{Edge, FiniteSystem, SystemId};
pub use observable::{evaluate_observable, EdgeObservable, FourierSeries, Observable, Target};
pub use point::{enumerate_points, enumerate_points_within, EventuallyPeriodic, SymbolicPoint};
pub use recode::{coboundary_observable, TwoBlock};
pub use rotation::RotationSystem;
pub use schedule::{bridge, Block, BlockSchedule};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("vertex `{0}` has no outgoing edge: not a total shift")]
    NotTotal(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("system has no vertices")]
    Empty,
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("inadmissible path: edge `{0}` does not follow edge `{1}`")]
    Inadmissible(String, String),
    #[error("cycle must be nonempty")]
    EmptyCycle,
    #[error("missing weight for edge `{0}`")]
    MissingWeight(String),
    #[error("weight `{0}` is not a finite decimal")]
    BadWeight(String),
    #[error("observable, point or schedule is bound to a different system")]
    Mismatch,
    #[error("observable kind does not match the phase space")]
    KindMismatch,
    #[error("rotation number must lie in (0,1), got `{0}`")]
    BadAlpha(String),
    #[error("block schedule: {0}")]
    Schedule(String),
    #[error("parse error: {0}")]
    Parse(String),
}
