//! Ergodic optimization and discounted cohomological equations on finite
//! edge shifts and circle rotations.
//!
//! The crate is organised bottom-up:
//!
//! * [`systems`] – phase spaces (finite edge shifts, rotations), eventually
//!   periodic points, observables and the JSON input formats.
//! * [`ergopt`] – exact minimizing value, minimizing cycles, Mather set
//!   (critical subgraph), Morris points and balance checks.
//! * [`subaction`] – the transfer function `u(ω) = -inf_n Σ (f - f̄)∘σ^k(ω)`,
//!   its positive part and the sub-cohomological inequality.
//! * [`discounted`] – the discounted transfer function `U_ε[f]`, the discounted
//!   measure `μ_{ε,ω}` and the balanced-convergence sweep.
//! * [`asymptotics`] – empirical-measure decomposition of `μ_{ε,ω}`, the block
//!   schedule with super-exponential boundaries and the oscillation experiment.
//!
//! Finite-system quantities are computed in exact rational arithmetic.
//! Discounted quantities are `f64`, with closed forms on eventually periodic
//! points and explicit tail bounds for direct summation.

pub mod asymptotics;
pub mod discounted;
pub mod ergopt;
pub mod exec;
pub mod numeric;
pub mod random;
pub mod report;
pub mod subaction;
pub mod systems;

pub use numeric::Rational;
pub use exec::Strategy;
