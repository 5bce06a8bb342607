//! Transfer functions for the sub-cohomological inequality
//! `f - f̄ ≥ u∘σ - u`.
//!
//! For a point `ω` the transfer value is
//!
//! ```text
//! u(ω) = -inf_{n≥1} Σ_{k<n} (f - f̄)∘σ^k(ω)
//! ```
//!
//! and its positive part `u⁺ = max(u, 0)` satisfies
//! `f(ω) - f̄ ≥ u⁺(σω) - u⁺(ω)` everywhere, with equality along minimizing
//! periodic orbits. On eventually periodic points the infimum is exact: past
//! the preperiod the Birkhoff sums are affine in the number of laps, so it is
//! attained within one preperiod plus one lap whenever the lap sum is
//! nonnegative, and is `-∞` otherwise.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ergopt::{simple_cycles_in, CriticalSubgraph, ErgoptError};
use crate::exec::{self, Strategy};
use crate::numeric::{CompensatedSum, Rational};
use crate::systems::{
    enumerate_points_within, BirkhoffProfile, EdgeObservable, FiniteSystem, FourierSeries, RotationSystem, SymbolicPoint, SystemError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubactionError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Ergopt(#[from] ErgoptError),
    /// The lap sum of `f - f̄` along the point's cycle is negative, so the
    /// Birkhoff sums are unbounded below and `u(ω) = +∞`.
    #[error("unbounded-below Birkhoff sums (lap sum {lap_sum})")]
    Unbounded { lap_sum: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Truncated { horizon: u64 },
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exactness::Exact => write!(f, "exact"),
            Exactness::Truncated { horizon } => write!(f, "truncated:{horizon}"),
        }
    }
}

/// Exact transfer value at an eventually periodic point.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferValue {
    pub value: Rational,
    /// Smallest `n` attaining the infimum.
    pub attained_n: u64,
    /// Range `1..=horizon` of `n` that certifies the infimum.
    pub horizon: u64,
}

impl TransferValue {
    pub fn positive_part(&self) -> Rational {
        self.value.clone().max(Rational::zero())
    }
}

fn reduced_profile(point: &SymbolicPoint, f: &EdgeObservable, fbar: &Rational) -> Result<BirkhoffProfile, SubactionError> {
    let reduced = f.exact_along(point)?.map(|w| w - fbar);
    Ok(BirkhoffProfile::new(&reduced))
}

pub fn transfer_value(point: &SymbolicPoint, f: &EdgeObservable, fbar: &Rational) -> Result<TransferValue, SubactionError> {
    let profile = reduced_profile(point, f, fbar)?;
    if profile.lap_sum().is_negative() {
        return Err(SubactionError::Unbounded {
            lap_sum: profile.lap_sum().clone(),
        });
    }
    let horizon = profile.head_len() + profile.period();
    let min = profile.min_over(horizon).expect("horizon is at least one");
    Ok(TransferValue {
        value: -min.value,
        attained_n: min.n,
        horizon,
    })
}

/// `u⁺(ω) = max(u(ω), 0)`.
pub fn u_plus(point: &SymbolicPoint, f: &EdgeObservable, fbar: &Rational) -> Result<Rational, SubactionError> {
    Ok(transfer_value(point, f, fbar)?.positive_part())
}

/// `f(ω) - f̄ - u⁺(σω) + u⁺(ω)` with its ingredients.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectValue {
    pub value: Rational,
    pub reduced_f: Rational,
    pub u_plus_here: Rational,
    pub u_plus_next: Rational,
}

pub fn defect(point: &SymbolicPoint, f: &EdgeObservable, fbar: &Rational) -> Result<DefectValue, SubactionError> {
    f.check_point(point)?;
    let here = u_plus(point, f, fbar)?;
    let next = u_plus(&point.shift(), f, fbar)?;
    let reduced_f = f.weight(point.first_edge()) - fbar;
    Ok(DefectValue {
        value: &reduced_f - &next + &here,
        reduced_f,
        u_plus_here: here,
        u_plus_next: next,
    })
}

/// Transfer value and defect at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRow {
    pub point: SymbolicPoint,
    pub outcome: Result<(TransferValue, DefectValue), SubactionError>,
}

pub fn sweep_points(points: &[SymbolicPoint], f: &EdgeObservable, fbar: &Rational, strategy: Strategy) -> Vec<PointRow> {
    exec::map(strategy, points, |p| PointRow {
        point: p.clone(),
        outcome: transfer_value(p, f, fbar).and_then(|u| Ok((u, defect(p, f, fbar)?))),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubcohomologyReport {
    pub pass: bool,
    pub min_defect: Option<Rational>,
    /// Indices of points with negative defect or, when none, of the points
    /// attaining the minimum defect.
    pub witnesses: Vec<usize>,
    /// Indices of points where the transfer value is infinite.
    pub unbounded: Vec<usize>,
    pub sample_size: usize,
}

/// Checks `f - f̄ ≥ u⁺∘σ - u⁺` on a sample of points, exactly.
pub fn verify_subcohomology(points: &[SymbolicPoint], f: &EdgeObservable, fbar: &Rational, strategy: Strategy) -> SubcohomologyReport {
    let rows = sweep_points(points, f, fbar, strategy);
    let mut unbounded = Vec::new();
    let mut defects = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        match &row.outcome {
            Ok((_, d)) => defects.push((i, d.value.clone())),
            Err(_) => unbounded.push(i),
        }
    }
    let min_defect = defects.iter().map(|(_, d)| d.clone()).min();
    let negative: Vec<usize> = defects.iter().filter(|(_, d)| d.is_negative()).map(|(i, _)| *i).collect();
    let witnesses = if negative.is_empty() {
        defects
            .iter()
            .filter(|(_, d)| Some(d) == min_defect.as_ref())
            .map(|(i, _)| *i)
            .collect()
    } else {
        negative.clone()
    };
    SubcohomologyReport {
        pass: negative.is_empty(),
        min_defect,
        witnesses,
        unbounded,
        sample_size: points.len(),
    }
}

/// Smallest `C ≥ 0` with `Σ_{k<n} (f - f̄)∘σ^k(ω) ≥ -C` for all sampled `ω`
/// and all `n ≥ 1`. Per point this is exactly `u⁺(ω)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEstimate {
    pub c: Rational,
    pub argmax: Option<usize>,
    pub unbounded: Vec<usize>,
    pub sample_size: usize,
}

impl BoundEstimate {
    pub fn is_finite(&self) -> bool {
        self.unbounded.is_empty()
    }
}

pub fn estimate_c(points: &[SymbolicPoint], f: &EdgeObservable, fbar: &Rational, strategy: Strategy) -> BoundEstimate {
    let values = exec::map(strategy, points, |p| u_plus(p, f, fbar));
    let mut c = Rational::zero();
    let mut argmax = None;
    let mut unbounded = Vec::new();
    for (i, v) in values.into_iter().enumerate() {
        match v {
            Ok(v) if v > c || argmax.is_none() && v == c => {
                c = v;
                argmax = Some(i);
            }
            Ok(_) => {}
            Err(_) => unbounded.push(i),
        }
    }
    BoundEstimate {
        c,
        argmax,
        unbounded,
        sample_size: points.len(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundViolation {
    pub point: SymbolicPoint,
    pub n: u64,
    pub sum: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    pub pass: bool,
    pub c: Rational,
    pub horizon: u64,
    pub max_cycle_len: usize,
    pub checked_points: usize,
    pub checked_cycles: usize,
    pub violations: Vec<BoundViolation>,
    /// Simple cycles of the critical subgraph whose mean differs from `f̄`.
    pub off_mean_cycles: Vec<Vec<usize>>,
}

/// On every purely periodic point inside the critical subgraph with cycle
/// length at most `max_cycle_len`, all Birkhoff sums of `f - f̄` with
/// `n ≤ horizon` lie in `[-C, C]`; every simple cycle of the subgraph
/// integrates `f` to `f̄`.
pub fn verify_corollary_bounds(
    system: &FiniteSystem,
    critical: &CriticalSubgraph,
    f: &EdgeObservable,
    c: &Rational,
    max_cycle_len: usize,
    horizon: u64,
    strategy: Strategy,
) -> Result<CorollaryReport, SubactionError> {
    if f.system() != system.id() {
        return Err(SystemError::Mismatch.into());
    }
    let fbar = &critical.fbar;
    let mask = critical.edge_mask();
    let points = enumerate_points_within(system, &mask, 0, max_cycle_len);
    let found = exec::map(strategy, &points, |p| -> Result<Vec<BoundViolation>, SubactionError> {
        let profile = reduced_profile(p, f, fbar)?;
        let mut out = Vec::new();
        if let Some(lo) = profile.min_over(horizon) {
            if lo.value < -c {
                out.push(BoundViolation { point: p.clone(), n: lo.n, sum: lo.value });
            }
        }
        if let Some(hi) = profile.max_over(horizon) {
            if &hi.value > c {
                out.push(BoundViolation { point: p.clone(), n: hi.n, sum: hi.value });
            }
        }
        Ok(out)
    });
    let mut violations = Vec::new();
    for v in found {
        violations.extend(v?);
    }
    let cycles = simple_cycles_in(system, &mask);
    let off_mean_cycles: Vec<Vec<usize>> = cycles
        .iter()
        .filter(|cyc| {
            let total: Rational = cyc.iter().map(|&e| f.weight(e)).sum();
            total != fbar * Rational::from_integer((cyc.len() as i64).into())
        })
        .cloned()
        .collect();
    Ok(CorollaryReport {
        pass: violations.is_empty() && off_mean_cycles.is_empty(),
        c: c.clone(),
        horizon,
        max_cycle_len,
        checked_points: points.len(),
        checked_cycles: cycles.len(),
        violations,
        off_mean_cycles,
    })
}

/// `u_N(x) = -min_{1≤n≤N} Σ_{k<n} (f - f̄)(x + kα)` on a rotation. No limit
/// in `N` is claimed; the value is reported with its horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTransfer {
    pub value: f64,
    pub attained_n: u64,
    pub horizon: u64,
}

impl TruncatedTransfer {
    pub fn exactness(&self) -> Exactness {
        Exactness::Truncated { horizon: self.horizon }
    }
}

/// Truncated transfer values at each of the increasing `horizons`, from a
/// single pass along the orbit. The values are nondecreasing in the horizon.
pub fn truncated_transfer_profile(
    rotation: &RotationSystem,
    f: &FourierSeries,
    fbar: f64,
    x: f64,
    horizons: &[u64],
) -> Vec<TruncatedTransfer> {
    let mut out = Vec::with_capacity(horizons.len());
    let mut sum = CompensatedSum::new();
    let mut min = f64::INFINITY;
    let mut attained = 0;
    let mut n = 0u64;
    for &horizon in horizons {
        while n < horizon {
            sum.add(f.eval(rotation.orbit_angle(x, n)) - fbar);
            n += 1;
            let s = sum.value();
            if s < min {
                min = s;
                attained = n;
            }
        }
        out.push(TruncatedTransfer {
            value: -min,
            attained_n: attained,
            horizon,
        });
    }
    out
}

pub fn truncated_transfer(rotation: &RotationSystem, f: &FourierSeries, fbar: f64, x: f64, horizon: u64) -> TruncatedTransfer {
    truncated_transfer_profile(rotation, f, fbar, x, &[horizon.max(1)]).remove(0)
}
