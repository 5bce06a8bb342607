//! Discounted transfer function and discounted orbit measure.
//!
//! For `0 < ε < 1` and `r = 1 - ε`,
//!
//! ```text
//! U_ε[f](ω) = -Σ_{k≥0} r^k f(σ^k ω)
//! μ_{ε,ω}(g) = Σ_{k≥0} ε r^k g(σ^k ω)
//! ```
//!
//! so `U_ε[f] = -μ_{ε,ω}(f)/ε`, and `U_ε[f]` solves
//! `f = r·U_ε[f]∘σ - U_ε[f]`. Every quantity here is a discounted sum of an
//! [`OrbitSignal`], the sequence `k ↦ g(σ^k ω)`. Eventually periodic signals
//! and rotation orbits of Fourier observables have closed forms; direct
//! summation is kept as an independent check with an explicit tail bound.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::ergopt::{balance_check, ErgoptError};
use crate::exec::{self, Strategy};
use crate::numeric::{self, CompensatedSum, GeometricWeights};
use crate::systems::{EventuallyPeriodic, FiniteSystem, FourierSeries, Observable, RotationSystem, SystemError, Target};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscountedError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Ergopt(#[from] ErgoptError),
    #[error("discount rate {0} is not in (0, 1)")]
    Epsilon(f64),
    #[error("tolerance {0} must be positive")]
    Tolerance(f64),
    #[error("observable is not balanced (integral gap {gap}); no convergence to claim, run the oscillation experiment instead")]
    Unbalanced { gap: String },
    #[error("discount rates must be strictly decreasing")]
    EpsilonOrder,
    #[error("empty sample")]
    EmptySample,
}

/// How a discounted sum was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMethod {
    Direct,
    ClosedFormPeriodic,
    ClosedFormRotation,
    ClosedFormBlocks,
}

impl fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMethod::Direct => "direct",
            EvalMethod::ClosedFormPeriodic => "closed-form-periodic",
            EvalMethod::ClosedFormRotation => "closed-form-rotation",
            EvalMethod::ClosedFormBlocks => "closed-form-blocks",
        })
    }
}

/// Requested evaluation mode.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Mode {
    Direct { tol: f64 },
    #[default]
    Closed,
}

impl Mode {
    pub fn direct(tol: f64) -> Self {
        Mode::Direct { tol }
    }
}

/// The sequence `k ↦ g(σ^k ω)` for a point `ω` and observable `g`.
#[derive(Clone, Debug, PartialEq)]
pub enum OrbitSignal {
    Periodic(EventuallyPeriodic<f64>),
    Rotation { alpha: f64, rotation: RotationSystem, x: f64, series: FourierSeries },
}

impl OrbitSignal {
    pub fn along(g: &Observable, target: Target<'_>) -> Result<Self, SystemError> {
        match (g, target) {
            (Observable::Edge(obs), Target::Point(p)) => Ok(OrbitSignal::Periodic(obs.along(p)?)),
            (Observable::Fourier(series), Target::Angle { rotation, x }) => Ok(OrbitSignal::Rotation {
                alpha: rotation.alpha(),
                rotation: rotation.clone(),
                x,
                series: series.clone(),
            }),
            _ => Err(SystemError::KindMismatch),
        }
    }

    pub fn value(&self, k: u64) -> f64 {
        match self {
            OrbitSignal::Periodic(seq) => *seq.at(k),
            OrbitSignal::Rotation { rotation, x, series, .. } => series.eval(rotation.orbit_angle(*x, k)),
        }
    }

    /// Upper bound of `|g(σ^k ω)|` over all `k`.
    pub fn sup_bound(&self) -> f64 {
        match self {
            OrbitSignal::Periodic(seq) => seq.head.iter().chain(&seq.cycle).fold(0.0, |m, v| m.max(v.abs())),
            OrbitSignal::Rotation { series, .. } => series.sup_bound(),
        }
    }

    /// The signal started one step later, `k ↦ g(σ^{k+1} ω)`.
    pub fn advanced(&self) -> Self {
        self.advanced_by(1)
    }

    /// `k ↦ g(σ^{k+n} ω)`.
    pub fn advanced_by(&self, n: u64) -> Self {
        match self {
            OrbitSignal::Periodic(seq) => OrbitSignal::Periodic(seq.shifted(n)),
            OrbitSignal::Rotation { alpha, rotation, x, series } => OrbitSignal::Rotation {
                alpha: *alpha,
                rotation: rotation.clone(),
                x: rotation.orbit_angle(*x, n),
                series: series.clone(),
            },
        }
    }

    /// `k ↦ g(σ^{k+1} ω) - g(σ^k ω)`, the signal of the coboundary `g∘σ - g`.
    pub fn coboundary(&self) -> Self {
        match self {
            OrbitSignal::Periodic(seq) => {
                let m = seq.head.len() as u64;
                let q = seq.period() as u64;
                let diff = |k: u64| seq.at(k + 1) - seq.at(k);
                OrbitSignal::Periodic(EventuallyPeriodic::new((0..m).map(diff).collect(), (m..m + q).map(diff).collect()))
            }
            OrbitSignal::Rotation { alpha, rotation, x, series } => OrbitSignal::Rotation {
                alpha: *alpha,
                rotation: rotation.clone(),
                x: *x,
                series: series.coboundary(*alpha),
            },
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        match self {
            OrbitSignal::Periodic(seq) => OrbitSignal::Periodic(seq.map(|v| a * v)),
            OrbitSignal::Rotation { alpha, rotation, x, series } => OrbitSignal::Rotation {
                alpha: *alpha,
                rotation: rotation.clone(),
                x: *x,
                series: FourierSeries::new(
                    a * series.constant,
                    series.cos.iter().map(|c| a * c).collect(),
                    series.sin.iter().map(|c| a * c).collect(),
                ),
            },
        }
    }
}

/// `Σ_k r^k s_k` with its provenance. `tail_bound` bounds the distance to the
/// full series (zero for closed forms, up to rounding).
#[derive(Clone, Debug, PartialEq)]
struct DiscountedSum {
    value: f64,
    horizon: u64,
    tail_bound: f64,
    method: EvalMethod,
}

/// A value of `U_ε[f]` or `μ_{ε,ω}(g)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscountedEvaluation {
    pub epsilon: f64,
    pub value: f64,
    /// Number of summed terms in direct mode, 0 for closed forms.
    pub horizon: u64,
    pub tail_bound: f64,
    pub method: EvalMethod,
}

pub fn check_epsilon(epsilon: f64) -> Result<(), DiscountedError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(DiscountedError::Epsilon(epsilon))
    }
}

fn check_mode(mode: Mode) -> Result<(), DiscountedError> {
    match mode {
        Mode::Direct { tol } if !(tol > 0.0) => Err(DiscountedError::Tolerance(tol)),
        _ => Ok(()),
    }
}

/// `1 - (1-ε)^n` without cancellation.
pub fn one_minus_power(epsilon: f64, n: f64) -> f64 {
    -(n * (-epsilon).ln_1p()).exp_m1()
}

/// Direct-mode horizon: the smallest `K` with `sup·(1-ε)^K/ε ≤ tol`.
pub fn direct_horizon(sup: f64, epsilon: f64, tol: f64) -> u64 {
    if sup == 0.0 {
        return 0;
    }
    let k = ((tol * epsilon / sup).ln() / (-epsilon).ln_1p()).ceil();
    if k.is_nan() || k <= 0.0 {
        0
    } else {
        k as u64
    }
}

fn direct_sum(signal: &OrbitSignal, epsilon: f64, tol: f64) -> DiscountedSum {
    let sup = signal.sup_bound();
    let horizon = direct_horizon(sup, epsilon, tol);
    let sum: CompensatedSum = GeometricWeights::new(epsilon)
        .take(horizon as usize)
        .enumerate()
        .map(|(k, w)| w * signal.value(k as u64))
        .collect();
    DiscountedSum {
        value: sum.value(),
        horizon,
        tail_bound: sup * GeometricWeights::power(epsilon, horizon) / epsilon,
        method: EvalMethod::Direct,
    }
}

fn periodic_sum(seq: &EventuallyPeriodic<f64>, epsilon: f64) -> f64 {
    let mut head = CompensatedSum::new();
    let mut w = GeometricWeights::new(epsilon);
    for v in &seq.head {
        head.add(w.next().unwrap() * v);
    }
    let lap: CompensatedSum = GeometricWeights::new(epsilon).zip(&seq.cycle).map(|(w, v)| w * v).collect();
    head.value() + GeometricWeights::power(epsilon, seq.head.len() as u64) * lap.value() / one_minus_power(epsilon, seq.period() as f64)
}

/// `Σ_k r^k Re((a - ib) e^{2πij(x + kα)})` summed as complex geometric series.
fn rotation_sum(series: &FourierSeries, alpha: f64, x: f64, epsilon: f64) -> f64 {
    let r = 1.0 - epsilon;
    let mut total = CompensatedSum::new();
    total.add(series.constant / epsilon);
    for j in 0..series.harmonics() {
        let a = series.cos.get(j).copied().unwrap_or(0.0);
        let b = series.sin.get(j).copied().unwrap_or(0.0);
        let h = (j + 1) as f64;
        let start = Complex64::from_polar(1.0, TAU * (h * x).rem_euclid(1.0));
        let step = Complex64::from_polar(r, TAU * (h * alpha).rem_euclid(1.0));
        let z = Complex64::new(a, -b) * start / (Complex64::new(1.0, 0.0) - step);
        total.add(z.re);
    }
    total.value()
}

fn discounted_sum(signal: &OrbitSignal, epsilon: f64, mode: Mode) -> Result<DiscountedSum, DiscountedError> {
    check_epsilon(epsilon)?;
    check_mode(mode)?;
    Ok(match (mode, signal) {
        (Mode::Direct { tol }, _) => direct_sum(signal, epsilon, tol),
        (Mode::Closed, OrbitSignal::Periodic(seq)) => DiscountedSum {
            value: periodic_sum(seq, epsilon),
            horizon: 0,
            tail_bound: 0.0,
            method: EvalMethod::ClosedFormPeriodic,
        },
        (Mode::Closed, OrbitSignal::Rotation { alpha, x, series, .. }) => DiscountedSum {
            value: rotation_sum(series, *alpha, *x, epsilon),
            horizon: 0,
            tail_bound: 0.0,
            method: EvalMethod::ClosedFormRotation,
        },
    })
}

/// `U_ε[f](ω)` for the signal of `f` along `ω`.
pub fn discounted_signal_value(signal: &OrbitSignal, epsilon: f64, mode: Mode) -> Result<DiscountedEvaluation, DiscountedError> {
    let s = discounted_sum(signal, epsilon, mode)?;
    Ok(DiscountedEvaluation {
        epsilon,
        value: -s.value,
        horizon: s.horizon,
        tail_bound: s.tail_bound,
        method: s.method,
    })
}

/// `μ_{ε,ω}(g)` for the signal of `g` along `ω`.
pub fn measure_signal_apply(signal: &OrbitSignal, epsilon: f64, mode: Mode) -> Result<DiscountedEvaluation, DiscountedError> {
    let s = discounted_sum(signal, epsilon, mode)?;
    Ok(DiscountedEvaluation {
        epsilon,
        value: epsilon * s.value,
        horizon: s.horizon,
        tail_bound: epsilon * s.tail_bound,
        method: s.method,
    })
}

/// `U_ε[f](ω) = -Σ_k (1-ε)^k f(σ^k ω)`.
pub fn discounted_value(target: Target<'_>, f: &Observable, epsilon: f64, mode: Mode) -> Result<DiscountedEvaluation, DiscountedError> {
    discounted_signal_value(&OrbitSignal::along(f, target)?, epsilon, mode)
}

/// `μ_{ε,ω}(g)`.
pub fn discounted_measure_apply(target: Target<'_>, g: &Observable, epsilon: f64, mode: Mode) -> Result<DiscountedEvaluation, DiscountedError> {
    measure_signal_apply(&OrbitSignal::along(g, target)?, epsilon, mode)
}

/// `∫ 1 dμ_{ε,ω}` from the closed form of a one-term cycle.
pub fn measure_mass(epsilon: f64) -> Result<f64, DiscountedError> {
    let one = OrbitSignal::Periodic(EventuallyPeriodic::new(Vec::new(), vec![1.0]));
    Ok(measure_signal_apply(&one, epsilon, Mode::Closed)?.value)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DceResidual {
    /// `|f(ω) - (1-ε)U_ε[f](σω) + U_ε[f](ω)|`.
    pub residual: f64,
    /// `2·tail_bound + 1e-12`.
    pub allowed: f64,
    pub at_point: DiscountedEvaluation,
    pub at_image: DiscountedEvaluation,
}

impl DceResidual {
    pub fn pass(&self) -> bool {
        self.residual <= self.allowed
    }
}

pub const ROUNDING_SLACK: f64 = 1e-12;

pub fn dce_signal_residual(signal: &OrbitSignal, epsilon: f64, mode: Mode) -> Result<DceResidual, DiscountedError> {
    let here = discounted_signal_value(signal, epsilon, mode)?;
    let next = discounted_signal_value(&signal.advanced(), epsilon, mode)?;
    let residual = (signal.value(0) - (1.0 - epsilon) * next.value + here.value).abs();
    Ok(DceResidual {
        residual,
        allowed: here.tail_bound + next.tail_bound + ROUNDING_SLACK,
        at_point: here,
        at_image: next,
    })
}

pub fn dce_residual(target: Target<'_>, f: &Observable, epsilon: f64, mode: Mode) -> Result<DceResidual, DiscountedError> {
    dce_signal_residual(&OrbitSignal::along(f, target)?, epsilon, mode)
}

/// Both sides of `U_ε[u∘σ - u](ω) = u(ω) - ∫ u∘σ dμ_{ε,ω}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoboundaryGap {
    pub transfer: f64,
    pub identity: f64,
    pub gap: f64,
}

pub fn coboundary_signal_gap(u: &OrbitSignal, epsilon: f64) -> Result<CoboundaryGap, DiscountedError> {
    let transfer = discounted_signal_value(&u.coboundary(), epsilon, Mode::Closed)?.value;
    let image_integral = measure_signal_apply(&u.advanced(), epsilon, Mode::Closed)?.value;
    let identity = u.value(0) - image_integral;
    Ok(CoboundaryGap {
        transfer,
        identity,
        gap: (transfer - identity).abs(),
    })
}

pub fn coboundary_identity_gap(target: Target<'_>, u: &Observable, epsilon: f64) -> Result<CoboundaryGap, DiscountedError> {
    coboundary_signal_gap(&OrbitSignal::along(u, target)?, epsilon)
}

/// One labelled sample point for a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub label: String,
    pub signal: OrbitSignal,
}

/// `sup_ω |U_ε[u∘σ - u](ω) - (u(ω) - c)|` at one discount rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub sup_error: f64,
    pub argmax_point: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Integral of `u` shared by every invariant measure.
    pub common_integral: f64,
    pub sample_size: usize,
    pub strictly_decreasing: bool,
}

impl SweepReport {
    pub fn final_error(&self) -> Option<f64> {
        self.rows.last().map(|r| r.sup_error)
    }
}

/// The common integral of `u` over invariant measures, or an error when `u`
/// is not balanced. Rotations are uniquely ergodic, so every Fourier
/// observable is balanced with its mean.
pub fn common_integral(system: Option<&FiniteSystem>, u: &Observable) -> Result<f64, DiscountedError> {
    match (u, system) {
        (Observable::Edge(e), Some(sys)) => {
            let rep = balance_check(sys, e)?;
            match rep.common_integral() {
                Some(c) => Ok(numeric::to_f64(c)),
                None => Err(DiscountedError::Unbalanced {
                    gap: numeric::format_rational(&rep.gap()),
                }),
            }
        }
        (Observable::Edge(_), None) => Err(SystemError::KindMismatch.into()),
        (Observable::Fourier(s), _) => Ok(s.mean()),
    }
}

/// Samples of `u` along each target.
pub fn samples(system: Option<&FiniteSystem>, u: &Observable, targets: &[Target<'_>]) -> Result<Vec<Sample>, DiscountedError> {
    targets
        .iter()
        .map(|t| {
            Ok(Sample {
                label: t.describe(system),
                signal: OrbitSignal::along(u, *t)?,
            })
        })
        .collect()
}

/// For balanced `u` with common integral `c`, checks that
/// `U_ε[u∘σ - u] → u - c` along a decreasing list of discount rates, as a
/// sup over the sample. `samples` carry the signal of `u`.
pub fn convergence_sweep(
    samples: &[Sample],
    common_integral: f64,
    eps_list: &[f64],
    mode: Mode,
    strategy: Strategy,
) -> Result<SweepReport, DiscountedError> {
    if samples.is_empty() {
        return Err(DiscountedError::EmptySample);
    }
    for &e in eps_list {
        check_epsilon(e)?;
    }
    check_mode(mode)?;
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(DiscountedError::EpsilonOrder);
    }
    let cobs: Vec<OrbitSignal> = samples.iter().map(|s| s.signal.coboundary()).collect();
    let n = samples.len();
    let errors = exec::map_range(strategy, 0..eps_list.len() * n, |idx| {
        let (ei, si) = (idx / n, idx % n);
        let u_eps = discounted_signal_value(&cobs[si], eps_list[ei], mode)?.value;
        Ok::<f64, DiscountedError>((u_eps - samples[si].signal.value(0) + common_integral).abs())
    });
    let mut rows = Vec::with_capacity(eps_list.len());
    for (ei, &epsilon) in eps_list.iter().enumerate() {
        let mut best = (f64::NEG_INFINITY, 0);
        for si in 0..n {
            let e = errors[ei * n + si].clone()?;
            if e > best.0 {
                best = (e, si);
            }
        }
        rows.push(SweepRow {
            epsilon,
            sup_error: best.0,
            argmax_point: samples[best.1].label.clone(),
        });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error);
    Ok(SweepReport {
        rows,
        common_integral,
        sample_size: n,
        strictly_decreasing,
    })
}

/// `max_ω |μ_{ε,ω}(g)|` over the sample at each discount rate.
pub fn measure_sweep(samples: &[Sample], eps_list: &[f64], mode: Mode, strategy: Strategy) -> Result<Vec<f64>, DiscountedError> {
    let n = samples.len();
    let values = exec::map_range(strategy, 0..eps_list.len() * n, |idx| {
        measure_signal_apply(&samples[idx % n].signal, eps_list[idx / n], mode).map(|e| e.value.abs())
    });
    let mut out = vec![0.0f64; eps_list.len()];
    for (idx, v) in values.into_iter().enumerate() {
        out[idx / n] = out[idx / n].max(v?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{EdgeObservable, SymbolicPoint};
    use crate::Rational;

    fn two_shift() -> (FiniteSystem, EdgeObservable) {
        let sys = FiniteSystem::full_shift(2);
        let f = EdgeObservable::from_fn(&sys, |v, w| Rational::from_integer((w as i64 - v as i64).into()));
        (sys, f)
    }

    fn alternating(sys: &FiniteSystem) -> SymbolicPoint {
        SymbolicPoint::from_ids(sys, &[], &["10", "01"]).unwrap()
    }

    #[test]
    fn fixed_point_value() {
        let sys = FiniteSystem::full_shift(2);
        let f: Observable = EdgeObservable::from_integers(&sys, &[3, 0, 0, 0]).unwrap().into();
        let p = SymbolicPoint::fixed(&sys, 0).unwrap();
        for eps in [0.5, 0.1, 1e-3] {
            let v = discounted_value(Target::Point(&p), &f, eps, Mode::Closed).unwrap();
            assert!((v.value + 3.0 / eps).abs() <= 1e-12 / eps, "{eps}");
            assert_eq!(v.tail_bound, 0.0);
            assert!(dce_residual(Target::Point(&p), &f, eps, Mode::Closed).unwrap().residual <= 1e-12 / eps);
        }
        let zero: Observable = EdgeObservable::constant(&sys, Rational::from_integer(0.into())).into();
        assert_eq!(discounted_value(Target::Point(&p), &zero, 0.3, Mode::direct(1e-8)).unwrap().value, 0.0);
    }

    #[test]
    fn alternating_point_closed_form() {
        let (sys, f) = two_shift();
        let f: Observable = f.into();
        let p = alternating(&sys);
        for eps in [0.5, 0.25, 0.01, 1e-4] {
            let want = 1.0 - (1.0 - eps) / (2.0 - eps);
            let closed = discounted_value(Target::Point(&p), &f, eps, Mode::Closed).unwrap();
            assert!((closed.value - want).abs() < 1e-12, "{eps}");
            let direct = discounted_value(Target::Point(&p), &f, eps, Mode::direct(1e-9)).unwrap();
            assert!((direct.value - want).abs() <= direct.tail_bound + 1e-12);
            assert!(direct.tail_bound <= 1e-9);
            let res = dce_residual(Target::Point(&p), &f, eps, Mode::Closed).unwrap();
            assert!(res.residual <= 1e-12 && res.pass());
        }
    }

    #[test]
    fn direct_mode_tail_contract() {
        let (sys, f) = two_shift();
        let f: Observable = f.into();
        let p = SymbolicPoint::from_ids(&sys, &["11", "10"], &["01", "11", "10"]).unwrap();
        let res = dce_residual(Target::Point(&p), &f, 0.01, Mode::direct(1e-8)).unwrap();
        assert!(res.pass());
        assert!(res.residual <= 2e-8);
        let eval = &res.at_point;
        assert_eq!(eval.method, EvalMethod::Direct);
        assert_eq!(eval.horizon, direct_horizon(1.0, 0.01, 1e-8));
        assert!(eval.tail_bound <= 1e-8);
    }

    #[test]
    fn horizon_formula() {
        // ln(1e-8·0.1/2)/ln(0.9) = 203.3...
        assert_eq!(direct_horizon(2.0, 0.1, 1e-8), 204);
        assert_eq!(direct_horizon(0.0, 0.1, 1e-8), 0);
        assert_eq!(direct_horizon(1.0, 0.5, 10.0), 0);
    }

    #[test]
    fn measure_mass_and_constants() {
        for eps in [0.9, 0.5, 1e-3, 1e-6] {
            assert!((measure_mass(eps).unwrap() - 1.0).abs() <= 1e-12);
        }
        let sys = FiniteSystem::full_shift(3);
        let c: Observable = EdgeObservable::constant(&sys, Rational::new(7.into(), 3.into())).into();
        let p = SymbolicPoint::new(&sys, vec![4], vec![3, 1]).unwrap();
        let v = discounted_measure_apply(Target::Point(&p), &c, 0.2, Mode::Closed).unwrap();
        assert!((v.value - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn value_is_minus_measure_over_epsilon() {
        let (sys, f) = two_shift();
        let f: Observable = f.into();
        let p = SymbolicPoint::from_ids(&sys, &["00", "01"], &["11", "10", "00", "01"]).unwrap();
        let eps = 0.07;
        let u = discounted_value(Target::Point(&p), &f, eps, Mode::Closed).unwrap().value;
        let m = discounted_measure_apply(Target::Point(&p), &f, eps, Mode::Closed).unwrap().value;
        assert!((u + m / eps).abs() <= 1e-12);
    }

    #[test]
    fn coboundary_gap_examples() {
        let sys = FiniteSystem::full_shift(2);
        let u: Observable = EdgeObservable::from_fn(&sys, |v, _| Rational::from_integer((v as i64).into())).into();
        let fixed = SymbolicPoint::fixed(&sys, 3).unwrap();
        assert_eq!(coboundary_identity_gap(Target::Point(&fixed), &u, 0.3).unwrap().gap, 0.0);
        let p = alternating(&sys);
        for eps in [0.5, 0.25, 0.01] {
            let g = coboundary_identity_gap(Target::Point(&p), &u, eps).unwrap();
            let want = 1.0 - (1.0 - eps) / (2.0 - eps);
            assert!((g.transfer - want).abs() < 1e-12);
            assert!((g.identity - want).abs() < 1e-12);
            assert!(g.gap < 1e-12);
        }
    }

    #[test]
    fn rotation_closed_form_matches_direct() {
        let rot = RotationSystem::golden(10);
        let f: Observable = FourierSeries::new(0.25, vec![1.0, -0.5], vec![0.0, 0.3]).into();
        for x in rot.grid_angles() {
            let t = Target::Angle { rotation: &rot, x };
            for eps in [0.5, 0.05] {
                let closed = discounted_value(t, &f, eps, Mode::Closed).unwrap();
                let direct = discounted_value(t, &f, eps, Mode::direct(1e-10)).unwrap();
                assert_eq!(closed.method, EvalMethod::ClosedFormRotation);
                assert!((closed.value - direct.value).abs() <= direct.tail_bound + 1e-11, "x={x} eps={eps}");
            }
            let res = dce_residual(t, &f, 0.05, Mode::Closed).unwrap();
            assert!(res.residual < 1e-12);
            let u: Observable = FourierSeries::cosine().into();
            assert!(coboundary_identity_gap(t, &u, 0.05).unwrap().gap < 1e-12);
        }
    }

    #[test]
    fn sweep_on_the_telescoping_observable() {
        let sys = FiniteSystem::full_shift(2);
        let u: Observable = EdgeObservable::from_fn(&sys, |v, w| Rational::from_integer((v as i64 - w as i64).into())).into();
        let c = common_integral(Some(&sys), &u).unwrap();
        assert_eq!(c, 0.0);
        let points = crate::systems::enumerate_points(&sys, 2, 2);
        let targets: Vec<Target> = points.iter().map(Target::Point).collect();
        let s = samples(Some(&sys), &u, &targets).unwrap();
        let rep = convergence_sweep(&s, c, &[0.1, 0.01, 0.001], Mode::Closed, Strategy::Parallel).unwrap();
        assert!(rep.strictly_decreasing, "{rep:?}");
        assert_eq!(rep, convergence_sweep(&s, c, &[0.1, 0.01, 0.001], Mode::Closed, Strategy::Sequential).unwrap());
        assert!(matches!(
            convergence_sweep(&s, c, &[0.01, 0.1], Mode::Closed, Strategy::Sequential),
            Err(DiscountedError::EpsilonOrder)
        ));
    }

    #[test]
    fn zero_observable_sweeps_to_zero() {
        let sys = FiniteSystem::full_shift(2);
        let u: Observable = EdgeObservable::constant(&sys, Rational::from_integer(0.into())).into();
        let points = crate::systems::enumerate_points(&sys, 1, 2);
        let targets: Vec<Target> = points.iter().map(Target::Point).collect();
        let s = samples(Some(&sys), &u, &targets).unwrap();
        let rep = convergence_sweep(&s, 0.0, &[0.1, 0.01], Mode::Closed, Strategy::Sequential).unwrap();
        assert!(rep.rows.iter().all(|r| r.sup_error == 0.0));
    }

    #[test]
    fn unbalanced_observable_is_refused() {
        let sys = FiniteSystem::full_shift(2);
        let u: Observable = EdgeObservable::from_fn(&sys, |v, _| Rational::from_integer((v as i64).into())).into();
        assert!(matches!(common_integral(Some(&sys), &u), Err(DiscountedError::Unbalanced { .. })));
    }

    #[test]
    fn argument_errors() {
        let (sys, f) = two_shift();
        let f: Observable = f.into();
        let p = alternating(&sys);
        for eps in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(discounted_value(Target::Point(&p), &f, eps, Mode::Closed), Err(DiscountedError::Epsilon(_))));
        }
        assert!(matches!(
            discounted_value(Target::Point(&p), &f, 0.1, Mode::direct(0.0)),
            Err(DiscountedError::Tolerance(_))
        ));
        let rot = RotationSystem::golden(1);
        assert!(matches!(
            discounted_value(Target::Angle { rotation: &rot, x: 0.0 }, &f, 0.1, Mode::Closed),
            Err(DiscountedError::System(SystemError::KindMismatch))
        ));
    }
}
