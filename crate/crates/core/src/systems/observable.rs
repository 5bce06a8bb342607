use std::f64::consts::TAU;

use num_traits::Zero;

use super::{FiniteSystem, RotationSystem, SymbolicPoint, SystemError, SystemId};
use crate::numeric::{self, Rational};
use crate::systems::EventuallyPeriodic;

/// Locally constant observable: one exact weight per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeObservable {
    exact: Vec<Rational>,
    values: Vec<f64>,
    system: SystemId,
}

impl EdgeObservable {
    pub fn new(system: &FiniteSystem, weights: Vec<Rational>) -> Result<Self, SystemError> {
        if weights.len() != system.edge_count() {
            return Err(SystemError::Mismatch);
        }
        let values = weights.iter().map(numeric::to_f64).collect();
        Ok(Self {
            exact: weights,
            values,
            system: system.id(),
        })
    }

    pub fn from_integers(system: &FiniteSystem, weights: &[i64]) -> Result<Self, SystemError> {
        Self::new(system, weights.iter().map(|&w| Rational::from_integer(w.into())).collect())
    }

    /// Weights are converted exactly (every finite `f64` is a dyadic rational).
    pub fn from_f64(system: &FiniteSystem, weights: &[f64]) -> Result<Self, SystemError> {
        let exact = weights
            .iter()
            .map(|&w| numeric::rational_from_f64(w).ok_or_else(|| SystemError::BadWeight(w.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(system, exact)
    }

    /// Weight given by a function of the edge's endpoints.
    pub fn from_fn(system: &FiniteSystem, f: impl Fn(usize, usize) -> Rational) -> Self {
        let weights = system.edges().iter().map(|e| f(e.from, e.to)).collect();
        Self::new(system, weights).expect("one weight per edge")
    }

    pub fn constant(system: &FiniteSystem, c: Rational) -> Self {
        Self::from_fn(system, |_, _| c.clone())
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn exact(&self) -> &[Rational] {
        &self.exact
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weight(&self, edge: usize) -> &Rational {
        &self.exact[edge]
    }

    pub fn value(&self, edge: usize) -> f64 {
        self.values[edge]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn oscillation(&self) -> f64 {
        let max = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    pub fn negated(&self) -> Self {
        self.map(|w| -w)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let exact: Vec<Rational> = self.exact.iter().map(f).collect();
        let values = exact.iter().map(numeric::to_f64).collect();
        Self {
            exact,
            values,
            system: self.system,
        }
    }

    /// `f - c`, the reduced observable.
    pub fn shifted_by(&self, c: &Rational) -> Self {
        self.map(|w| w - c)
    }

    pub fn check_point(&self, point: &SymbolicPoint) -> Result<(), SystemError> {
        if point.system() == self.system {
            Ok(())
        } else {
            Err(SystemError::Mismatch)
        }
    }

    /// Exact values of the observable along the orbit of `point`.
    pub fn exact_along(&self, point: &SymbolicPoint) -> Result<EventuallyPeriodic<Rational>, SystemError> {
        self.check_point(point)?;
        Ok(point.edge_sequence().map(|&e| self.exact[e].clone()))
    }

    pub fn along(&self, point: &SymbolicPoint) -> Result<EventuallyPeriodic<f64>, SystemError> {
        self.check_point(point)?;
        Ok(point.edge_sequence().map(|&e| self.values[e]))
    }

    /// Exact values of `u∘σ - u` along `point`, with `self` playing `u`.
    pub fn coboundary_exact_along(&self, point: &SymbolicPoint) -> Result<EventuallyPeriodic<Rational>, SystemError> {
        let u = self.exact_along(point)?;
        let m = u.head.len();
        let q = u.cycle.len();
        let head = (0..m).map(|k| u.at(k as u64 + 1) - &u.head[k]).collect();
        let cycle = (0..q).map(|j| &u.cycle[(j + 1) % q] - &u.cycle[j]).collect();
        Ok(EventuallyPeriodic::new(head, cycle))
    }

    pub fn coboundary_along(&self, point: &SymbolicPoint) -> Result<EventuallyPeriodic<f64>, SystemError> {
        Ok(self.coboundary_exact_along(point)?.map(numeric::to_f64))
    }
}

/// Truncated Fourier series `c₀ + Σ_j a_j cos(2πjx) + b_j sin(2πjx)`, `j ≥ 1`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FourierSeries {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierSeries {
    pub fn new(constant: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { constant, cos, sin }
    }

    pub fn cosine() -> Self {
        Self::new(0.0, vec![1.0], Vec::new())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x = x.rem_euclid(1.0);
        let mut total = self.constant;
        for (j, a) in self.cos.iter().enumerate() {
            total += a * (TAU * (j + 1) as f64 * x).cos();
        }
        for (j, b) in self.sin.iter().enumerate() {
            total += b * (TAU * (j + 1) as f64 * x).sin();
        }
        total
    }

    /// Mean against Lebesgue measure, the unique invariant measure of an
    /// irrational rotation.
    pub fn mean(&self) -> f64 {
        self.constant
    }

    /// ℓ¹ norm of the coefficients, an upper bound of the sup norm.
    pub fn sup_bound(&self) -> f64 {
        self.constant.abs() + self.cos.iter().chain(&self.sin).map(|c| c.abs()).sum::<f64>()
    }

    pub fn harmonics(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    /// Coefficients of `u∘R_α - u`.
    pub fn coboundary(&self, alpha: f64) -> Self {
        let n = self.harmonics();
        let mut cos = vec![0.0; n];
        let mut sin = vec![0.0; n];
        for j in 0..n {
            let a = self.cos.get(j).copied().unwrap_or(0.0);
            let b = self.sin.get(j).copied().unwrap_or(0.0);
            let (s, c) = (TAU * (j + 1) as f64 * alpha).sin_cos();
            // a cos(θ+φ) + b sin(θ+φ) = (a c + b s) cos θ + (b c - a s) sin θ
            cos[j] = a * c + b * s - a;
            sin[j] = b * c - a * s - b;
        }
        Self::new(0.0, cos, sin)
    }
}

/// An observable on either kind of phase space.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    Edge(EdgeObservable),
    Fourier(FourierSeries),
}

impl Observable {
    pub fn as_edge(&self) -> Result<&EdgeObservable, SystemError> {
        match self {
            Observable::Edge(e) => Ok(e),
            Observable::Fourier(_) => Err(SystemError::KindMismatch),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            Observable::Edge(e) => e.sup_norm(),
            Observable::Fourier(s) => s.sup_bound(),
        }
    }
}

impl From<EdgeObservable> for Observable {
    fn from(e: EdgeObservable) -> Self {
        Observable::Edge(e)
    }
}

impl From<FourierSeries> for Observable {
    fn from(s: FourierSeries) -> Self {
        Observable::Fourier(s)
    }
}

/// A point of either kind of phase space.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Point(&'a SymbolicPoint),
    Angle { rotation: &'a RotationSystem, x: f64 },
}

impl Target<'_> {
    pub fn describe(&self, system: Option<&FiniteSystem>) -> String {
        match (self, system) {
            (Target::Point(p), Some(sys)) => p.describe(sys),
            (Target::Point(p), None) => format!("{:?}·{:?}^inf", p.preperiod(), p.cycle()),
            (Target::Angle { x, .. }, _) => format!("x={x}"),
        }
    }
}

/// `f∘σ^k` evaluated at the target.
pub fn evaluate_observable(f: &Observable, target: Target<'_>, k: u64) -> Result<f64, SystemError> {
    match (f, target) {
        (Observable::Edge(obs), Target::Point(point)) => {
            obs.check_point(point)?;
            Ok(obs.value(point.orbit_edge(k)))
        }
        (Observable::Fourier(series), Target::Angle { rotation, x }) => Ok(series.eval(rotation.orbit_angle(x, k))),
        _ => Err(SystemError::KindMismatch),
    }
}

impl EdgeObservable {
    pub fn is_zero(&self) -> bool {
        self.exact.iter().all(Zero::is_zero)
    }
}
