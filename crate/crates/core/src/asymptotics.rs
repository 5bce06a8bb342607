//! Small-discount asymptotics.
//!
//! * [`decomposition_report`] splits `μ_{ε,ω}` into a mixture of empirical
//!   measures `A_{k+1,ω}` for `⌊ln n⌋ ≤ k ≤ n-2` plus an explicit remainder
//!   and checks the identity on an observable.
//! * [`build_oscillation_schedule`] builds a point that follows one periodic
//!   word on `[0, N₁)`, another on `[N₁, N₂)`, and so on, with
//!   `N_{p+1} = ⌊e^{N_p}⌋ + 1`.
//! * [`oscillation_experiment`] evaluates `U_{ε_p}[u∘σ - u]` at that point
//!   for `ε_p = ln N_p / N_p`; for unbalanced `u` the values alternate between
//!   two limits.
//!
//! Boundaries are arbitrary-precision integers and discount weights are
//! handled through `ln(-ln(1-ε))`, so `ε₃ ≈ 10^-3516` is representable.

use std::fmt;

use dashu_float::{round::mode::Zero as RoundDown, FBig};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::discounted::{measure_signal_apply, DiscountedError, Mode, OrbitSignal};
use crate::ergopt::{balance_check, ErgoptError};
use crate::exec::{self, Strategy};
use crate::numeric::{ln_biguint, CompensatedSum, GeometricWeights};
use crate::systems::{bridge, Block, BlockSchedule, EdgeObservable, FiniteSystem, SystemError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Ergopt(#[from] ErgoptError),
    #[error(transparent)]
    Discounted(#[from] DiscountedError),
    #[error("n must be at least {min}, got {got}")]
    Length { min: u64, got: u64 },
    #[error("n = {0} exceeds the direct summation limit")]
    TooLong(u64),
    #[error("schedule exceeds representable scale (p_max = {0}, at most 3 supported)")]
    Scale(usize),
    #[error("first boundary must be at least 3, got {0}")]
    FirstBoundary(String),
    #[error("no oscillation expected: the observable is balanced")]
    Balanced,
    #[error("no path joins word {0} to word {1}")]
    NoBridge(String, String),
}

/// Largest `n` summed term by term.
pub const DIRECT_LIMIT: u64 = 10_000_000;

/// Discount rate `ε` stored through `ln ε`, so that rates far below the
/// smallest positive `f64` can be used. Weights `(1-ε)^x` are evaluated as
/// `exp(-λx)` with `λ = -ln(1-ε)` kept as `ln λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscountRate {
    ln_eps: f64,
    ln_lambda: f64,
}

impl DiscountRate {
    pub fn new(epsilon: f64) -> Result<Self, AsymptoticsError> {
        crate::discounted::check_epsilon(epsilon)?;
        Ok(Self::from_ln(epsilon.ln()))
    }

    pub fn from_ln(ln_eps: f64) -> Self {
        let eps = ln_eps.exp();
        let ln_lambda = if eps > 1e-8 {
            (-(-eps).ln_1p()).ln()
        } else {
            // -ln(1-ε)/ε = 1 + ε/2 + O(ε²)
            ln_eps + eps / 2.0
        };
        Self { ln_eps, ln_lambda }
    }

    /// `ε = ln n / n`.
    pub fn from_boundary(n: &BigUint) -> Self {
        let ln_n = ln_biguint(n);
        Self::from_ln(ln_n.ln() - ln_n)
    }

    pub fn ln_epsilon(&self) -> f64 {
        self.ln_eps
    }

    /// `ε` as an `f64`; zero when it underflows.
    pub fn epsilon(&self) -> f64 {
        self.ln_eps.exp()
    }

    /// `(1-ε)^x` given `ln x` (`-∞` for `x = 0`).
    pub fn power_ln(&self, ln_x: f64) -> f64 {
        (-(self.ln_lambda + ln_x).exp()).exp()
    }

    pub fn power(&self, x: &BigUint) -> f64 {
        self.power_ln(ln_biguint(x))
    }

    /// `1 - (1-ε)^x` without cancellation.
    pub fn one_minus_power(&self, x: &BigUint) -> f64 {
        -(-(self.ln_lambda + ln_biguint(x)).exp()).exp_m1()
    }

    /// `ε / (1 - (1-ε)^L)`, the normalised weight of one lap of length `L`.
    fn lap_normalizer(&self, len: usize) -> f64 {
        let eps = self.epsilon();
        if eps > 1e-200 {
            eps / crate::discounted::one_minus_power(eps, len as f64)
        } else {
            1.0 / len as f64
        }
    }

    /// Decimal scientific notation, valid below the `f64` range.
    pub fn scientific(&self) -> String {
        let log10 = self.ln_eps / std::f64::consts::LN_10;
        let mut exp = log10.floor();
        let mut mantissa = 10f64.powf(log10 - exp);
        if format!("{mantissa:.6}").starts_with("10") {
            mantissa /= 10.0;
            exp += 1.0;
        }
        format!("{mantissa:.6}e{}", exp as i64)
    }
}

impl fmt::Display for DiscountRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.scientific())
    }
}

/// `(1/n) Σ_{k<n} g(σ^k ω)`. Closed form on eventually periodic signals,
/// direct summation (up to [`DIRECT_LIMIT`]) on rotations.
pub fn empirical_average(signal: &OrbitSignal, n: u64) -> Result<f64, AsymptoticsError> {
    if n == 0 {
        return Err(AsymptoticsError::Length { min: 1, got: 0 });
    }
    match signal {
        OrbitSignal::Periodic(seq) => {
            let m = seq.head.len() as u64;
            let q = seq.period() as u64;
            let mut sum = CompensatedSum::new();
            sum.extend(seq.head.iter().take(n as usize).copied());
            if n > m {
                let laps = (n - m) / q;
                let rest = ((n - m) % q) as usize;
                let lap: CompensatedSum = seq.cycle.iter().copied().collect();
                sum.add(laps as f64 * lap.value());
                sum.extend(seq.cycle[..rest].iter().copied());
            }
            Ok(sum.value() / n as f64)
        }
        OrbitSignal::Rotation { .. } => {
            if n > DIRECT_LIMIT {
                return Err(AsymptoticsError::TooLong(n));
            }
            let sum: CompensatedSum = (0..n).map(|k| signal.value(k)).collect();
            Ok(sum.value() / n as f64)
        }
    }
}

/// `(ε ln n)² + (1 + εne) e^{-εn}`.
pub fn remainder_bound(n: u64, epsilon: f64) -> f64 {
    let n = n as f64;
    (epsilon * n.ln()).powi(2) + (1.0 + epsilon * n * std::f64::consts::E) * (-epsilon * n).exp()
}

/// Both sides of
/// `μ_{ε,ω} = Σ_{k=⌊ln n⌋}^{n-2} (k+1)ε²(1-ε)^k A_{k+1,ω} + R_{n,ε,ω}`
/// applied to an observable, with the remainder split as
/// `R = Σ_{k<⌊ln n⌋} (k+1)ε²(1-ε)^k A_{k+1,ω} + nε(1-ε)^{n-1} A_{n,ω} + (1-ε)^n μ_{ε,σⁿω}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub n: u64,
    pub epsilon: f64,
    /// `⌊ln n⌋`, the first index of the main sum.
    pub head_len: u64,
    /// Total weight of the main sum.
    pub alpha: f64,
    pub remainder_mass: f64,
    pub bound: f64,
    /// `μ_{ε,ω}(g)` in closed form.
    pub left: f64,
    pub right: f64,
    pub identity_gap: f64,
    pub main_term: f64,
    pub head_term: f64,
    pub boundary_term: f64,
    pub tail_term: f64,
}

impl DecompositionReport {
    pub fn within_bound(&self) -> bool {
        self.remainder_mass <= self.bound
    }
}

/// Closed-form masses `(α, R(1))` of the decomposition.
pub fn decomposition_masses(n: u64, epsilon: f64) -> (f64, f64) {
    let l = (n as f64).ln().floor();
    let nf = n as f64;
    let pow = |k: f64| (k * (-epsilon).ln_1p()).exp();
    let one_minus = |k: f64| crate::discounted::one_minus_power(epsilon, k);
    // ε² Σ_{k<m} (k+1) r^k = 1 - r^m (1 + mε)
    let head = one_minus(l) - l * epsilon * pow(l);
    let through_n_minus_2 = one_minus(nf - 1.0) - (nf - 1.0) * epsilon * pow(nf - 1.0);
    let alpha = through_n_minus_2 - head;
    let remainder = head + nf * epsilon * pow(nf - 1.0) + pow(nf);
    (alpha, remainder)
}

pub fn decomposition_report(signal: &OrbitSignal, epsilon: f64, n: u64) -> Result<DecompositionReport, AsymptoticsError> {
    crate::discounted::check_epsilon(epsilon)?;
    if n < 2 {
        return Err(AsymptoticsError::Length { min: 2, got: n });
    }
    if n > DIRECT_LIMIT {
        return Err(AsymptoticsError::TooLong(n));
    }
    let head_len = ((n as f64).ln().floor() as u64).min(n - 1);
    let eps2 = epsilon * epsilon;
    let mut prefix = CompensatedSum::new();
    let mut head = CompensatedSum::new();
    let mut main = CompensatedSum::new();
    let mut weights = GeometricWeights::new(epsilon);
    // (k+1) A_{k+1} is the Birkhoff sum S_{k+1}.
    for k in 0..n - 1 {
        prefix.add(signal.value(k));
        let term = eps2 * weights.next().unwrap() * prefix.value();
        if k < head_len {
            head.add(term);
        } else {
            main.add(term);
        }
    }
    prefix.add(signal.value(n - 1));
    let boundary = epsilon * GeometricWeights::power(epsilon, n - 1) * prefix.value();
    let tail = GeometricWeights::power(epsilon, n) * measure_signal_apply(&signal.advanced_by(n), epsilon, Mode::Closed)?.value;
    let left = measure_signal_apply(signal, epsilon, Mode::Closed)?.value;
    let right: CompensatedSum = [main.value(), head.value(), boundary, tail].into_iter().collect();
    let (alpha, remainder_mass) = decomposition_masses(n, epsilon);
    Ok(DecompositionReport {
        n,
        epsilon,
        head_len,
        alpha,
        remainder_mass,
        bound: remainder_bound(n, epsilon),
        left,
        right: right.value(),
        identity_gap: (left - right.value()).abs(),
        main_term: main.value(),
        head_term: head.value(),
        boundary_term: boundary,
        tail_term: tail,
    })
}

/// `⌊e^x⌋`, computed in binary floating point at a precision large enough
/// for every integer bit and confirmed at a second, higher precision.
pub fn floor_exp(x: u64) -> BigUint {
    let bits = (x as f64 * std::f64::consts::LOG2_E).ceil() as usize + 64;
    let at = |precision: usize| -> BigUint {
        let value = FBig::<RoundDown>::from(x).with_precision(precision).value().exp();
        let int = value.floor().to_int().value();
        BigUint::from_bytes_le(&int.into_parts().1.to_le_bytes())
    };
    let mut precision = bits;
    loop {
        let a = at(precision);
        let b = at(precision + 64);
        if a == b {
            return a;
        }
        precision += 128;
    }
}

/// Exponent limit for [`floor_exp`] when building schedules.
pub const MAX_EXPONENT: u64 = 100_000;

/// Two closed words alternating on super-exponentially growing index ranges.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillationSchedule {
    pub w0: Vec<usize>,
    pub w1: Vec<usize>,
    /// Nominal boundaries `N_p` before snapping.
    pub nominal: Vec<BigUint>,
    /// Block boundaries after snapping to whole words (plus bridge).
    pub boundaries: Vec<BigUint>,
    pub snap_offsets: Vec<u64>,
    /// `ε_p = ln N_p / N_p` on the snapped boundaries.
    pub rates: Vec<DiscountRate>,
    /// `⌊e^{N_p}⌋` for `p < p_max`.
    pub exp_floors: Vec<BigUint>,
    pub schedule: BlockSchedule,
}

impl OscillationSchedule {
    pub fn p_max(&self) -> usize {
        self.boundaries.len()
    }

    /// Word followed on `[N_{p-1}, N_p)`: `w₁` for odd `p`, `w₀` for even.
    pub fn word(&self, p: usize) -> &[usize] {
        if p % 2 == 1 {
            &self.w1
        } else {
            &self.w0
        }
    }

    /// `N_{p-1} < ln N_p` for every `p ≥ 2`, checked in integers as
    /// `N_p > ⌊e^{N_{p-1}}⌋`.
    pub fn gap_condition_holds(&self) -> bool {
        self.exp_floors.iter().zip(&self.boundaries[1..]).all(|(floor, n)| n > floor)
    }

    pub fn to_doc(&self, system: &FiniteSystem) -> ScheduleDoc {
        ScheduleDoc {
            w0: system.edge_ids(&self.w0),
            w1: system.edge_ids(&self.w1),
            n: self.boundaries.iter().map(|n| n.to_string()).collect(),
            eps: self.rates.iter().map(|r| r.scientific()).collect(),
            snap_offsets: self.snap_offsets.clone(),
        }
    }
}

/// Serialized form of an [`OscillationSchedule`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleDoc {
    pub w0: Vec<String>,
    pub w1: Vec<String>,
    #[serde(rename = "N")]
    pub n: Vec<String>,
    pub eps: Vec<String>,
    pub snap_offsets: Vec<u64>,
}

fn word_text(system: &FiniteSystem, word: &[usize]) -> String {
    system.edge_ids(word).join(",")
}

/// Blocks follow `w₁, w₀, w₁, …` on `[0, N₁), [N₁, N₂), …`; the last block
/// repeats forever. Each block is whole repetitions of its word followed by
/// the shortest bridge to the next word, ending at the least such index
/// `≥ N_p`. The next nominal boundary is `⌊e^{N_p}⌋ + 1` of the snapped one.
pub fn build_oscillation_schedule(
    system: &FiniteSystem,
    w0: &[usize],
    w1: &[usize],
    n1: &BigUint,
    p_max: usize,
) -> Result<OscillationSchedule, AsymptoticsError> {
    if p_max == 0 || p_max > 3 {
        return Err(AsymptoticsError::Scale(p_max));
    }
    if n1 < &BigUint::from(3u32) {
        return Err(AsymptoticsError::FirstBoundary(n1.to_string()));
    }
    system.check_path(w0, true)?;
    system.check_path(w1, true)?;
    let word = |p: usize| if p % 2 == 1 { w1 } else { w0 };
    let mut nominal = Vec::with_capacity(p_max);
    let mut boundaries: Vec<BigUint> = Vec::with_capacity(p_max);
    let mut snap_offsets = Vec::with_capacity(p_max);
    let mut blocks = Vec::with_capacity(p_max);
    let mut exp_floors = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let target = match boundaries.last() {
            None => n1.clone(),
            Some(prev) => {
                let x = prev.to_u64().filter(|&x| x <= MAX_EXPONENT).ok_or(AsymptoticsError::Scale(p_max))?;
                let floor = floor_exp(x);
                let target = &floor + 1u32;
                exp_floors.push(floor);
                target
            }
        };
        let w = word(p);
        let link = if p < p_max {
            let next = word(p + 1);
            bridge(system, w, next).ok_or_else(|| AsymptoticsError::NoBridge(word_text(system, w), word_text(system, next)))?
        } else {
            Vec::new()
        };
        let start = boundaries.last().cloned().unwrap_or_default();
        let fixed = &start + link.len();
        let len = w.len();
        // Least start + bridge + j·len ≥ target with j ≥ 1.
        let mut reps = if target > fixed { (&target - &fixed + len - 1u32) / len } else { BigUint::zero() };
        if reps.is_zero() {
            reps = BigUint::one();
        }
        let end = fixed + reps * len;
        snap_offsets.push((&end - &target).to_u64().unwrap_or(u64::MAX));
        blocks.push(Block::bridged(w.to_vec(), link, end.clone()));
        nominal.push(target);
        boundaries.push(end);
    }
    let schedule = BlockSchedule::new(system, blocks)?;
    Ok(OscillationSchedule {
        w0: w0.to_vec(),
        w1: w1.to_vec(),
        rates: boundaries.iter().map(DiscountRate::from_boundary).collect(),
        nominal,
        boundaries,
        snap_offsets,
        exp_floors,
        schedule,
    })
}

/// `Σ_{k≥0} ε(1-ε)^k g(σ^k ω)` along a block schedule, block by block. Each
/// block contributes a geometric sum over whole laps plus its bridge terms.
pub fn schedule_measure_apply(schedule: &BlockSchedule, values: &[f64], rate: &DiscountRate) -> f64 {
    let eps = rate.epsilon();
    let mut total = CompensatedSum::new();
    let last = schedule.blocks().len() - 1;
    for (i, block) in schedule.blocks().iter().enumerate() {
        let start = schedule.start(i);
        let len = block.word.len();
        let lap: CompensatedSum = GeometricWeights::new(eps).zip(&block.word).map(|(w, &e)| w * values[e]).collect();
        let laps_mass = if i == last {
            1.0
        } else {
            rate.one_minus_power(&(schedule.repetitions(i) * len))
        };
        total.add(rate.power(&start) * laps_mass * rate.lap_normalizer(len) * lap.value());
        if i < last && !block.bridge.is_empty() {
            let bridge_start = &block.end - block.bridge.len();
            let base = rate.power(&bridge_start);
            for (j, &e) in block.bridge.iter().enumerate() {
                total.add(eps * base * GeometricWeights::power(eps, j as u64) * values[e]);
            }
        }
    }
    total.value()
}

/// `U_ε[u∘σ - u](ω) = (u(ω) - μ_{ε,ω}(u)) / (1-ε)` along a block schedule.
pub fn schedule_coboundary_value(schedule: &BlockSchedule, u: &EdgeObservable, rate: &DiscountRate) -> f64 {
    let values = u.values();
    let u_here = values[schedule.first_edge()];
    (u_here - schedule_measure_apply(schedule, values, rate)) / (1.0 - rate.epsilon())
}

/// `-Σ_{k<terms} (1-ε)^k (u∘σ - u)(σ^k ω)` by direct summation.
pub fn schedule_coboundary_direct(schedule: &BlockSchedule, u: &EdgeObservable, epsilon: f64, terms: u64) -> f64 {
    let values = u.values();
    let mut prev = values[schedule.orbit_edge_u64(0)];
    let mut sum = CompensatedSum::new();
    for (k, w) in GeometricWeights::new(epsilon).take(terms as usize).enumerate() {
        let next = values[schedule.orbit_edge_u64(k as u64 + 1)];
        sum.add(-w * (next - prev));
        prev = next;
    }
    sum.value()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillationRow {
    pub p: usize,
    pub eps_p: String,
    #[serde(rename = "U_value")]
    pub u_value: f64,
    pub target: f64,
    pub abs_error: f64,
    pub contamination_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillationReport {
    pub rows: Vec<OscillationRow>,
    /// `μ₀(u)` and `μ₁(u)`, the integrals of `u` along `w₀` and `w₁`.
    pub mu0: f64,
    pub mu1: f64,
}

impl OscillationReport {
    pub fn separation(&self) -> f64 {
        (self.mu0 - self.mu1).abs()
    }
}

fn word_mean(u: &EdgeObservable, word: &[usize]) -> f64 {
    let total: CompensatedSum = word.iter().map(|&e| u.value(e)).collect();
    total.value() / word.len() as f64
}

/// `U_{ε_p}[u∘σ - u]` at the schedule point for `p = 1..=p_max`, against the
/// limit `u(ω) - μ_{[p]}(u)` where `μ_{[p]}` is the measure of the word
/// followed on `[N_{p-1}, N_p)`.
pub fn oscillation_experiment(
    system: &FiniteSystem,
    schedule: &OscillationSchedule,
    u: &EdgeObservable,
    strategy: Strategy,
) -> Result<OscillationReport, AsymptoticsError> {
    if u.system() != system.id() || schedule.schedule.system() != system.id() {
        return Err(SystemError::Mismatch.into());
    }
    if balance_check(system, u)?.balanced {
        return Err(AsymptoticsError::Balanced);
    }
    let mu0 = word_mean(u, &schedule.w0);
    let mu1 = word_mean(u, &schedule.w1);
    let u_here = u.value(schedule.schedule.first_edge());
    let osc = u.oscillation();
    let rows = exec::map_range(strategy, 1..schedule.p_max() + 1, |p| {
        let rate = schedule.rates[p - 1];
        let eps = rate.epsilon();
        let u_value = schedule_coboundary_value(&schedule.schedule, u, &rate);
        let target = u_here - if p % 2 == 1 { mu1 } else { mu0 };
        // Mass of μ_{ε,ω} on indices k with k+1 in the active block.
        let start = if p == 1 { BigUint::zero() } else { &schedule.boundaries[p - 2] - 1u32 };
        let inside_end = if p == schedule.p_max() {
            0.0
        } else {
            rate.power(&(&schedule.boundaries[p - 1] - 1u32))
        };
        let outside = 1.0 - (rate.power(&start) - inside_end);
        let q = schedule.word(p).len() as f64;
        OscillationRow {
            p,
            eps_p: rate.scientific(),
            u_value,
            target,
            abs_error: (u_value - target).abs(),
            contamination_estimate: osc * (outside.max(0.0) + 3.0 * q * eps),
        }
    });
    Ok(OscillationReport { rows, mu0, mu1 })
}

/// Default words: the cycles attaining the minimum (`w₀`) and maximum (`w₁`)
/// integral of `u`.
pub fn default_words(system: &FiniteSystem, u: &EdgeObservable) -> Result<(Vec<usize>, Vec<usize>), AsymptoticsError> {
    let rep = balance_check(system, u)?;
    if rep.balanced {
        return Err(AsymptoticsError::Balanced);
    }
    Ok((rep.min_witness, rep.max_witness))
}
