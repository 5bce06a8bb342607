use super::karp::karp_min_mean;
use super::{ErgoptError, MinMeanResult};
use crate::numeric::Rational;
use crate::systems::{BirkhoffProfile, EdgeObservable, FiniteSystem, SymbolicPoint, SystemError};

/// A point whose Birkhoff averages never exceed `f̄`: every partial sum of
/// `f - f̄` along its orbit is `≤ 0`.
///
/// On a minimizing cycle the reduced weights `r_i = f(e_i) - f̄` sum to zero,
/// so the prefix sums `P_j = r_0 + … + r_{j-1}` are periodic. Starting the
/// cycle right after a maximum of `P` makes every later prefix sum
/// `P_{j+n} - P_j ≤ 0`.
pub fn morris_point(system: &FiniteSystem, f: &EdgeObservable) -> Result<SymbolicPoint, ErgoptError> {
    let min = karp_min_mean(system, f)?;
    morris_point_from(system, f, &min)
}

pub fn morris_point_from(system: &FiniteSystem, f: &EdgeObservable, min: &MinMeanResult) -> Result<SymbolicPoint, ErgoptError> {
    if f.system() != system.id() {
        return Err(SystemError::Mismatch.into());
    }
    let cycle = &min.witness_cycle;
    let mut prefix = Rational::from_integer(0.into());
    let mut best = (prefix.clone(), 0usize);
    for (j, &e) in cycle.iter().enumerate() {
        prefix += f.weight(e) - &min.fbar;
        if prefix > best.0 {
            best = (prefix.clone(), (j + 1) % cycle.len());
        }
    }
    let mut rotated = cycle[best.1..].to_vec();
    rotated.extend_from_slice(&cycle[..best.1]);
    let point = SymbolicPoint::periodic(system, rotated)?;
    if !prefix_sums_nonpositive(&point, f, &min.fbar, 3 * cycle.len() as u64)? {
        return Err(ErgoptError::Internal("Morris point violates the prefix-sum bound".into()));
    }
    Ok(point)
}

/// `Σ_{k<n} (f - f̄)∘σ^k(ω) ≤ 0` for every `1 ≤ n ≤ n_max`, exactly.
pub fn prefix_sums_nonpositive(point: &SymbolicPoint, f: &EdgeObservable, fbar: &Rational, n_max: u64) -> Result<bool, ErgoptError> {
    let reduced = f.exact_along(point)?.map(|w| w - fbar);
    let max = BirkhoffProfile::new(&reduced).max_over(n_max);
    Ok(max.is_none_or(|m| m.value <= Rational::from_integer(0.into())))
}
