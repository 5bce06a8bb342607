use num_traits::Zero;

use super::critical::critical_subgraph;
use super::cycles::mean;
use super::{ErgoptError, Method, MinMeanResult};
use crate::numeric::Rational;
use crate::systems::{EdgeObservable, FiniteSystem, SystemError};

/// Minimum cycle mean by Karp's dynamic programme.
///
/// `D_k(v)` is the minimum weight of a walk with exactly `k` edges ending at
/// `v` (starting anywhere, i.e. from an auxiliary source joined to every
/// vertex). Then
///
/// ```text
/// f̄ = min_v max_{0≤k<n} (D_n(v) - D_k(v)) / (n - k).
/// ```
///
/// The walk realising `D_n(v*)` at the optimal vertex contains a cycle of
/// mean `f̄`; it is extracted as a consistency check. The reported witness is
/// the canonical (lexicographically smallest) minimizing cycle, read off the
/// critical subgraph.
pub fn karp_min_mean(system: &FiniteSystem, f: &EdgeObservable) -> Result<MinMeanResult, ErgoptError> {
    if f.system() != system.id() {
        return Err(SystemError::Mismatch.into());
    }
    let n = system.vertex_count();
    let mut dist: Vec<Vec<Option<Rational>>> = Vec::with_capacity(n + 1);
    let mut pred: Vec<Vec<Option<usize>>> = Vec::with_capacity(n + 1);
    dist.push(vec![Some(Rational::zero()); n]);
    pred.push(vec![None; n]);
    for k in 1..=n {
        let mut row: Vec<Option<Rational>> = vec![None; n];
        let mut back = vec![None; n];
        for (i, e) in system.edges().iter().enumerate() {
            let Some(d) = &dist[k - 1][e.from] else { continue };
            let candidate = d + f.weight(i);
            if row[e.to].as_ref().is_none_or(|cur| &candidate < cur) {
                row[e.to] = Some(candidate);
                back[e.to] = Some(i);
            }
        }
        dist.push(row);
        pred.push(back);
    }

    let mut best: Option<(Rational, usize)> = None;
    for v in 0..n {
        let Some(dn) = &dist[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| {
                dist[k][v]
                    .as_ref()
                    .map(|dk| (dn - dk) / Rational::from_integer(((n - k) as i64).into()))
            })
            .max();
        if let Some(worst) = worst {
            if best.as_ref().is_none_or(|(b, _)| &worst < b) {
                best = Some((worst, v));
            }
        }
    }
    let (fbar, v_star) = best.ok_or_else(|| ErgoptError::Internal("no walk of length n".into()))?;

    let walk = backtrack(system, &pred, v_star, n);
    if !walk_cycles(system, &walk).iter().any(|c| mean(f.exact(), c) == fbar) {
        return Err(ErgoptError::Internal("Karp walk carries no cycle of the minimal mean".into()));
    }
    let witness_cycle = critical_subgraph(system, f, &fbar)?
        .smallest_cycle(system)
        .ok_or_else(|| ErgoptError::Internal("empty critical subgraph".into()))?;
    Ok(MinMeanResult {
        fbar,
        witness_cycle,
        method: Method::Karp,
    })
}

/// Edges of the optimal `len`-edge walk ending at `end`, in forward order.
fn backtrack(system: &FiniteSystem, pred: &[Vec<Option<usize>>], end: usize, len: usize) -> Vec<usize> {
    let mut walk = Vec::with_capacity(len);
    let mut at = end;
    for k in (1..=len).rev() {
        let e = pred[k][at].expect("finite D_k has a predecessor");
        walk.push(e);
        at = system.edge(e).from;
    }
    walk.reverse();
    walk
}

/// Splits a walk into the simple cycles it closes (stack decomposition).
fn walk_cycles(system: &FiniteSystem, walk: &[usize]) -> Vec<Vec<usize>> {
    let mut cycles = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut position = vec![None; system.vertex_count()];
    if let Some(&first) = walk.first() {
        position[system.edge(first).from] = Some(0);
    }
    for &e in walk {
        stack.push(e);
        let to = system.edge(e).to;
        if let Some(p) = position[to] {
            let cycle: Vec<usize> = stack.drain(p..).collect();
            for &c in &cycle {
                position[system.edge(c).to] = None;
            }
            position[to] = Some(p);
            cycles.push(cycle);
        } else {
            position[to] = Some(stack.len());
        }
    }
    cycles
}
