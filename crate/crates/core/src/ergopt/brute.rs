use super::cycles::mean;
use super::{ErgoptError, Method, MinMeanResult};
use crate::systems::{EdgeObservable, FiniteSystem, SystemError};

/// Simple-cycle enumeration is exponential; this caps the vertex count.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 12;

/// All simple cycles (no repeated vertex), each written from its smallest
/// vertex, in lexicographic order of edge indices. Parallel edges yield
/// distinct cycles.
pub fn simple_cycles(system: &FiniteSystem) -> Vec<Vec<usize>> {
    simple_cycles_within(system, &vec![true; system.edge_count()])
}

/// [`simple_cycles`] restricted to edges whose mask entry is `true`.
pub fn simple_cycles_within(system: &FiniteSystem, allowed: &[bool]) -> Vec<Vec<usize>> {
    let n = system.vertex_count();
    let mut out = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        on_path[start] = true;
        extend(system, allowed, start, start, &mut on_path, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

fn extend(
    system: &FiniteSystem,
    allowed: &[bool],
    start: usize,
    at: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for &e in system.out_edges(at) {
        if !allowed[e] {
            continue;
        }
        let to = system.edge(e).to;
        path.push(e);
        if to == start {
            out.push(path.clone());
        } else if to > start && !on_path[to] {
            on_path[to] = true;
            extend(system, allowed, start, to, on_path, path, out);
            on_path[to] = false;
        }
        path.pop();
    }
}

/// Minimum cycle mean by exhaustive enumeration of simple cycles.
pub fn brute_force_min_cycle_mean(system: &FiniteSystem, f: &EdgeObservable) -> Result<MinMeanResult, ErgoptError> {
    if f.system() != system.id() {
        return Err(SystemError::Mismatch.into());
    }
    if system.vertex_count() > BRUTE_FORCE_MAX_VERTICES {
        return Err(ErgoptError::TooLarge {
            max: BRUTE_FORCE_MAX_VERTICES,
            got: system.vertex_count(),
        });
    }
    // Cycles arrive sorted, so keeping the first strict minimum applies the
    // lexicographic tie-break.
    let mut best: Option<(crate::numeric::Rational, Vec<usize>)> = None;
    for cycle in simple_cycles(system) {
        let m = mean(f.exact(), &cycle);
        if best.as_ref().is_none_or(|(b, _)| &m < b) {
            best = Some((m, cycle));
        }
    }
    let (fbar, witness_cycle) = best.ok_or_else(|| ErgoptError::Internal("total graph without cycles".into()))?;
    Ok(MinMeanResult {
        fbar,
        witness_cycle,
        method: Method::BruteForce,
    })
}
