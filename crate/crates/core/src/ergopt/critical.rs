use std::collections::VecDeque;

use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::ErgoptError;
use crate::numeric::Rational;
use crate::systems::{EdgeObservable, FiniteSystem, SystemError};

/// Union of the supports of all minimizing periodic-orbit measures.
///
/// With shortest-path potentials `φ` for the reduced weights `f - f̄`, an
/// edge `v → w` is tight when `f(e) - f̄ + φ(v) - φ(w) = 0`. The critical
/// subgraph keeps the tight edges that lie on a cycle of tight edges; every
/// cycle in it has mean exactly `f̄`, and every minimizing cycle of the full
/// graph lies in it.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSubgraph {
    pub fbar: Rational,
    /// Retained edges, ascending.
    pub edges: Vec<usize>,
    /// Retained vertices, ascending.
    pub vertices: Vec<usize>,
    /// Potential of every vertex of the system.
    pub potentials: Vec<Rational>,
    edge_count: usize,
}

impl CriticalSubgraph {
    pub fn edge_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.edge_count];
        for &e in &self.edges {
            mask[e] = true;
        }
        mask
    }

    pub fn contains_edge(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// Reduced weight `f(e) - f̄ + φ(from) - φ(to)`, nonnegative on every edge.
    pub fn reduced_weight(&self, system: &FiniteSystem, f: &EdgeObservable, edge: usize) -> Rational {
        let e = system.edge(edge);
        f.weight(edge) - &self.fbar + &self.potentials[e.from] - &self.potentials[e.to]
    }

    /// Lexicographically smallest simple cycle of the subgraph, written from
    /// its smallest vertex.
    pub fn smallest_cycle(&self, system: &FiniteSystem) -> Option<Vec<usize>> {
        smallest_cycle_within(system, &self.edge_mask())
    }
}

/// Bellman–Ford potentials for `f - f̄` from an auxiliary source joined to
/// every vertex by a zero-weight edge.
fn potentials(system: &FiniteSystem, f: &EdgeObservable, fbar: &Rational) -> Result<Vec<Rational>, ErgoptError> {
    let n = system.vertex_count();
    let reduced: Vec<Rational> = f.exact().iter().map(|w| w - fbar).collect();
    let mut dist = vec![Rational::zero(); n];
    for round in 0..=n {
        let mut changed = false;
        for (i, e) in system.edges().iter().enumerate() {
            let candidate = &dist[e.from] + &reduced[i];
            if candidate < dist[e.to] {
                dist[e.to] = candidate;
                changed = true;
            }
        }
        if !changed {
            return Ok(dist);
        }
        if round == n {
            break;
        }
    }
    Err(ErgoptError::NotMinimum)
}

pub fn critical_subgraph(system: &FiniteSystem, f: &EdgeObservable, fbar: &Rational) -> Result<CriticalSubgraph, ErgoptError> {
    if f.system() != system.id() {
        return Err(SystemError::Mismatch.into());
    }
    let phi = potentials(system, f, fbar)?;
    let tight: Vec<usize> = system
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, e)| (f.weight(*i) - fbar + &phi[e.from] - &phi[e.to]).is_zero())
        .map(|(i, _)| i)
        .collect();

    let mut graph = DiGraph::<(), ()>::with_capacity(system.vertex_count(), tight.len());
    let nodes: Vec<NodeIndex> = (0..system.vertex_count()).map(|_| graph.add_node(())).collect();
    for &i in &tight {
        let e = system.edge(i);
        graph.add_edge(nodes[e.from], nodes[e.to], ());
    }
    let mut component = vec![0usize; system.vertex_count()];
    for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for node in scc {
            component[node.index()] = c;
        }
    }
    let edges: Vec<usize> = tight
        .into_iter()
        .filter(|&i| {
            let e = system.edge(i);
            component[e.from] == component[e.to]
        })
        .collect();
    if edges.is_empty() {
        // No cycle attains the value: it lies strictly below the minimum.
        return Err(ErgoptError::NotMinimum);
    }
    let mut vertices: Vec<usize> = edges.iter().map(|&i| system.edge(i).from).collect();
    vertices.sort_unstable();
    vertices.dedup();
    Ok(CriticalSubgraph {
        fbar: fbar.clone(),
        edges,
        vertices,
        potentials: phi,
        edge_count: system.edge_count(),
    })
}

/// Greedy construction of the lexicographically smallest simple cycle using
/// only edges in `allowed`: from each candidate start vertex `s`, extend by
/// the smallest edge that closes the cycle or still admits a simple return
/// to `s` through unused vertices larger than `s`.
pub(crate) fn smallest_cycle_within(system: &FiniteSystem, allowed: &[bool]) -> Option<Vec<usize>> {
    (0..system.vertex_count())
        .filter_map(|s| smallest_cycle_from(system, allowed, s))
        .min()
}

fn smallest_cycle_from(system: &FiniteSystem, allowed: &[bool], start: usize) -> Option<Vec<usize>> {
    let n = system.vertex_count();
    let mut used = vec![false; n];
    used[start] = true;
    let mut path = Vec::new();
    let mut at = start;
    loop {
        let step = system.out_edges(at).iter().copied().find(|&e| {
            if !allowed[e] {
                return false;
            }
            let to = system.edge(e).to;
            to == start || (to > start && !used[to] && returns(system, allowed, &used, start, to))
        })?;
        path.push(step);
        let to = system.edge(step).to;
        if to == start {
            return Some(path);
        }
        used[to] = true;
        at = to;
    }
}

fn returns(system: &FiniteSystem, allowed: &[bool], used: &[bool], start: usize, from: usize) -> bool {
    let mut seen = used.to_vec();
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &e in system.out_edges(v) {
            if !allowed[e] {
                continue;
            }
            let to = system.edge(e).to;
            if to == start {
                return true;
            }
            if to > start && !seen[to] {
                seen[to] = true;
                queue.push_back(to);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergopt::brute::simple_cycles_within;
    use crate::ergopt::cycles::mean;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn constant_weights_keep_everything() {
        let sys = FiniteSystem::full_shift(3);
        let f = EdgeObservable::constant(&sys, r(4));
        let c = critical_subgraph(&sys, &f, &r(4)).unwrap();
        assert_eq!(c.edges, (0..9).collect::<Vec<_>>());
        assert_eq!(c.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn two_vertex_example_keeps_the_two_cycle() {
        let sys = FiniteSystem::full_shift(2);
        let f = EdgeObservable::from_integers(&sys, &[3, 1, 1, 2]).unwrap();
        let c = critical_subgraph(&sys, &f, &r(1)).unwrap();
        assert_eq!(sys.edge_ids(&c.edges), ["01", "10"]);
        for e in 0..4 {
            assert!(c.reduced_weight(&sys, &f, e) >= r(0));
        }
        assert_eq!(c.smallest_cycle(&sys), Some(vec![1, 2]));
    }

    #[test]
    fn disjoint_minimizing_loops_are_both_kept() {
        let sys = FiniteSystem::from_indices(2, &[(0, 0), (1, 1), (0, 1)]).unwrap();
        let f = EdgeObservable::from_integers(&sys, &[2, 2, 7]).unwrap();
        let c = critical_subgraph(&sys, &f, &r(2)).unwrap();
        assert_eq!(c.edges, vec![0, 1]);
    }

    #[test]
    fn wrong_values_are_detected() {
        let sys = FiniteSystem::full_shift(2);
        let f = EdgeObservable::from_integers(&sys, &[3, 1, 1, 2]).unwrap();
        assert_eq!(critical_subgraph(&sys, &f, &r(2)), Err(ErgoptError::NotMinimum));
        assert_eq!(critical_subgraph(&sys, &f, &r(0)), Err(ErgoptError::NotMinimum));
    }

    #[test]
    fn greedy_smallest_cycle_matches_enumeration() {
        let sys = FiniteSystem::from_indices(
            4,
            &[(0, 1), (1, 2), (2, 0), (1, 0), (2, 3), (3, 1), (3, 3), (0, 2), (2, 1)],
        )
        .unwrap();
        let all = vec![true; sys.edge_count()];
        assert_eq!(smallest_cycle_within(&sys, &all), simple_cycles_within(&sys, &all).into_iter().min());
        let mut mask = all.clone();
        mask[0] = false;
        assert_eq!(smallest_cycle_within(&sys, &mask), simple_cycles_within(&sys, &mask).into_iter().min());
        let f = EdgeObservable::from_integers(&sys, &[1, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        let c = critical_subgraph(&sys, &f, &r(1)).unwrap();
        for cycle in simple_cycles_within(&sys, &c.edge_mask()) {
            assert_eq!(mean(f.exact(), &cycle), r(1));
        }
    }
}
