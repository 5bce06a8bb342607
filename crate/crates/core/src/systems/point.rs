use std::collections::BTreeSet;

use super::{FiniteSystem, SystemError, SystemId};

/// Sequence `head · cycle · cycle · …`.
#[derive(Clone, Debug, PartialEq)]
pub struct EventuallyPeriodic<T> {
    pub head: Vec<T>,
    pub cycle: Vec<T>,
}

impl<T> EventuallyPeriodic<T> {
    pub fn new(head: Vec<T>, cycle: Vec<T>) -> Self {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        Self { head, cycle }
    }

    pub fn at(&self, k: u64) -> &T {
        let m = self.head.len() as u64;
        if k < m {
            &self.head[k as usize]
        } else {
            &self.cycle[((k - m) % self.cycle.len() as u64) as usize]
        }
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> EventuallyPeriodic<U> {
        EventuallyPeriodic {
            head: self.head.iter().map(&f).collect(),
            cycle: self.cycle.iter().map(&f).collect(),
        }
    }
}

impl<T: Clone> EventuallyPeriodic<T> {
    /// The sequence started `n` steps later.
    pub fn shifted(&self, n: u64) -> Self {
        let m = self.head.len() as u64;
        if n <= m {
            return Self {
                head: self.head[n as usize..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let q = self.cycle.len();
        let r = ((n - m) % q as u64) as usize;
        let mut cycle = self.cycle[r..].to_vec();
        cycle.extend_from_slice(&self.cycle[..r]);
        Self { head: Vec::new(), cycle }
    }
}

/// Eventually periodic infinite edge path `preperiod · cycle^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicPoint {
    preperiod: Vec<usize>,
    cycle: Vec<usize>,
    system: SystemId,
}

impl SymbolicPoint {
    pub fn new(system: &FiniteSystem, preperiod: Vec<usize>, cycle: Vec<usize>) -> Result<Self, SystemError> {
        if cycle.is_empty() {
            return Err(SystemError::EmptyCycle);
        }
        system.check_path(&cycle, true)?;
        system.check_path(&preperiod, false)?;
        if let Some(&last) = preperiod.last() {
            if !system.composes(last, cycle[0]) {
                return Err(system.inadmissible(last, cycle[0]));
            }
        }
        Ok(Self {
            preperiod,
            cycle,
            system: system.id(),
        })
    }

    pub fn periodic(system: &FiniteSystem, cycle: Vec<usize>) -> Result<Self, SystemError> {
        Self::new(system, Vec::new(), cycle)
    }

    pub fn from_ids(system: &FiniteSystem, preperiod: &[&str], cycle: &[&str]) -> Result<Self, SystemError> {
        let lookup = |ids: &[&str]| ids.iter().map(|id| system.edge_by_id(id)).collect::<Result<Vec<_>, _>>();
        Self::new(system, lookup(preperiod)?, lookup(cycle)?)
    }

    /// Fixed point of a self-loop.
    pub fn fixed(system: &FiniteSystem, edge: usize) -> Result<Self, SystemError> {
        Self::periodic(system, vec![edge])
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The `k`-th edge of the path (`k = 0` is the current symbol).
    pub fn orbit_edge(&self, k: u64) -> usize {
        let m = self.preperiod.len() as u64;
        if k < m {
            self.preperiod[k as usize]
        } else {
            self.cycle[((k - m) % self.cycle.len() as u64) as usize]
        }
    }

    pub fn first_edge(&self) -> usize {
        self.orbit_edge(0)
    }

    /// `σ^n(ω)`.
    pub fn shift_by(&self, n: u64) -> Self {
        let path = self.edge_sequence().shifted(n);
        Self {
            preperiod: path.head,
            cycle: path.cycle,
            system: self.system,
        }
    }

    /// `σ(ω)`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn edge_sequence(&self) -> EventuallyPeriodic<usize> {
        EventuallyPeriodic {
            head: self.preperiod.clone(),
            cycle: self.cycle.clone(),
        }
    }

    /// Shortest representation of the same infinite path: primitive cycle and
    /// no preperiod symbol that could be absorbed into the cycle.
    pub fn canonical(&self) -> Self {
        let mut cycle = self.cycle.clone();
        let q = cycle.len();
        if let Some(d) = (1..=q).find(|d| q.is_multiple_of(*d) && (0..q).all(|i| cycle[i] == cycle[i % d])) {
            cycle.truncate(d);
        }
        let mut preperiod = self.preperiod.clone();
        while preperiod.last() == cycle.last() && !preperiod.is_empty() {
            preperiod.pop();
            cycle.rotate_right(1);
        }
        Self {
            preperiod,
            cycle,
            system: self.system,
        }
    }

    pub fn describe(&self, system: &FiniteSystem) -> String {
        let head = system.edge_ids(&self.preperiod).join(" ");
        let cycle = system.edge_ids(&self.cycle).join(" ");
        if head.is_empty() {
            format!("({cycle})^inf")
        } else {
            format!("{head} ({cycle})^inf")
        }
    }
}

/// All distinct eventually periodic points with preperiod length at most
/// `max_preperiod` and cycle length at most `max_cycle`, in canonical form
/// and sorted.
pub fn enumerate_points(system: &FiniteSystem, max_preperiod: usize, max_cycle: usize) -> Vec<SymbolicPoint> {
    enumerate_points_within(system, &vec![true; system.edge_count()], max_preperiod, max_cycle)
}

/// Same as [`enumerate_points`], restricted to paths using only edges whose
/// mask entry is `true`.
pub fn enumerate_points_within(
    system: &FiniteSystem,
    allowed: &[bool],
    max_preperiod: usize,
    max_cycle: usize,
) -> Vec<SymbolicPoint> {
    let mut cycles = Vec::new();
    for start in 0..system.edge_count() {
        if allowed[start] {
            closed_walks(system, allowed, vec![start], max_cycle, &mut cycles);
        }
    }
    let mut points = BTreeSet::new();
    for cycle in cycles {
        let mut prefixes = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..max_preperiod {
            let mut next = Vec::new();
            for path in &frontier {
                let head_vertex = match path.first() {
                    Some(&e) => system.edge(e).from,
                    None => system.edge(cycle[0]).from,
                };
                for &e in system.in_edges(head_vertex) {
                    if allowed[e] {
                        let mut extended = Vec::with_capacity(path.len() + 1);
                        extended.push(e);
                        extended.extend_from_slice(path);
                        next.push(extended);
                    }
                }
            }
            prefixes.extend(next.iter().cloned());
            frontier = next;
        }
        for pre in prefixes {
            let point = SymbolicPoint {
                preperiod: pre,
                cycle: cycle.clone(),
                system: system.id(),
            };
            points.insert(point.canonical());
        }
    }
    points.into_iter().collect()
}

fn closed_walks(system: &FiniteSystem, allowed: &[bool], walk: Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
    let last = *walk.last().unwrap();
    if system.composes(last, walk[0]) {
        out.push(walk.clone());
    }
    if walk.len() == max_len {
        return;
    }
    for &e in system.out_edges(system.edge(last).to) {
        if allowed[e] {
            let mut next = walk.clone();
            next.push(e);
            closed_walks(system, allowed, next, max_len, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// a -e1-> b, b -e2-> c, c -e3-> b
    fn chain() -> FiniteSystem {
        FiniteSystem::new(
            ["a", "b", "c"],
            [
                ("e1".into(), "a".into(), "b".into()),
                ("e2".into(), "b".into(), "c".into()),
                ("e3".into(), "c".into(), "b".into()),
                ("e4".into(), "b".into(), "a".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn orbit_edge_reduces_modulo_the_cycle() {
        let sys = chain();
        let p = SymbolicPoint::from_ids(&sys, &["e1"], &["e2", "e3"]).unwrap();
        // e1 e2 e3 e2 e3 e2 ...
        assert_eq!(p.orbit_edge(0), 0);
        assert_eq!(p.orbit_edge(3), 1);
        assert_eq!(p.orbit_edge(4), 2);
        assert_eq!(p.orbit_edge(1_000_000_000_001), 1);
        assert_eq!(p.orbit_edge(1_000_000_000_000), 2);
    }

    #[test]
    fn fixed_point_is_constant() {
        let sys = FiniteSystem::full_shift(2);
        let p = SymbolicPoint::fixed(&sys, 3).unwrap();
        assert!((0..50).all(|k| p.orbit_edge(k) == 3));
    }

    #[test]
    fn inadmissible_points_are_rejected() {
        let sys = chain();
        assert!(SymbolicPoint::from_ids(&sys, &[], &["e1"]).is_err());
        assert!(SymbolicPoint::from_ids(&sys, &["e3"], &["e3", "e2"]).is_err());
        assert!(matches!(SymbolicPoint::new(&sys, vec![], vec![]), Err(SystemError::EmptyCycle)));
        assert!(SymbolicPoint::from_ids(&sys, &["e2"], &["e4", "e1"]).is_err());
    }

    #[test]
    fn shift_drops_one_symbol() {
        let sys = chain();
        let p = SymbolicPoint::from_ids(&sys, &["e1"], &["e2", "e3"]).unwrap();
        for n in 0..7u64 {
            let s = p.shift_by(n);
            for k in 0..20 {
                assert_eq!(s.orbit_edge(k), p.orbit_edge(k + n));
            }
        }
    }

    #[test]
    fn canonical_form_merges_representations() {
        let sys = FiniteSystem::full_shift(2);
        let a = SymbolicPoint::from_ids(&sys, &["00", "01", "10"], &["01", "10", "01", "10"]).unwrap();
        let b = SymbolicPoint::from_ids(&sys, &["00"], &["01", "10"]).unwrap();
        assert_eq!(a.canonical(), b);
    }

    #[test]
    fn enumeration_on_the_full_two_shift() {
        let sys = FiniteSystem::full_shift(2);
        // Fixed points of the 2-shift: 0^inf and 1^inf, as edge paths 00 and 11.
        let periodic_1 = enumerate_points(&sys, 0, 1);
        assert_eq!(periodic_1.len(), 2);
        // Points with period dividing 2: 0^inf, 1^inf and the two phases of (01)^inf.
        assert_eq!(enumerate_points(&sys, 0, 2).len(), 4);
        let all = enumerate_points(&sys, 3, 3);
        for p in &all {
            assert_eq!(&p.canonical(), p);
            assert!(p.preperiod().len() <= 3 && p.cycle().len() <= 3);
        }
        let unique: BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn eventually_periodic_shift() {
        let s = EventuallyPeriodic::new(vec![1, 2], vec![3, 4, 5]);
        for n in 0..10 {
            let t = s.shifted(n);
            for k in 0..10 {
                assert_eq!(t.at(k), s.at(k + n));
            }
        }
    }
}
