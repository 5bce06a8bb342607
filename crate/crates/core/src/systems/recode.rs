use super::{EdgeObservable, FiniteSystem, SymbolicPoint, SystemError, SystemId};

/// Two-block recoding of an edge shift: vertices are the original edges and
/// edges are the admissible pairs `(e, e')`. Observables depending on two
/// consecutive symbols, such as a coboundary `u∘σ - u` of an edge
/// observable, become edge observables of the recoded system.
#[derive(Clone, Debug)]
pub struct TwoBlock {
    system: FiniteSystem,
    pairs: Vec<(usize, usize)>,
    base: SystemId,
}

impl TwoBlock {
    pub fn new(base: &FiniteSystem) -> Self {
        let vertices: Vec<String> = base.edges().iter().map(|e| e.id.clone()).collect();
        let mut pairs = Vec::new();
        let mut edges = Vec::new();
        for (i, e) in base.edges().iter().enumerate() {
            for &j in base.out_edges(e.to) {
                pairs.push((i, j));
                let (a, b) = (&base.edge(i).id, &base.edge(j).id);
                edges.push((format!("{a}|{b}"), a.clone(), b.clone()));
            }
        }
        let system = FiniteSystem::new(vertices, edges).expect("two-block recoding of a total shift is total");
        Self {
            system,
            pairs,
            base: base.id(),
        }
    }

    pub fn system(&self) -> &FiniteSystem {
        &self.system
    }

    /// `(e, e')` for a recoded edge index.
    pub fn pair(&self, edge: usize) -> (usize, usize) {
        self.pairs[edge]
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        self.pairs
            .iter()
            .position(|&p| p == (a, b))
            .expect("admissible pair present in recoding")
    }

    /// Image of a point under the recoding `ω ↦ (ω_k ω_{k+1})_k`.
    pub fn lift_point(&self, point: &SymbolicPoint) -> Result<SymbolicPoint, SystemError> {
        if point.system() != self.base {
            return Err(SystemError::Mismatch);
        }
        let m = point.preperiod().len() as u64;
        let q = point.cycle().len() as u64;
        let lift = |k: u64| self.pair_index(point.orbit_edge(k), point.orbit_edge(k + 1));
        let preperiod = (0..m).map(lift).collect();
        let cycle = (m..m + q).map(lift).collect();
        SymbolicPoint::new(&self.system, preperiod, cycle)
    }

    /// Inverse of [`lift_point`](Self::lift_point).
    pub fn project_point(&self, base: &FiniteSystem, point: &SymbolicPoint) -> Result<SymbolicPoint, SystemError> {
        if point.system() != self.system.id() || base.id() != self.base {
            return Err(SystemError::Mismatch);
        }
        let first = |e: &usize| self.pairs[*e].0;
        SymbolicPoint::new(
            base,
            point.preperiod().iter().map(first).collect(),
            point.cycle().iter().map(first).collect(),
        )
    }

    /// Lifts an edge observable of the base system (depends on `e` only).
    pub fn lift_observable(&self, f: &EdgeObservable) -> Result<EdgeObservable, SystemError> {
        if f.system() != self.base {
            return Err(SystemError::Mismatch);
        }
        let weights = self.pairs.iter().map(|&(a, _)| f.weight(a).clone()).collect();
        EdgeObservable::new(&self.system, weights)
    }
}

/// The coboundary `u∘σ - u` of an edge observable `u`, as an edge observable
/// on the two-block recoding.
pub fn coboundary_observable(base: &FiniteSystem, u: &EdgeObservable) -> Result<(TwoBlock, EdgeObservable), SystemError> {
    if u.system() != base.id() {
        return Err(SystemError::Mismatch);
    }
    let recoding = TwoBlock::new(base);
    let weights = recoding
        .pairs
        .iter()
        .map(|&(a, b)| u.weight(b) - u.weight(a))
        .collect();
    let f = EdgeObservable::new(&recoding.system, weights)?;
    Ok((recoding, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use crate::systems::enumerate_points;

    #[test]
    fn recoding_of_the_full_two_shift() {
        let base = FiniteSystem::full_shift(2);
        let tb = TwoBlock::new(&base);
        assert_eq!(tb.system().vertex_count(), 4);
        assert_eq!(tb.system().edge_count(), 8);
    }

    #[test]
    fn lifted_points_project_back_and_coboundaries_agree() {
        let base = FiniteSystem::full_shift(2);
        let u = EdgeObservable::from_fn(&base, |v, w| Rational::new((2 * v as i64 + w as i64).into(), 3.into()));
        let (tb, f) = coboundary_observable(&base, &u).unwrap();
        for p in enumerate_points(&base, 2, 3) {
            let lifted = tb.lift_point(&p).unwrap();
            assert_eq!(tb.project_point(&base, &lifted).unwrap(), p);
            let along = u.coboundary_exact_along(&p).unwrap();
            for k in 0..12u64 {
                assert_eq!(f.weight(lifted.orbit_edge(k)), along.at(k));
            }
        }
    }
}
