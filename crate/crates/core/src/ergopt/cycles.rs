use num_traits::Zero;

use super::ErgoptError;
use crate::numeric::{self, Rational};
use crate::systems::{EdgeObservable, FiniteSystem, SystemError, SystemId};

/// Periodic-orbit measure: uniform mass `1/|cycle|` on the edges of a closed
/// walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleMeasure {
    cycle: Vec<usize>,
    system: Option<SystemId>,
}

impl CycleMeasure {
    pub fn new(system: &FiniteSystem, cycle: Vec<usize>) -> Result<Self, ErgoptError> {
        if cycle.is_empty() {
            return Err(SystemError::EmptyCycle.into());
        }
        system.check_path(&cycle, true)?;
        Ok(Self {
            cycle,
            system: Some(system.id()),
        })
    }

    pub(crate) fn from_trusted(cycle: Vec<usize>) -> Self {
        Self { cycle, system: None }
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Mass of every edge of the cycle (edges repeated in the walk carry
    /// their multiplicity).
    pub fn edge_masses(&self, edge_count: usize) -> Vec<Rational> {
        let unit = Rational::new(1.into(), (self.cycle.len() as i64).into());
        let mut mass = vec![Rational::zero(); edge_count];
        for &e in &self.cycle {
            mass[e] += &unit;
        }
        mass
    }

    /// Shift invariance: the mass entering every vertex equals the mass
    /// leaving it.
    pub fn is_invariant(&self, system: &FiniteSystem) -> bool {
        let mass = self.edge_masses(system.edge_count());
        (0..system.vertex_count()).all(|v| {
            let inflow: Rational = system.in_edges(v).iter().map(|&e| &mass[e]).sum();
            let outflow: Rational = system.out_edges(v).iter().map(|&e| &mass[e]).sum();
            inflow == outflow
        })
    }

    fn check(&self, g: &EdgeObservable) -> Result<(), ErgoptError> {
        match self.system {
            Some(id) if id != g.system() => Err(SystemError::Mismatch.into()),
            _ => Ok(()),
        }
    }
}

/// `∫ g dμ` for a periodic-orbit measure, exactly.
pub fn cycle_integral_exact(mu: &CycleMeasure, g: &EdgeObservable) -> Result<Rational, ErgoptError> {
    mu.check(g)?;
    Ok(mean(g.exact(), &mu.cycle))
}

pub fn cycle_integral(mu: &CycleMeasure, g: &EdgeObservable) -> Result<f64, ErgoptError> {
    cycle_integral_exact(mu, g).map(|q| numeric::to_f64(&q))
}

pub(crate) fn mean(weights: &[Rational], cycle: &[usize]) -> Rational {
    let total: Rational = cycle.iter().map(|&e| &weights[e]).sum();
    total / Rational::from_integer((cycle.len() as i64).into())
}

/// Rotation of a closed walk starting at its smallest vertex; among several
/// occurrences of that vertex the lexicographically smallest rotation wins.
pub fn canonical_rotation(system: &FiniteSystem, cycle: &[usize]) -> Vec<usize> {
    let start = cycle.iter().map(|&e| system.edge(e).from).min().expect("nonempty cycle");
    (0..cycle.len())
        .filter(|&i| system.edge(cycle[i]).from == start)
        .map(|i| {
            let mut rotated = cycle[i..].to_vec();
            rotated.extend_from_slice(&cycle[..i]);
            rotated
        })
        .min()
        .expect("start vertex occurs on the cycle")
}
