//! Seeded generators for random systems, observables and points.
//!
//! All randomness in tests, acceptance runs and the CLI flows from a single
//! `u64` seed through [`rng`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::Rational;
use crate::systems::{EdgeObservable, FiniteSystem, SymbolicPoint};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct SystemShape {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for SystemShape {
    fn default() -> Self {
        Self {
            max_vertices: 8,
            max_edges: 20,
        }
    }
}

/// Random total multigraph: every vertex first receives one outgoing edge,
/// then extra edges are drawn uniformly (loops and parallel edges allowed).
pub fn random_system<R: Rng>(rng: &mut R, shape: SystemShape) -> FiniteSystem {
    let n = rng.gen_range(1..=shape.max_vertices);
    let m = rng.gen_range(n..=shape.max_edges.max(n));
    let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, rng.gen_range(0..n))).collect();
    edges.extend((n..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
    FiniteSystem::from_indices(n, &edges).expect("every vertex has an outgoing edge")
}

pub fn integer_weights<R: Rng>(rng: &mut R, system: &FiniteSystem, lo: i64, hi: i64) -> EdgeObservable {
    let w: Vec<i64> = (0..system.edge_count()).map(|_| rng.gen_range(lo..=hi)).collect();
    EdgeObservable::from_integers(system, &w).expect("one weight per edge")
}

/// Random rationals `p/q` with `1 ≤ q ≤ max_den` and `lo ≤ p/q ≤ hi`.
pub fn rational_weights<R: Rng>(rng: &mut R, system: &FiniteSystem, lo: i64, hi: i64, max_den: i64) -> EdgeObservable {
    let w = (0..system.edge_count())
        .map(|_| {
            let den = rng.gen_range(1..=max_den);
            let num = rng.gen_range(lo * den..=hi * den);
            Rational::new(num.into(), den.into())
        })
        .collect();
    EdgeObservable::new(system, w).expect("one weight per edge")
}

/// Random eventually periodic point: a random walk from a random vertex,
/// stopped at the first repeated vertex.
pub fn random_point<R: Rng>(rng: &mut R, system: &FiniteSystem) -> SymbolicPoint {
    let mut seen = vec![None; system.vertex_count()];
    let mut at = rng.gen_range(0..system.vertex_count());
    let mut walk = Vec::new();
    loop {
        seen[at] = Some(walk.len());
        let out = system.out_edges(at);
        let e = out[rng.gen_range(0..out.len())];
        walk.push(e);
        at = system.edge(e).to;
        if let Some(p) = seen[at] {
            let cycle = walk.split_off(p);
            return SymbolicPoint::new(system, walk, cycle).expect("walk is admissible");
        }
    }
}
