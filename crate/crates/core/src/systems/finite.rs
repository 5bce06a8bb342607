use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::SystemError;

/// Structural fingerprint of a [`FiniteSystem`]; points and observables carry
/// it so that mixing objects from different systems is detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemId(pub u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

/// Edge shift on a directed multigraph. Vertices and edges keep declaration
/// order, which is the tie-breaking order used throughout the crate.
#[derive(Clone, Debug)]
pub struct FiniteSystem {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    id: SystemId,
}

impl FiniteSystem {
    /// Builds a system from vertex ids and `(edge id, from, to)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, SystemError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(SystemError::Empty);
        }
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(SystemError::DuplicateId(v.clone()));
            }
        }
        let mut parsed = Vec::new();
        let mut edge_index = HashMap::new();
        for (id, from, to) in edges {
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| SystemError::UnknownVertex {
                        edge: id.clone(),
                        vertex: v.clone(),
                    })
            };
            let (from, to) = (lookup(&from)?, lookup(&to)?);
            if edge_index.insert(id.clone(), parsed.len()).is_some() {
                return Err(SystemError::DuplicateId(id));
            }
            parsed.push(Edge { id, from, to });
        }
        Self::from_parts(vertices, parsed, vertex_index, edge_index)
    }

    /// Builds a system from vertex count and `(from, to)` index pairs; ids are
    /// the decimal vertex indices and `e0, e1, ...`.
    pub fn from_indices(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, SystemError> {
        let vertices: Vec<String> = (0..vertex_count).map(|v| v.to_string()).collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (format!("e{i}"), a.to_string(), b.to_string()));
        Self::new(vertices, edges)
    }

    /// Full shift on `k` symbols: vertices `0..k`, one edge `vw` for every
    /// ordered pair, listed in lexicographic order.
    pub fn full_shift(k: usize) -> Self {
        let vertices: Vec<String> = (0..k).map(|v| v.to_string()).collect();
        let edges = (0..k).flat_map(|v| {
            (0..k).map(move |w| (format!("{v}{w}"), v.to_string(), w.to_string()))
        });
        Self::new(vertices, edges).expect("full shift is a valid system")
    }

    fn from_parts(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        vertex_index: HashMap<String, usize>,
        edge_index: HashMap<String, usize>,
    ) -> Result<Self, SystemError> {
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.from].push(i);
            in_edges[e.to].push(i);
        }
        if let Some(v) = out_edges.iter().position(Vec::is_empty) {
            return Err(SystemError::NotTotal(vertices[v].clone()));
        }
        let mut hasher = DefaultHasher::new();
        vertices.hash(&mut hasher);
        for e in &edges {
            (&e.id, e.from, e.to).hash(&mut hasher);
        }
        Ok(Self {
            vertices,
            edges,
            out_edges,
            in_edges,
            vertex_index,
            edge_index,
            id: SystemId(hasher.finish()),
        })
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn out_edges(&self, vertex: usize) -> &[usize] {
        &self.out_edges[vertex]
    }

    pub fn in_edges(&self, vertex: usize) -> &[usize] {
        &self.in_edges[vertex]
    }

    pub fn edge_by_id(&self, id: &str) -> Result<usize, SystemError> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| SystemError::UnknownEdge(id.to_string()))
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_ids(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&e| self.edges[e].id.clone()).collect()
    }

    /// `true` when `next` can follow `prev` in a path.
    pub fn composes(&self, prev: usize, next: usize) -> bool {
        self.edges[prev].to == self.edges[next].from
    }

    /// Checks that `path` is admissible; with `closed`, also that it returns
    /// to its starting vertex.
    pub fn check_path(&self, path: &[usize], closed: bool) -> Result<(), SystemError> {
        if let Some(&bad) = path.iter().find(|&&e| e >= self.edges.len()) {
            return Err(SystemError::EdgeOutOfRange(bad));
        }
        for pair in path.windows(2) {
            if !self.composes(pair[0], pair[1]) {
                return Err(self.inadmissible(pair[0], pair[1]));
            }
        }
        if closed {
            if let (Some(&first), Some(&last)) = (path.first(), path.last()) {
                if !self.composes(last, first) {
                    return Err(self.inadmissible(last, first));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn inadmissible(&self, prev: usize, next: usize) -> SystemError {
        SystemError::Inadmissible(self.edges[next].id.clone(), self.edges[prev].id.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(id: &str, a: &str, b: &str) -> (String, String, String) {
        (id.into(), a.into(), b.into())
    }

    #[test]
    fn smallest_two_cycle_is_valid() {
        let sys = FiniteSystem::new(["a", "b"], [triple("e1", "a", "b"), triple("e2", "b", "a")]).unwrap();
        assert_eq!(sys.vertex_count(), 2);
        assert_eq!(sys.edge_by_id("e2").unwrap(), 1);
        assert!(sys.composes(0, 1));
    }

    #[test]
    fn self_loop_is_valid() {
        let sys = FiniteSystem::new(["a"], [triple("l", "a", "a")]).unwrap();
        assert_eq!(sys.out_edges(0), &[0]);
    }

    #[test]
    fn sink_is_rejected() {
        let err = FiniteSystem::new(["a", "b"], [triple("e1", "a", "b")]).unwrap_err();
        assert!(err.to_string().contains("not a total shift"));
    }

    #[test]
    fn dangling_endpoint_is_rejected() {
        let err = FiniteSystem::new(["a"], [triple("e1", "a", "z")]).unwrap_err();
        assert!(err.to_string().contains("unknown vertex"));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = FiniteSystem::new(["a"], [triple("e", "a", "a"), triple("e", "a", "a")]).unwrap_err();
        assert!(err.to_string().contains("duplicate id"));
        let err = FiniteSystem::new(["a", "a"], [triple("e", "a", "a")]).unwrap_err();
        assert!(err.to_string().contains("duplicate id"));
    }

    #[test]
    fn full_shift_layout() {
        let sys = FiniteSystem::full_shift(2);
        let ids: Vec<_> = sys.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["00", "01", "10", "11"]);
        assert_ne!(sys.id(), FiniteSystem::full_shift(3).id());
        assert_eq!(sys.id(), FiniteSystem::full_shift(2).id());
    }
}
