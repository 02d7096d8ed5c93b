use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::CirculantGraph;

/// A directed edge-end: leaves `vertex` along the signed jump `step`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub vertex: usize,
    pub step: i64,
}

impl Dart {
    pub fn head(&self, g: &CirculantGraph) -> usize {
        g.add(self.vertex, self.step)
    }

    /// The same edge traversed backwards. An involution.
    pub fn reversed(&self, g: &CirculantGraph) -> Dart {
        Dart {
            vertex: self.head(g),
            step: g.canonical_step(-self.step),
        }
    }
}

/// Per-vertex cyclic order of outgoing darts: a combinatorial embedding
/// of the graph on an orientable surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    graph: CirculantGraph,
    rotation: Vec<Vec<i64>>,
}

impl RotationSystem {
    /// Validates that every vertex lists each of its darts exactly once.
    pub fn new(graph: CirculantGraph, rotation: Vec<Vec<i64>>) -> Result<Self> {
        if rotation.len() != graph.n() {
            return Err(Error::MalformedRotation {
                vertex: rotation.len().min(graph.n()),
                reason: format!("expected {} vertex rotations, got {}", graph.n(), rotation.len()),
            });
        }
        let degree = graph.degree();
        let mut rotation = rotation;
        for (v, cycle) in rotation.iter_mut().enumerate() {
            let mut seen = vec![false; degree];
            for step in cycle.iter_mut() {
                let idx = graph.step_index(*step).ok_or_else(|| Error::MalformedRotation {
                    vertex: v,
                    reason: format!("step {step} is not a jump of {graph}"),
                })?;
                if seen[idx] {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("step {step} appears twice"),
                    });
                }
                seen[idx] = true;
                *step = graph.canonical_step(*step);
            }
            if cycle.len() != degree {
                return Err(Error::MalformedRotation {
                    vertex: v,
                    reason: format!("expected {degree} darts, got {}", cycle.len()),
                });
            }
        }
        Ok(RotationSystem { graph, rotation })
    }

    /// The same cyclic order of steps at every vertex.
    pub fn uniform(graph: CirculantGraph, order: &[i64]) -> Result<Self> {
        let rotation = vec![order.to_vec(); graph.n()];
        Self::new(graph, rotation)
    }

    pub fn graph(&self) -> &CirculantGraph {
        &self.graph
    }

    pub fn rotation(&self) -> &[Vec<i64>] {
        &self.rotation
    }

    pub fn rotation_at(&self, v: usize) -> &[i64] {
        &self.rotation[v]
    }

    /// Mirror image: every vertex cycle reversed.
    pub fn reversed(&self) -> RotationSystem {
        RotationSystem {
            graph: self.graph.clone(),
            rotation: self
                .rotation
                .iter()
                .map(|c| c.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// Transports the embedding along the isomorphism `x -> unit * x`
    /// onto `C_n(unit * jumps)`.
    pub fn relabel(&self, unit: usize) -> Result<RotationSystem> {
        let n = self.graph.n();
        let target = self.graph.scaled(unit)?;
        let mul = |x: i64| ((x.rem_euclid(n as i64) as u128 * unit as u128) % n as u128) as i64;
        let mut rotation = vec![Vec::new(); n];
        for (v, cycle) in self.rotation.iter().enumerate() {
            let w = mul(v as i64) as usize;
            rotation[w] = cycle.iter().map(|&s| target.canonical_step(mul(s))).collect();
        }
        RotationSystem::new(target, rotation)
    }

    /// Successor table over dart ids: the next dart counter-clockwise at the same vertex.
    fn successors(&self) -> Vec<usize> {
        let deg = self.graph.degree();
        let mut succ = vec![0; self.graph.n() * deg];
        for (v, cycle) in self.rotation.iter().enumerate() {
            let ids: Vec<usize> = cycle
                .iter()
                .map(|&s| v * deg + self.graph.step_index(s).unwrap())
                .collect();
            for i in 0..ids.len() {
                succ[ids[i]] = ids[(i + 1) % ids.len()];
            }
        }
        succ
    }

    /// Face boundaries as orbits of `d -> succ(reverse(d))`, each starting at
    /// its smallest dart id, listed in order of that id.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let g = &self.graph;
        let deg = g.degree();
        let steps = g.steps();
        let succ = self.successors();
        let total = g.n() * deg;
        let reverse_id = |id: usize| {
            let d = Dart { vertex: id / deg, step: steps[id % deg] };
            let r = d.reversed(g);
            r.vertex * deg + g.step_index(r.step).unwrap()
        };
        let mut visited = vec![false; total];
        let mut faces = Vec::new();
        for start in 0..total {
            if visited[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut id = start;
            while !visited[id] {
                visited[id] = true;
                face.push(Dart { vertex: id / deg, step: steps[id % deg] });
                id = succ[reverse_id(id)];
            }
            faces.push(face);
        }
        faces
    }

    /// Face tracing plus Euler's relation `v + f - e = 2 - 2g`.
    pub fn trace(&self) -> Result<EmbeddingReport> {
        if !self.graph.is_connected() {
            return Err(Error::Disconnected {
                graph: self.graph.literal(),
                components: self.graph.components(),
            });
        }
        Ok(EmbeddingReport::from_faces(&self.graph, self.faces()))
    }
}

/// Traced faces of a rotation system together with the Euler genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub faces: Vec<Vec<Dart>>,
    /// face length -> number of faces
    pub face_sizes: BTreeMap<usize, usize>,
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub genus: usize,
}

impl EmbeddingReport {
    fn from_faces(g: &CirculantGraph, faces: Vec<Vec<Dart>>) -> Self {
        let mut face_sizes = BTreeMap::new();
        for face in &faces {
            *face_sizes.entry(face.len()).or_insert(0) += 1;
        }
        let (v, e, f) = (g.n(), g.edge_count(), faces.len());
        let twice = 2 + e - v - f;
        debug_assert!(twice % 2 == 0, "odd Euler characteristic deficit");
        EmbeddingReport { faces, face_sizes, v, e, f, genus: twice / 2 }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.v as i64 + self.f as i64 - self.e as i64
    }

    /// Checks `v + f - e = 2 - 2g` and that the faces use every dart once.
    pub fn euler_holds(&self) -> bool {
        let dart_total: usize = self.face_sizes.iter().map(|(s, c)| s * c).sum();
        self.euler_characteristic() == 2 - 2 * self.genus as i64 && dart_total == 2 * self.e
    }

    pub fn all_faces_of_size(&self, size: usize) -> bool {
        self.face_sizes.len() == 1 && self.face_sizes.contains_key(&size)
    }
}

/// Traces `rs` and returns its report; the graph must be connected.
pub fn trace_faces(rs: &RotationSystem) -> Result<EmbeddingReport> {
    rs.trace()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, j: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, j).unwrap()
    }

    #[test]
    fn dart_reversal_is_involution() {
        let c = g(8, &[1, 2, 4]);
        for v in 0..8 {
            for s in c.steps() {
                let d = Dart { vertex: v, step: s };
                assert_eq!(d.reversed(&c).reversed(&c), d);
            }
        }
        let d = Dart { vertex: 3, step: 4 };
        assert_eq!(d.reversed(&c), Dart { vertex: 7, step: 4 });
    }

    #[test]
    fn cycle_bounds_two_faces() {
        let rs = RotationSystem::uniform(g(5, &[1]), &[1, -1]).unwrap();
        let report = rs.trace().unwrap();
        assert_eq!((report.f, report.genus), (2, 0));
        assert!(report.euler_holds());
    }

    #[test]
    fn square_torus_of_c13() {
        let rs = RotationSystem::uniform(g(13, &[1, 6]), &[1, 6, -1, -6]).unwrap();
        let report = rs.trace().unwrap();
        assert_eq!(report.f, 13);
        assert!(report.all_faces_of_size(4));
        assert_eq!(report.genus, 1);
    }

    #[test]
    fn malformed_rotations_rejected() {
        let c = g(5, &[1, 2]);
        assert!(RotationSystem::uniform(c.clone(), &[1, 2, -1]).is_err());
        assert!(RotationSystem::uniform(c.clone(), &[1, 2, -1, 1]).is_err());
        assert!(RotationSystem::uniform(c.clone(), &[1, 2, -1, 5]).is_err());
        assert!(RotationSystem::new(c, vec![vec![1, 2, -1, -2]]).is_err());
    }

    #[test]
    fn relabel_preserves_genus() {
        let rs = RotationSystem::uniform(g(13, &[1, 6]), &[1, 6, -1, -6]).unwrap();
        let moved = rs.relabel(2).unwrap();
        assert_eq!(moved.graph(), &g(13, &[2, 1]));
        assert_eq!(moved.trace().unwrap().genus, 1);
    }

    #[test]
    fn disconnected_trace_rejected() {
        let rs = RotationSystem::uniform(g(8, &[2]), &[2, -2]).unwrap();
        assert!(matches!(rs.trace(), Err(Error::Disconnected { .. })));
        assert_eq!(rs.faces().len(), 4);
    }
}
