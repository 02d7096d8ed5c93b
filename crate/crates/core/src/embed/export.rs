use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::embed::rotation::{Dart, EmbeddingReport, RotationSystem};
use crate::error::Result;
use crate::graph::{fold, CirculantGraph};

/// Serialized embedding: rotation per vertex plus the traced faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingExport {
    pub graph: CirculantGraph,
    pub rotation: Vec<Vec<i64>>,
    pub faces: Vec<Vec<Dart>>,
    pub genus: usize,
}

impl EmbeddingExport {
    pub fn new(rs: &RotationSystem, report: &EmbeddingReport) -> Self {
        EmbeddingExport {
            graph: rs.graph().clone(),
            rotation: rs.rotation().to_vec(),
            faces: report.faces.clone(),
            genus: report.genus,
        }
    }

    /// Rebuilds the rotation system and traces it again; the stored faces
    /// and genus must come back unchanged and satisfy Euler's relation.
    pub fn recheck(&self) -> Result<bool> {
        let rs = RotationSystem::new(self.graph.clone(), self.rotation.clone())?;
        let report = rs.trace()?;
        Ok(report.euler_holds() && report.faces == self.faces && report.genus == self.genus)
    }
}

/// DOT for the bare graph, edges labelled by jump.
pub fn graph_to_dot(g: &CirculantGraph) -> String {
    let mut out = format!("graph \"C_{}({})\" {{\n", g.n(), join(g.jumps()));
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (x, y) in g.edges() {
        let a = fold(y as i64 - x as i64, g.n());
        let _ = writeln!(out, "  {x} -- {y} [label=\"{a}\"];");
    }
    out.push_str("}\n");
    out
}

/// DOT with each edge labelled by its jump and the two faces it borders;
/// the face list itself is kept in a comment block.
pub fn embedding_to_dot(rs: &RotationSystem, report: &EmbeddingReport) -> String {
    let g = rs.graph();
    let mut of_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, face) in report.faces.iter().enumerate() {
        for d in face {
            let (x, y) = (d.vertex, d.head(g));
            of_edge.entry((x.min(y), x.max(y))).or_default().push(i);
        }
    }
    let mut out = format!("graph \"C_{}({})\" {{\n", g.n(), join(g.jumps()));
    let _ = writeln!(out, "  label=\"genus {}, {} faces\";", report.genus, report.f);
    for (i, face) in report.faces.iter().enumerate() {
        let walk: Vec<String> = face.iter().map(|d| d.vertex.to_string()).collect();
        let _ = writeln!(out, "  // f{i}: {}", walk.join(" "));
    }
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (x, y) in g.edges() {
        let a = fold(y as i64 - x as i64, g.n());
        let faces = of_edge.get(&(x.min(y), x.max(y))).map_or(String::new(), |fs| {
            fs.iter().map(|f| format!("f{f}")).collect::<Vec<_>>().join(",")
        });
        let _ = writeln!(out, "  {x} -- {y} [label=\"{a}: {faces}\"];");
    }
    out.push_str("}\n");
    out
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
