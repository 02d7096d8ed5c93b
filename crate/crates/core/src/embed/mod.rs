//! Rotation systems, face tracing and explicit embeddings of the
//! classified circulant families.

mod export;
mod families;
mod periodic;
mod quad;
mod rotation;

pub use families::{
    assemble_quad_family, certify, embed_antiprism_tube, embed_c8_124, embed_cycle,
    embed_planar_k2, embed_quad_family, embed_torus_square, embed_torus_triangulated,
    QuadAssembly,
};
pub use export::{embedding_to_dot, graph_to_dot, EmbeddingExport};
pub use periodic::periodic_quadrangulation;
pub use quad::TubeLevel;
pub use rotation::{trace_faces, Dart, EmbeddingReport, RotationSystem};
