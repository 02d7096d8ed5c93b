pub mod adam;
pub mod classify;
pub mod embed;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{decompose, CirculantGraph, ComponentStructure, Decomposition, Ladder};
