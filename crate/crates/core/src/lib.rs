//! Tree-Residue Vertex-Breaking (TRVB): exact solving, gadget certification,
//! reductions, hypergraph conversion, complexity classification and the
//! tree-score certificate.

pub mod classify;
pub mod corpus;
pub mod gadgets;
pub mod graph;
pub mod hypergraph;
pub mod io;
pub mod reductions;
pub mod scorecert;
pub mod solver;
pub mod variant;

mod drawing;
mod unionfind;

pub use graph::{BreakTrace, EmbeddingSummary, GraphError, HalfEdge, Multigraph, VertexId, VertexKind};
pub use variant::{validate, DegreeSet, ValidationReport, VariantSpec, Violation};
