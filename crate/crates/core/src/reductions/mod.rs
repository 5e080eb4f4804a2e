//! Answer-preserving transformations: directed preprocessing, the
//! Hamiltonicity-to-TRVB construction, and local rewrites of TRVB instances.

pub mod directed;
pub mod rewrites;
pub mod rk;

use thiserror::Error;

use crate::graph::{GraphError, VertexId};

pub use directed::{
    find_planar_non_alternating, ham_brute, hamiltonian_cycle, preprocess_to_degree2,
    simplify_over_edge, DirectedMultigraph, Preprocessed,
};
pub use rewrites::{contract_unbreakable_adjacent, insert_unbreakable_deg2};
pub use rk::{r_k, RkOutput};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("unknown arc {0}")]
    UnknownArc(usize),
    #[error("arc {0} is a self-loop")]
    SelfLoopArc(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {vertex} has in-degree {in_degree} and out-degree {out_degree}")]
    DegreeOutOfRange {
        vertex: VertexId,
        in_degree: usize,
        out_degree: usize,
    },
    #[error("rotation system required")]
    MissingRotation,
    #[error("rotation system is not planar")]
    NotPlanar,
    #[error("vertex {0} alternates between incoming and outgoing arcs")]
    Alternating(VertexId),
    #[error("k must be at least 4, got {0}")]
    InvalidK(u32),
    #[error("empty graph")]
    Empty,
    #[error("{vertices} vertices exceed the brute-force guard of {guard}")]
    GuardExceeded { vertices: usize, guard: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
