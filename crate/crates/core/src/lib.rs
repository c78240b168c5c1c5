//! Parry-Sullivan numbers of finite directed multigraphs.
//!
//! `PS(E) = det(I - A_E)` is computed three ways: by exact fraction-free
//! elimination, by the full Leibniz expansion, and as the number of
//! even-sized minus odd-sized vertex-disjoint families of circuits. The
//! crate also groups families by the vertex permutation they induce,
//! eliminates sources and sinks, and fuzzes all of these against each other.
//!
//! With the default `parallel` feature the Leibniz expansion, the family walk
//! and the fuzz harness fan out over rayon; without it they run sequentially
//! and produce identical results.

pub mod check;
pub mod circuits;
mod error;
pub mod flow;
pub mod linear;
pub mod multigraph;
mod par;
pub mod vertex_set;

pub use circuits::{
    enumerate_circuits, group_by_induced_permutation, induced_permutation, ps_via_circuits,
    signed_family_count, verify_class_products, vertex_disjoint_families, Circuit, ClassCheck,
    ConflictGraph, SignedCount, VertexDisjointFamily,
};
pub use error::{Error, Result};
pub use flow::{
    classify_vertex, eliminate, reduce_to_closure, ReductionStep, ReductionTrace, VertexKind,
};
pub use linear::{ps_via_determinant, CycleDecomposition, IntMatrix, Permutation, Sign};
pub use multigraph::{Edge, EdgeId, Multigraph, Relabeling, VertexId};

/// Work limits for the exponential parts of the computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Most circuits enumeration may produce.
    pub circuits: usize,
    /// Most families the backtracking walk may visit.
    pub nodes: u64,
    /// Largest order for anything that iterates over all of `S_n`.
    pub factorial_limit: usize,
}

impl Caps {
    pub const DEFAULT_CIRCUITS: usize = 1_000_000;
    pub const DEFAULT_NODES: u64 = 10_000_000;
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            circuits: Self::DEFAULT_CIRCUITS,
            nodes: Self::DEFAULT_NODES,
            factorial_limit: linear::DEFAULT_FACTORIAL_LIMIT,
        }
    }
}
