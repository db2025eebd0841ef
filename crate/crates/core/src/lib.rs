//! Routing pairwise vertex-disjoint directed paths on dense digraphs.
//!
//! Given a digraph and terminal pairs `(s_1, t_1), .., (s_k, t_k)`, this
//! crate computes the *key qualities* of the instance: the Pareto-minimal
//! vectors of member sizes over all linkages (tuples of vertex-disjoint
//! paths joining each pair). On d-path-dominant digraphs — a class that
//! contains all tournaments and semicomplete digraphs — the computation is
//! exact for every fixed k. Existence and bounded-length queries reduce to
//! the key-quality set.
//!
//! The pipeline enumerates *rails* (bounded-window partial linkages with a
//! certified candidate split), wires them into a *tracker* digraph whose
//! source-to-target paths trace exactly the relevant linkages, and runs a
//! vector-valued shortest-path pass over it. Exponential-time oracles
//! ([`oracle`]) recompute every stage from definitions for validation, and
//! [`diagnostics`] instantiates the supporting structure theory on concrete
//! linkages.

pub mod diagnostics;
pub mod digraph;
mod error;
pub mod oracle;
pub mod pareto;
pub mod rails;
pub mod random;
pub mod solver;
mod tick;
pub mod tracker;

pub use digraph::{Digraph, Path, Vertex, VertexSet, MAX_VERTICES};
pub use error::{Error, Result};
pub use oracle::OracleBudget;
pub use pareto::{ParetoSet, QualityVector, VectorDigraph};
pub use rails::{InstanceSpec, Linkage, ProblemInstance, Rail};
pub use solver::{SolveOutput, SolverParams};
pub use tracker::Tracker;
