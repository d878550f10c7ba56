//! Hamiltonian cycles as feasible bases of discounted occupational-measure
//! polytopes: constraint assembly, exact and float basis algebra, structural
//! classification, brute-force census and random walks over bases.

pub mod basis;
pub mod census;
pub mod graph;
mod linalg;
pub mod polytope;
pub mod scalar;
mod simplex;
pub mod structure;
pub mod walk;

pub use basis::{Basis, BasisError, PivotMove};
pub use graph::{DirectedGraph, GraphError, PlantedInstance};
pub use polytope::{Beta, NumericMode, PolytopeKind, PolytopeSystem};
pub use walk::{WalkConfig, WalkOutcome, WalkResult, WalkTarget};
