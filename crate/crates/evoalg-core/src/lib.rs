//! Exact-arithmetic analysis of finite-dimensional evolution algebras given
//! by rational structure matrices: derivation spaces, natural decompositions,
//! twin partitions, associated graphs, canonical skew-symmetric forms with
//! explicit derivation witnesses, and the loop-count invariance decision with
//! witness bases.
//!
//! All scalars are arbitrary-precision rationals; every predicate is decided
//! exactly. Indices are 0-based throughout the API.

pub mod algebra;
pub mod basis_change;
pub mod decomposition;
pub mod derivations;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod loops;
pub mod matrix;
pub mod rational;

pub use algebra::EvolutionAlgebra;
pub use basis_change::{change_basis, is_natural, random_natural_basis, BasisChange};
pub use decomposition::{twin_partition, NaturalDecomposition, TwinPartition};
pub use derivations::{derivation_space, is_derivation, DerivationSpace};
pub use error::{Error, Result};
pub use graph::AlgebraGraph;
pub use loops::{decide_loop_invariance, loop_set, noloop_set, LoopReport, LoopVerdict};
pub use matrix::{MatrixQ, Vector};
pub use rational::Rational;
