//! Principal minor ideals of generic matrices, checked over prime fields.
//!
//! The crate encodes vanishing patterns of Plücker coordinates as simple
//! graphs, classifies the graphs that actually occur, and cross-checks the
//! resulting dimension and decomposition statements against exhaustive point
//! counts over `F_q`.

pub mod budget;
pub mod census;
pub mod field;
pub mod graphs;
pub mod grassmannian;
pub mod matrix;

pub use budget::Budget;
pub use census::{CensusError, CensusMethod, CensusRecord, RankSpec, StratumSpec};
pub use field::{FieldElement, FieldError, PrimeModulus};
pub use graphs::{GraphError, PermissiblePair, SimpleGraph};
pub use grassmannian::{Factorization, GrassError, PluckerVector, SubsetIndexer};
pub use matrix::{ExactMatrix, IndexSet, MatrixError, SymmetryAction};
