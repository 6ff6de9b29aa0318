//! Exact computations on negative-definite plumbing graphs: the lattice and
//! its discriminant group, the series `Z(t)` and its counting functions,
//! normalized Seiberg-Witten invariants, and several checkers built on them.

pub mod checkers;
pub mod duality;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod fuzz;
pub mod graph;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod plumbing;
pub mod random;
pub mod rational;
pub mod report;
pub mod seifert;
pub mod series;
pub(crate) mod treesum;

pub use error::{Error, Result};
pub use graph::Graph;
pub use lattice::{HClass, Lattice, QCycle};
pub use plumbing::Plumbing;
pub use series::Profile;
