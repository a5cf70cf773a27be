//! Analysis, verification, and synthesis of quantum circuits constrained by
//! a global Abelian symmetry.
//!
//! The crate decomposes the n-qudit product basis into charge sectors and
//! irreducible invariant subspaces under k-local symmetric gates, decides
//! semi-universality by a reachability criterion, quantifies the residual
//! phase freedom exactly, and lowers block targets to explicit gate
//! sequences that a dense simulator re-verifies.

pub mod compile;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod oracle;
pub mod problem;
pub mod reach;
pub mod report;
pub mod sector;
pub mod sim;
pub mod symmetry;
pub mod target;

pub use error::{AcfError, Result};
pub use problem::{ProblemSpec, ResourceBudget};

/// Schema tag stamped on every JSON document this crate emits.
pub const SCHEMA: &str = "acf-1";
