//! A workbench for transition system specifications.
//!
//! Terms with recursion, SOS rules with negative premises, proof search over
//! closed terms, the closed-term and process-graph semantics of open terms,
//! bisimulation checking and executable sanity requirements on semantics.

pub mod corpus;
pub mod engine;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod sanity;
pub mod semantics;
pub mod stratify;
pub mod syntax;
pub mod term;
pub mod tss;
pub mod workspace;

pub use error::{Error, Result};
