use thiserror::Error;

use crate::syntax::ParseError;
use crate::term::TermError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("rule {rule}: {message}")]
    InvalidRule { rule: String, message: String },
    #[error("signatures overlap on {0:?}")]
    SignatureOverlap(Vec<String>),
    #[error("action sets differ: {left:?} vs {right:?}")]
    ActionMismatch { left: Vec<String>, right: Vec<String> },
    #[error("negative premises present but no stratification was found")]
    NonStratified,
    #[error("proof search exceeded its budget: {0}")]
    SearchBudgetExceeded(String),
    #[error("rule {rule} needs a guessed value for `{var}` (not determined by matching)")]
    UnboundRuleVariable { rule: String, var: String },
    #[error("term `{0}` is not closed")]
    NotClosed(String),
    #[error("free variable `{0}` has no value in the valuation")]
    UnmappedFreeVariable(String),
    #[error("invalid process graph: {0}")]
    InvalidGraph(String),
    #[error("graph `{0}` is not a member of the family")]
    GraphNotInFamily(String),
    #[error("graph family is not transition-closed")]
    NotTransitionClosed,
    #[error("graph constant `{0}` clashes with a symbol of the specification")]
    ConstantClash(String),
    #[error("label `{label}` is not an action of the specification")]
    UnknownAction { label: String },
    #[error("no adequate graph family: {0}")]
    NotAdequate(String),
    #[error("recursion unfolding must be enabled for this check")]
    RequiresUnfolding,
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
