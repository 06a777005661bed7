use crate::opcalc::Kind;

/// Errors raised by the operator calculus and the group machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of range for {kind} at level {level}")]
    IndexRange { kind: Kind, index: usize, level: usize },

    #[error("levels do not compose: outer map has domain [{outer_dom}], inner map has codomain [{inner_cod}]")]
    Composition { outer_dom: usize, inner_cod: usize },

    #[error("ill-formed operator word: {0}")]
    IllFormedWord(String),

    #[error("map is not monotone: {0:?}")]
    NotMonotone(Vec<usize>),

    #[error("{0}")]
    Domain(String),

    #[error("multi-index mismatch: {0}")]
    MultiIndex(String),

    #[error("total order on level {n} must reject: {reason}")]
    Order { n: usize, reason: String },

    #[error("enumeration bound exceeded: exhaustive mode supports n <= {max}, got n = {n}")]
    EnumerationBound { n: usize, max: usize },

    #[error("invalid {what}: {reason}")]
    Validation { what: &'static str, reason: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("implementation contradiction: {0}")]
    Contradiction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
