use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("variable {0} has no value")]
    UnassignedVariable(String),
    #[error("inconsistent system: equation {equation:?} reduces to 0 = {residual}")]
    Inconsistent { equation: String, residual: String },
    #[error("singular system: rank {rank} < {unknowns} unknowns (first dependent equation: {first_dependent:?})")]
    Singular {
        rank: usize,
        unknowns: usize,
        first_dependent: Option<String>,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown pipeline {0:?}")]
    UnknownPipeline(String),
    #[error("unknown adjunction case {0:?}")]
    UnknownCase(String),
    #[error("missing invariant {0}")]
    MissingInvariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
