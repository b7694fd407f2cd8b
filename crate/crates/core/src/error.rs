use thiserror::Error;

/// Errors raised by the geometry, evaluation and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("side lengths must satisfy Lx >= Ly >= Lz, got ({lx}, {ly}, {lz}); try ({}, {}, {})", .sorted[0], .sorted[1], .sorted[2])]
    Ordering {
        lx: f64,
        ly: f64,
        lz: f64,
        sorted: [f64; 3],
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid rational map: {0}")]
    SpecValidation(String),

    #[error("vector is not of unit length (|e| = {0})")]
    Normalization(f64),

    #[error("director is undefined at the vertex")]
    UndefinedAtVertex,

    /// A numerical routine ran out of budget. The best estimate is kept so
    /// callers can still report it.
    #[error("accuracy target not met: value {value} with error estimate {error} after {evaluations} evaluations")]
    Accuracy {
        value: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("phase tracking could not resolve the path after {refinements} refinements")]
    PathResolution { refinements: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("linear program is infeasible: {0}")]
    Infeasible(String),

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("objective returned a non-finite value at {0}")]
    NonFinite(f64),
}

impl Error {
    /// True for failures caused by exhausted numerical budgets rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. } | Error::PathResolution { .. } | Error::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
