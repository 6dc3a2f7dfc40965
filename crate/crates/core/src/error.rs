use thiserror::Error;

/// Errors raised by the library. Each variant maps to a CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("fields do not match")]
    FieldMismatch,
    #[error("negative Frobenius twist requested")]
    NegativeTwist,
    #[error("division by zero")]
    ZeroDivision,
    #[error("evaluation point lies outside the convergence disk")]
    DivergentEvaluation,
    #[error("pole at evaluation point: {0}")]
    PoleAtEvaluationPoint(String),
    #[error("series did not converge: {0}")]
    NonConvergent(String),
    #[error("series diverges: {0}")]
    DivergentSeries(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("no polynomial basis found: {0}")]
    NonPolynomialBasis(String),
    #[error("inconsistent bases: {0}")]
    InconsistentBases(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("not a solution of the functional equation: {0}")]
    NotAFunctionalEquationSolution(String),
    #[error("pole order too high: {0}")]
    PoleOrderTooHigh(String),
    #[error("invalid motive: {0}")]
    InvalidMotive(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for bad input, 3 for computational failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse(_) | Error::InvalidField(_) | Error::InvalidMotive(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
