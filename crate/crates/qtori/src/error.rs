//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("elements live over different theta matrices")]
    ThetaMismatch,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not skew-symmetric with zero diagonal")]
    NotSkew,

    #[error("matrix must have determinant 1, got {det}")]
    NotUnimodular { det: i64 },

    #[error("covering relation violated: M theta' M^T - theta is not an integer matrix (entry ({row},{col}) = {entry})")]
    RelationViolated { row: usize, col: usize, entry: String },

    #[error("cohomological obstruction: {0}")]
    Obstruction(String),

    #[error("gauge defect at ({chi1}, {chi2}) is not in Z^2 + theta Z^2: {detail}")]
    DefectNotInLattice { chi1: String, chi2: String, detail: String },

    #[error("the given character set is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("omega is not a symmetric 2-cocycle: {0}")]
    NotCocycle(String),

    #[error("phi is not a homomorphism into Out: {0}")]
    NotHomomorphism(String),

    #[error("syntax error at position {position}: {message}")]
    PolySyntax { position: usize, message: String },

    #[error("syntax error at position {position}: {message}")]
    ExprSyntax { position: usize, message: String },

    #[error("unknown generator u{index}: algebra has {n} generators")]
    UnknownGenerator { index: usize, n: usize },

    #[error("{0}")]
    Invalid(String),
}
