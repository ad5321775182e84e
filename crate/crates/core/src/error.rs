use thiserror::Error;

use crate::parse::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis index {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("matrix operator is not square: {rows} rows, row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("invalid rewrite: {0}")]
    InvalidRewrite(String),

    #[error("invalid plan for term {term}: {reason}")]
    InvalidPlan { term: usize, reason: String },

    /// A lemma application or the final divergence check failed; this always
    /// means an engine bug and carries the offending residual.
    #[error("internal identity check failed in {stage}: residual {residual}")]
    IdentityCheck { stage: String, residual: String },

    #[error("decomposition does not verify: residual {0}")]
    Unverified(String),

    #[error("enumeration refused: {count} plans exceed the ceiling of {ceiling}")]
    EnumerationCeiling { count: String, ceiling: u64 },

    #[error("spectral name `{0}` collides with an axis or parameter")]
    NameCollision(String),

    #[error("quadric rule must be of the form {var}^2 = R with R free of {var}")]
    BadQuadricRule { var: String },

    #[error("symbol vanishes identically; no integral representation")]
    ZeroSymbol,

    #[error("all {0} candidate samples hit poles of the substitution")]
    AllPoles(usize),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),

    #[error("degenerate box: {0}")]
    DegenerateBox(String),

    #[error("unknown catalog tag `{0}`")]
    UnknownTag(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
