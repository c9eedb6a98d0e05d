use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("symmetrizer is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("symmetrizer is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("operator is not negative in the weighted inner product (lambda_max {0:e})")]
    NotNegative(f64),

    #[error("polynomial has no positive imaginary stability interval")]
    NoImaginaryInterval,

    #[error("polynomial has no Taylor prefix (order r = 0)")]
    NoTaylorPrefix,

    #[error("SSP decomposition is only provided for s in {{2, 3, 4}}, got {0}")]
    UnsupportedStages(usize),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("stencil spans {width} points but the grid has only {n}")]
    StencilTooWide { width: usize, n: usize },

    #[error("stencil has variable coefficients; use symbol_at")]
    VariableCoefficient,

    #[error("mass matrix is singular")]
    MassMatrixSingular,

    #[error("numerical range is degenerate for this polynomial (max boundary |p| = {0:e})")]
    DegenerateRange(f64),

    #[error("unknown scenario `{name}`; known scenarios: {}", known.join(", "))]
    UnknownScenario { name: String, known: Vec<String> },

    #[error("unknown override `{key}`; valid keys: {}", valid.join(", "))]
    InvalidOverride { key: String, valid: Vec<String> },

    #[error("unknown operator `{name}`; known operators: {}", known.join(", "))]
    UnknownOperator { name: String, known: Vec<String> },

    #[error("unknown method `{name}`; known methods: rk1, rk2, rk3, rk4 or a coefficient list")]
    UnknownMethod { name: String },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
