use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("state is not normalized (trace {trace})")]
    Normalization { trace: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("ensembles must share one probability list")]
    ProbabilityMismatch,

    #[error("invalid factor selection for partial trace")]
    InvalidFactors,

    #[error("parameter `{name}` out of range: {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("Kraus operators are not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("a channel needs at least one Kraus operator")]
    EmptyKraus,

    #[error("parameter vector must not be all zero")]
    ZeroParameters,

    #[error("{what} of size {size} exceeds cap {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("cannot fit {k} orthonormal codewords in dimension {dim}")]
    TooManyCodewords { k: usize, dim: usize },

    #[error("probabilities must be non-negative and sum to 1 (sum {sum})")]
    InvalidProbabilities { sum: f64 },

    #[error("input state must be maximally mixed")]
    NonUniformInput,

    #[error("threshold bracket does not change sign")]
    NoBracket,
}
