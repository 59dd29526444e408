use thiserror::Error;

/// Errors raised by walk construction and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("symbol evaluated at z = 0")]
    ZeroArgument,

    #[error("symbol not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("cutoff {cutoff} too small to classify decay (need at least 4)")]
    CutoffTooSmall { cutoff: usize },

    #[error("dimension too large for exact expansion: n = {n} exceeds {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("grid resolution exceeded: band permutation not stable up to M = {max_grid}")]
    GridResolutionExceeded { max_grid: usize },

    #[error("winding not integral (rounding residual {residual:.3e})")]
    WindingNotIntegral { residual: f64 },

    #[error("eigenvalue cluster ambiguous at base grid point {index}")]
    ClusterAmbiguous { index: usize },

    #[error("lambda not unimodular (max ||lambda| - 1| = {deviation:.3e})")]
    LambdaNotUnimodular { deviation: f64 },

    #[error("nonzero winding: unwrapped argument fails to close (winding {winding})")]
    NonzeroWinding { winding: i64 },

    #[error("under-resolved band: spectral tail fraction {tail:.3e} of argument energy")]
    UnderResolved { tail: f64 },

    #[error("initial vector not rapidly decreasing")]
    NotRapidlyDecreasing,

    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
